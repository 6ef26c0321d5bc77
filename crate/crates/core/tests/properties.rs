use proptest::prelude::*;

use modcalc::arith::{is_prime, pow_mod};
use modcalc::calculus::{clean_derivative, clean_derivative_kernel, kernel_i, CalcFn};
use modcalc::digital::digits;
use modcalc::dioph::{dioph_search, SearchSpec};
use modcalc::interp::{interpolate_fn, tabulate};
use modcalc::lcg::Lcg;
use modcalc::padic::{find_generator, lm_full, pow_e, PrecisionContext};
use modcalc::ring::{carmichael, centered_rep, crt_combine, radical};

fn prime_power() -> impl Strategy<Value = (u64, u32)> {
    prop_oneof![
        (Just(3u64), 1u32..=8),
        (Just(5u64), 1u32..=5),
        (Just(7u64), 1u32..=4),
        (Just(11u64), 1u32..=3),
        (Just(13u64), 1u32..=3),
    ]
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lm_is_a_homomorphism((p, m) in prime_power(), x in 1u64..1_000_000, y in 1u64..1_000_000) {
        prop_assume!(x % p != 0 && y % p != 0);
        let ctx = PrecisionContext::new(p, m).unwrap();
        let gp = find_generator(&ctx).unwrap();
        let lx = lm_full(x as i128, &gp).unwrap();
        let ly = lm_full(y as i128, &gp).unwrap();
        let lxy = lm_full((x as i128) * (y as i128), &gp).unwrap();
        prop_assert_eq!(lxy, lx + ly);
        let q = ctx.modulus();
        prop_assert_eq!(pow_mod(gp.e.rep(), lx.rep(), q), x % q);
    }

    #[test]
    fn exp_is_additive((p, m) in prime_power(), a in -500i128..500, b in -500i128..500) {
        let ctx = PrecisionContext::new(p, m).unwrap();
        let ea = pow_e(a, &ctx).unwrap();
        let eb = pow_e(b, &ctx).unwrap();
        prop_assert_eq!(pow_e(a + b, &ctx).unwrap(), ea * eb);
    }

    #[test]
    fn centered_rep_window(x in any::<i64>(), q in 1u64..1_000_000) {
        let r = centered_rep(x as i128, q);
        prop_assert_eq!((r - x as i128).rem_euclid(q as i128), 0);
        prop_assert!(2 * r > -(q as i128) && 2 * r <= q as i128);
    }

    #[test]
    fn crt_recovers_residues(x in 0u64..1_000_000_000, i in 0usize..5, j in 0usize..5) {
        let mods = [7u64, 9, 16, 25, 11];
        prop_assume!(i != j);
        let (a, b) = (mods[i], mods[j]);
        let r = crt_combine(&[((x % a) as i128, a), ((x % b) as i128, b)]).unwrap();
        prop_assert_eq!(r.modulus(), a * b);
        prop_assert_eq!(r.rep(), x % (a * b));
    }

    #[test]
    fn carmichael_kills_units(x in 2u64..3000, y in 1u64..3000) {
        prop_assume!(num_integer::Integer::gcd(&x, &y) == 1);
        let l = carmichael(x).unwrap();
        prop_assert_eq!(pow_mod(y % x, l, x), 1 % x);
        prop_assert_eq!(x % radical(x), 0);
    }

    #[test]
    fn interpolation_roundtrip(p in small_prime(), seed in any::<u64>()) {
        let mut g = Lcg::new(seed);
        let t: Vec<u64> = (0..p).map(|_| g.below(p)).collect();
        let f = interpolate_fn(&t, p).unwrap();
        prop_assert!(f.is_clean(p));
        prop_assert_eq!(tabulate(&f, p), t);
    }

    #[test]
    fn kernel_is_antisymmetric(p in small_prime(), t in 0u64..13, x in 0u64..13) {
        let k = kernel_i(p).unwrap();
        prop_assert_eq!((k.at(t, x) + k.at(x, t)) % p, 0);
    }

    #[test]
    fn derivation_ladder_matches_kernel(p in prop::sample::select(vec![3u64, 5, 7]), seed in any::<u64>()) {
        let mut g = Lcg::new(seed);
        let coeffs: Vec<i128> = (0..p).map(|_| g.below(p) as i128).collect();
        let f = CalcFn::univariate(&coeffs, p).unwrap();
        prop_assert_eq!(clean_derivative(&f, 0).table(), clean_derivative_kernel(&f, 0).table());
    }

    #[test]
    fn digits_reconstruct(x in -100_000i128..100_000, q in 2u64..12, n in 1u32..6) {
        let d = digits(x, q, n).unwrap();
        prop_assert_eq!(d.digits.len(), n as usize);
        prop_assert_eq!(d.reconstruct(), centered_rep(x, q.pow(n)));
    }

    #[test]
    fn prefilter_never_changes_results(
        amax in 1u64..25,
        cmax in 1u64..60,
        p in 1u32..5,
        q in 1u32..5,
    ) {
        let mut spec = SearchSpec::new(amax, amax, cmax, vec![p], vec![q]);
        let with = dioph_search(&spec).unwrap();
        spec.prefilter = false;
        let without = dioph_search(&spec).unwrap();
        prop_assert!(with.iter().all(|i| i.holds() && i.a < i.b));
        prop_assert_eq!(with, without);
    }

    #[test]
    fn lcg_is_deterministic(seed in any::<u64>(), n in 1u64..1000) {
        let mut a = Lcg::new(seed);
        let mut b = Lcg::new(seed);
        for _ in 0..16 {
            let v = a.below(n);
            prop_assert!(v < n);
            prop_assert_eq!(v, b.below(n));
        }
    }
}

/// Exhaustive roundtrip at the sizes the log tables are used for.
#[test]
fn exhaustive_log_roundtrip_small() {
    for p in (3u64..30).filter(|&p| is_prime(p)) {
        for m in 1..=2 {
            let ctx = PrecisionContext::new(p, m).unwrap();
            let gp = find_generator(&ctx).unwrap();
            let q = ctx.modulus();
            for x in (1..q).filter(|x| x % p != 0) {
                let l = lm_full(x as i128, &gp).unwrap();
                assert_eq!(pow_mod(gp.e.rep(), l.rep(), q), x);
            }
        }
    }
}
