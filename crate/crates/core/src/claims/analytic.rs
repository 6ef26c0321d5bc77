//! Checkers for interpolation, the exponential/logarithm layer, Gaussian
//! moduli and digital functions.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::json;

use super::{odd_prime_guard, prime_guard, Outcome, Tally, MAX_SCAN_PRIME};
use crate::arith::{self, add_mod, checked_pow, inv_mod, mul_mod, pow_mod, sub_mod};
use crate::claims::ClaimParams;
use crate::digital::{self, independence_check, square_invert, SquareGroup};
use crate::gauss;
use crate::interp::{self, exp_table, exponent_interpolate, interpolate_fn, local_expand, tabulate};
use crate::lcg::Lcg;
use crate::linalg::det_mod_prime;
use crate::padic::{self, compute_e, find_generator, lm_full, lm_principal, pow_e, PrecisionContext};
use crate::ring::Residue;
use crate::valued::ValuedRational;

/// Largest modulus scanned exhaustively by the unit-group checkers.
const EXHAUSTIVE_UNITS: u64 = 100_000;

fn primitive_root(p: u64) -> u64 {
    (2..p.max(3)).find(|&g| arith::multiplicative_order(g, p, p - 1) == p - 1).unwrap_or(1)
}

/// Order of `a` mod `n` by repeated multiplication.
fn brute_order(a: u64, n: u64) -> u64 {
    let mut x = a % n;
    let mut k = 1;
    while x != 1 % n {
        x = mul_mod(x, a, n);
        k += 1;
        if k > n {
            return 0;
        }
    }
    k
}

fn units(q: u64, p: u64) -> impl Iterator<Item = u64> {
    (1..q).filter(move |x| x % p != 0)
}

/// Either every unit or a seeded sample of `budget` of them.
fn unit_sample(q: u64, p: u64, budget: u64, seed: u64) -> (Vec<u64>, bool) {
    if q <= EXHAUSTIVE_UNITS {
        return (units(q, p).collect(), true);
    }
    let mut g = Lcg::new(seed);
    let mut out = Vec::new();
    while (out.len() as u64) < budget.min(EXHAUSTIVE_UNITS) {
        let x = 1 + g.below((q - 1).min(1 << 31));
        if x % p != 0 {
            out.push(x);
        }
    }
    (out, false)
}

fn horner(coeffs: &[u64], x: u64, q: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, q), c, q))
}

pub(crate) fn c1(cp: &ClaimParams) -> Outcome {
    let p = cp.p;
    let o = guard!(odd_or_two(Outcome::new().param("p", p), p));
    let total = (p as u128).checked_pow(p as u32).unwrap_or(u128::MAX);
    let exhaustive = total <= 1_000_000;
    let cases = if exhaustive { total as u64 } else { cp.budget.min(2000) };
    let mut o = o.param("tables", cases).param("exhaustive", exhaustive);
    if !exhaustive {
        o = o.param("seed", cp.seed);
    }
    let mut g = Lcg::new(cp.seed);
    let tables: Vec<Vec<u64>> = (0..cases)
        .map(|idx| {
            if exhaustive {
                let mut r = idx;
                (0..p)
                    .map(|_| {
                        let d = r % p;
                        r /= p;
                        d
                    })
                    .collect()
            } else {
                (0..p).map(|_| g.below(p)).collect()
            }
        })
        .collect();
    let tallies: Vec<Tally> = tables
        .par_chunks(4096)
        .map(|chunk| {
            let mut t = Tally::new("interpolation roundtrip");
            for table in chunk {
                let poly = match interpolate_fn(table, p) {
                    Ok(f) => f,
                    Err(_) => {
                        t.check(false, || json!({ "table": table, "error": "interpolation failed" }), || true);
                        continue;
                    }
                };
                let coeffs = poly.coeffs_univariate();
                let ok = coeffs.len() <= p as usize && tabulate(&poly, p) == *table;
                t.check(
                    ok,
                    || json!({ "table": table, "coefficients": coeffs }),
                    || (0..p).any(|x| horner(&coeffs, x, p) != table[x as usize]) || coeffs.len() > p as usize,
                );
            }
            t
        })
        .collect();
    let mut roundtrip = Tally::new("interpolation roundtrip");
    for t in tallies {
        roundtrip.merge(t);
    }
    // Vandermonde on the nodes 0..p-1
    let vdm: Vec<Vec<u64>> = (0..p).map(|x| (0..p).map(|k| pow_mod(x, k, p)).collect()).collect();
    let det = det_mod_prime(&vdm, p);
    let mut basis = Tally::new("Vandermonde determinant nonzero");
    basis.check(
        det != 0,
        || json!({ "determinant": det }),
        || {
            let mut prod = 1u64;
            for i in 0..p {
                for j in i + 1..p {
                    prod = mul_mod(prod, j - i, p);
                }
            }
            prod == 0
        },
    );
    let mut o = o.tally(roundtrip).tally(basis);
    if exhaustive {
        o.note("roundtrip over all p^p tables with degree <= p-1 makes evaluation a bijection");
    }
    o
}

/// C1 also admits p = 2 (interpolation needs only a field).
fn odd_or_two(o: Outcome, p: u64) -> Result<Outcome, Outcome> {
    let o = prime_guard(o, p)?;
    if p > MAX_SCAN_PRIME {
        return Err(o.skip(format!("p = {p} exceeds the scan guard {MAX_SCAN_PRIME}")));
    }
    Ok(o)
}

pub(crate) fn c2(cp: &ClaimParams) -> Outcome {
    let p = cp.p;
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p), p, MAX_SCAN_PRIME));
    let e = primitive_root(p);
    let o = o.param("e", e);
    let table = try_or!(o, exp_table(e, p));
    let mut bij = Tally::new("e^j is a bijection onto the units");
    let mut sorted = table.clone();
    sorted.sort_unstable();
    bij.check(
        sorted == (1..p).collect::<Vec<_>>(),
        || json!({ "table": table }),
        || (0..p - 1).map(|j| pow_mod(e, j, p)).collect::<BTreeSet<_>>().len() != (p - 1) as usize,
    );
    // non-generators are rejected
    let mut reject = Tally::new("non-generators rejected");
    for a in 2..p {
        if arith::multiplicative_order(a, p, p - 1) != p - 1 {
            reject.check(exp_table(a, p).is_err(), || json!({ "accepted_non_generator": a }), || brute_order(a, p) < p - 1);
        }
    }
    // every function of j mod p-1 is Σ c_i e^(ij)
    let d = (p - 1) as u32;
    let total = (p as u128).pow(d);
    let exhaustive = total <= 200_000;
    let cases = if exhaustive { total as u64 } else { cp.budget.min(2000) };
    let mut g = Lcg::new(cp.seed);
    let mut span = Tally::new("exponent interpolation roundtrip");
    for idx in 0..cases {
        let values: Vec<u64> = if exhaustive {
            let mut r = idx;
            (0..d)
                .map(|_| {
                    let v = r % p;
                    r /= p;
                    v
                })
                .collect()
        } else {
            (0..d).map(|_| g.below(p)).collect()
        };
        let sol = try_or!(o, exponent_interpolate(&values, e, p));
        let ok = sol.as_ref().is_some_and(|c| {
            (0..d as u64).all(|j| {
                let x = pow_mod(e, j, p);
                horner(c, x, p) == values[j as usize]
            })
        });
        span.check(ok, || json!({ "values": values }), || sol.is_none());
    }
    o.param("functions", cases).param("exhaustive", exhaustive).tally(bij).tally(reject).tally(span)
}

pub(crate) fn c3(cp: &ClaimParams) -> Outcome {
    let (p, m) = (cp.p, cp.m);
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p).param("m", m), p, u64::MAX));
    let ctx = try_or!(o, PrecisionContext::new(p, m));
    let q = ctx.modulus();
    if q > 1_000_000 {
        return o.skip(format!("p^m = {q} beyond the enumeration guard 10^6"));
    }
    let gp = try_or!(o, find_generator(&ctx));
    let e = gp.e.rep();
    let phi = ctx.group_order();
    let o = o.param("e", e);
    let mut t = Tally::new("generator order and enumeration");
    let powers = try_or!(o, padic::DlogTable::build(e, q));
    t.check(powers.order() == phi, || json!({ "e": e, "order": powers.order(), "expected": phi }), || brute_order(e, q) != phi);
    let covered: BTreeSet<u64> = powers.powers.iter().copied().collect();
    let unit_set: BTreeSet<u64> = units(q, p).collect();
    t.check(
        covered == unit_set,
        || json!({ "missing": unit_set.difference(&covered).take(5).collect::<Vec<_>>() }),
        || unit_set.iter().any(|&u| !covered.contains(&u)),
    );
    let lam = try_or!(o, crate::ring::carmichael(q));
    t.check(lam == phi, || json!({ "carmichael": lam, "phi": phi }), || units(q, p).map(|u| brute_order(u, q)).max() != Some(phi));
    o.tally(t)
}

pub(crate) fn c4(cp: &ClaimParams) -> Outcome {
    let (p, m) = (cp.p, cp.m);
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p).param("m", m), p, u64::MAX));
    let mut t = Tally::new("lm(-1) at precisions 1..m");
    for k in 1..=m {
        let ctx = try_or!(o, PrecisionContext::new(p, k));
        let gp = try_or!(o, find_generator(&ctx));
        let l = try_or!(o, lm_full(-1, &gp)).rep();
        let want = ctx.group_order() / 2;
        let q = ctx.modulus();
        let e = gp.e.rep();
        t.check(
            l == want,
            || json!({ "m": k, "e": e, "lm": l, "expected": want }),
            || pow_mod(e, want, q) == q - 1 && pow_mod(e, l, q) != q - 1,
        );
    }
    o.tally(t)
}

pub(crate) fn c5(cp: &ClaimParams) -> Outcome {
    let (p, m) = (cp.p, cp.m);
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p).param("m", m), p, u64::MAX));
    let ctx = try_or!(o, PrecisionContext::new(p, m));
    let q = ctx.modulus();
    let gp = try_or!(o, find_generator(&ctx));
    let (e, big_e) = (gp.e.rep(), gp.big_e.rep());
    let mut o = o.param("e", e).param("E", big_e);
    let mut basic = Tally::new("E = 1+p mod p^2, ord E = p^(m-1), e^(1-p^m) = E");
    let p2 = q.min(p * p);
    basic.check(big_e % p2 == (1 + p) % p2, || json!({ "E": big_e }), || compute_e(&ctx).map(|r| r.rep() % p2 != (1 + p) % p2).unwrap_or(true));
    let ord = if q <= 10_000_000 { brute_order(big_e, q) } else { arith::multiplicative_order(big_e, q, ctx.group_order()) };
    basic.check(ord == q / p, || json!({ "order_of_E": ord }), || arith::multiplicative_order(big_e, q, ctx.group_order()) != q / p);
    basic.check(pow_mod(e, gp.compat_exponent(), q) == big_e, || json!({ "e": e }), || true);
    o = o.tally(basic);
    if m >= 2 {
        let mut base = Tally::new("lm_E(E) = 1 and lm_E(x^(1-p^m)) = lm(x) mod p^(m-1)");
        let one = try_or!(o, lm_principal(gp.big_e, &ctx));
        base.check(one.rep() == 1 % one.modulus(), || json!({ "lm_E(E)": one.rep() }), || true);
        let (xs, exhaustive) = unit_sample(q, p, cp.budget, cp.seed);
        let pm1 = q / p;
        for x in xs {
            let w = Residue::from_u64(pow_mod(x, gp.compat_exponent(), q), q);
            let lhs = try_or!(o, lm_principal(w, &ctx)).rep();
            let rhs = try_or!(o, lm_full(x as i128, &gp)).rep() % pm1;
            base.check(
                lhs == rhs,
                || json!({ "x": x, "lm_E": lhs, "lm_e mod p^(m-1)": rhs }),
                || pow_mod(big_e, rhs, q) == w.rep() && pow_mod(big_e, lhs, q) != w.rep(),
            );
        }
        o = o.param("exhaustive", exhaustive).tally(base);
    }
    o.with_note("lm_E is the series logarithm to base E; its normalization lm_E(E) = 1 is checked, not assumed")
}

pub(crate) fn c6(cp: &ClaimParams) -> Outcome {
    let p = cp.p;
    let o = guard!(odd_or_two(Outcome::new().param("p", p), p));
    let top = p.pow(3);
    let o = o.param("m_max", top);
    let mut t = Tally::new("d_m > d_(p^n) for p^n < m <= p^3");
    let recheck_d = |m: u64| -> i64 { m as i64 - (1..=m).map(|k| arith::valuation(k as u128, p) as i64).sum::<i64>() };
    for n in 0..3u32 {
        let pn = p.pow(n);
        let base = padic::d_valuation(p, pn);
        for m in pn + 1..=top {
            let d = padic::d_valuation(p, m);
            t.check(d > base, || json!({ "n": n, "m": m, "d_m": d, "d_p^n": base }), || recheck_d(m) <= recheck_d(pn));
        }
    }
    o.tally(t)
}

/// Coefficient range of the exhaustive Taylor scan.
const TAYLOR_COEFF_MAX: u64 = 8;
const TAYLOR_DEGREE: usize = 4;

pub(crate) fn c7(cp: &ClaimParams) -> Outcome {
    let (p, m) = (cp.p, cp.m);
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p).param("m", m), p, MAX_SCAN_PRIME));
    let ctx = try_or!(o, PrecisionContext::new(p, m));
    let q = ctx.modulus();
    let deg = TAYLOR_DEGREE;
    let base = TAYLOR_COEFF_MAX + 1;
    let polys_total = base.pow(deg as u32 + 1);
    let points = q.saturating_mul(q);
    let exhaustive = polys_total.saturating_mul(points) <= 100_000_000;
    let o = o
        .param("degree", deg as u64)
        .param("coeff_max", TAYLOR_COEFF_MAX)
        .param("exhaustive", exhaustive);
    taylor_scan(o, &ctx, exhaustive, cp)
}

/// `f(x + pz)` against the weighted Taylor sum for every polynomial of
/// degree `<= 4` with coefficients `0..=8`. The sum is linear in the
/// coefficients, so it is evaluated from per-monomial expansions computed
/// by the library Taylor routine.
fn taylor_scan(o: Outcome, ctx: &PrecisionContext, exhaustive: bool, cp: &ClaimParams) -> Outcome {
    let p = ctx.p;
    let q = ctx.modulus();
    let deg = TAYLOR_DEGREE;
    let base = TAYLOR_COEFF_MAX + 1;
    let polys: Vec<Vec<u64>> = if exhaustive {
        (0..base.pow(deg as u32 + 1))
            .map(|mut idx| {
                (0..=deg)
                    .map(|_| {
                        let c = idx % base;
                        idx /= base;
                        c
                    })
                    .collect()
            })
            .collect()
    } else {
        let mut g = Lcg::new(cp.seed);
        (0..cp.budget.min(2000)).map(|_| (0..=deg).map(|_| g.below(base)).collect()).collect()
    };
    let pts: Vec<(u64, u64)> = if q * q <= 1_000_000 {
        (0..q).flat_map(|x| (0..q).map(move |z| (x, z))).collect()
    } else {
        let mut g = Lcg::new(cp.seed ^ 0x7a11);
        (0..1000).map(|_| (g.below(q.min(1 << 31)), g.below(q.min(1 << 31)))).collect()
    };
    if p == 2 && pts.iter().any(|&(_, z)| z % 2 == 1) {
        unreachable!("even scan builds its own points");
    }
    // expansion[pt][k] = Taylor sum of x^k at the point
    let mut expansion = Vec::with_capacity(pts.len());
    for &(x, z) in &pts {
        let w = try_or!(o, padic::taylor_weights(z as i128, ctx, deg + 1));
        let row: Vec<u64> = (0..=deg)
            .map(|k| {
                let mut mono = vec![0i128; deg + 1];
                mono[k] = 1;
                padic::taylor_with_weights(&mono, x, &w, q)
            })
            .collect();
        expansion.push(row);
    }
    let tallies: Vec<Tally> = polys
        .par_chunks(1024)
        .map(|chunk| {
            let mut t = Tally::new("Taylor identity");
            for c in chunk {
                for (i, &(x, z)) in pts.iter().enumerate() {
                    let lhs = horner(c, (x + mul_mod(p, z, q)) % q, q);
                    let rhs = c.iter().zip(&expansion[i]).fold(0, |a, (&ck, &ek)| add_mod(a, mul_mod(ck, ek, q), q));
                    t.check(lhs == rhs, || json!({ "coeffs": c, "x": x, "z": z, "lhs": lhs, "rhs": rhs }), || {
                        exact_taylor_violated(c, x, z, p, q)
                    });
                }
            }
            t
        })
        .collect();
    let mut t = Tally::new("Taylor identity");
    for x in tallies {
        t.merge(x);
    }
    o.param("polynomials", polys.len() as u64).param("points", pts.len() as u64).tally(t)
}

/// Both sides in exact integers: `f(x+pz)` and `Σ_i p^i z^i C(k,i) x^(k-i)`.
fn exact_taylor_violated(c: &[u64], x: u64, z: u64, p: u64, q: u64) -> bool {
    let xb = BigUint::from(x);
    let arg = &xb + BigUint::from(p) * BigUint::from(z);
    let qb = BigUint::from(q);
    let mut lhs = BigUint::from(0u32);
    for (k, &ck) in c.iter().enumerate() {
        lhs += BigUint::from(ck) * arg.pow(k as u32);
    }
    let mut rhs = BigUint::from(0u32);
    for (k, &ck) in c.iter().enumerate() {
        for i in 0..=k {
            let b = BigUint::from(arith::binomial(k as u64, i as u64));
            rhs += BigUint::from(ck) * b * (BigUint::from(p) * BigUint::from(z)).pow(i as u32) * xb.pow((k - i) as u32);
        }
    }
    lhs % &qb != rhs % &qb
}

pub(crate) fn c8(cp: &ClaimParams) -> Outcome {
    let (p, m) = (cp.p, cp.m);
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p).param("m", m), p, u64::MAX));
    let ctx = try_or!(o, PrecisionContext::new(p, m));
    let Ok(ctx2) = PrecisionContext::new(p, 2 * m) else {
        return o.skip(format!("p^(2m) = {p}^{} beyond 64-bit moduli", 2 * m));
    };
    let q = ctx.modulus();
    let big_e2 = try_or!(o, compute_e(&ctx2)).rep();
    let q2 = ctx2.modulus();
    let xs: Vec<u64> = if q <= EXHAUSTIVE_UNITS { (0..q).collect() } else { unit_sample(q, p, cp.budget, cp.seed).0 };
    let mut diff = Tally::new("(E^(x+p^m) - E^x)/p^m = p E^x mod p^m");
    let mut formal = Tally::new("formal series derivative = p E^x");
    for &x in &xs {
        let a = try_or!(o, pow_e(x as i128, &ctx2)).rep();
        let b = try_or!(o, pow_e((x + q) as i128, &ctx2)).rep();
        let num = sub_mod(b, a, q2);
        let want = mul_mod(p, try_or!(o, pow_e(x as i128, &ctx)).rep(), q);
        let got = (num % q == 0).then(|| (num / q) % q);
        diff.check(got == Some(want), || json!({ "x": x, "quotient": got, "p E^x": want }), || {
            let a = pow_mod(big_e2, x, q2);
            let b = pow_mod(big_e2, x + q, q2);
            let n = sub_mod(b, a, q2);
            n % q != 0 || (n / q) % q != mul_mod(p, pow_mod(big_e2 % q, x, q), q)
        });
        // Σ_{i>=1} i (p^i/i!) x^(i-1)
        let mut acc = 0u64;
        let mut xi = 1 % q;
        for i in 1..=ctx.n_terms {
            let c = ValuedRational::p_power_over_factorial(p, i, m) * ValuedRational::from_int(i as i128, p, m);
            let r = try_or!(o, c.reduce(m)).rep();
            acc = add_mod(acc, mul_mod(r, xi, q), q);
            xi = mul_mod(xi, x % q, q);
        }
        formal.check(acc == want, || json!({ "x": x, "series_derivative": acc, "p E^x": want }), || {
            mul_mod(p, pow_mod(big_e2 % q, x, q), q) != acc
        });
    }
    o.param("points", xs.len() as u64).tally(diff).tally(formal)
}

/// The `y ≡ 1 (mod p)` with `y^p ≡ w (mod p^(n+1))`, lifted digit by digit.
fn brute_pth_root(w: u64, p: u64, n: u32) -> Option<u64> {
    let top = p.pow(n + 1);
    let mut y = 1u64;
    for k in 1..n {
        let pk = p.pow(k);
        let modk = pk * p;
        let check = modk * p;
        y = (0..p).map(|d| y + d * pk).find(|&c| pow_mod(c, p, check.min(top)) == w % check.min(top))? % modk;
    }
    (pow_mod(y, p, top) == w % top).then_some(y % p.pow(n))
}

pub(crate) fn c9(cp: &ClaimParams) -> Outcome {
    let (p, m) = (cp.p, cp.m);
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p).param("m", m), p, u64::MAX));
    let n = 2 * m + 2;
    let Some(top) = checked_pow(p, n + 1) else {
        return o.skip(format!("working precision p^{} beyond 64-bit moduli", n + 1));
    };
    let ctx_n = try_or!(o, PrecisionContext::new(p, n));
    let qn = ctx_n.modulus();
    let q = p.pow(m);
    let h = p.pow(m + 2);
    let o = o.param("step", format!("{p}^{}", m + 2)).param("working_precision", n);
    let root = |x: u64| -> crate::Result<u64> {
        let w = Residue::from_u64((1 + x) % top, top);
        Ok(padic::pth_root_unit(w, &ctx_n)?.rep())
    };
    let count = q.min(cp.budget);
    let mut t = Tally::new("p·g'(x) = g(x)/(1+x) at x = p^2 t");
    for s in 0..count {
        let x = (p * p * s) % qn;
        let g0 = try_or!(o, root(x));
        let g1 = try_or!(o, root((x + h) % qn));
        let d = sub_mod(g1, g0, qn);
        let got = (d % (h / p) == 0).then(|| (d / (h / p)) % q);
        let inv = inv_mod((1 + x) % q, q).expect("1 + x is a unit");
        let want = mul_mod(g0 % q, inv, q);
        t.check(got == Some(want), || json!({ "x": x, "p_times_quotient": got, "expected": want }), || {
            match (brute_pth_root((1 + x) % top, p, n), brute_pth_root((1 + x + h) % top, p, n)) {
                (Some(a), Some(b)) => {
                    let d = sub_mod(b, a, qn);
                    d % (h / p) != 0 || (d / (h / p)) % q != mul_mod(a % q, inv, q)
                }
                _ => true,
            }
        });
    }
    o.param("points", count).tally(t)
}

/// Least `k` with `p^m | k!`; polynomial functions mod `p^m` have a
/// representative of degree `< k`.
fn polynomial_degree_bound(p: u64, m: u32) -> u64 {
    (1..).find(|&k| arith::factorial_valuation(k, p) >= m as u64).unwrap()
}

fn solvable_on_units(values: &[(u64, u64)], p: u64, m: u32, degree: u64) -> bool {
    let q = p.pow(m);
    let a: Vec<Vec<u64>> = values.iter().map(|&(x, _)| (0..degree).map(|k| pow_mod(x, k, q)).collect()).collect();
    let b: Vec<u64> = values.iter().map(|&(_, v)| v).collect();
    crate::linalg::solve_prime_power(&a, &b, p, m).is_some()
}

pub(crate) fn c10(cp: &ClaimParams) -> Outcome {
    let (p, m) = (cp.p, cp.m);
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p).param("m", m), p, MAX_SCAN_PRIME));
    let ctx = try_or!(o, PrecisionContext::new(p, m));
    let q = ctx.modulus();
    if q > 2_000 {
        return o.skip(format!("p^m = {q} beyond the interpolation guard 2000"));
    }
    let values: Vec<(u64, u64)> = try_or!(o, units(q, p).map(|x| Ok((x, padic::plm(x as i128, &ctx)?.rep()))).collect::<crate::Result<Vec<_>>>());
    let bound = polynomial_degree_bound(p, m);
    let mut t = Tally::new("plm interpolable by a polynomial on the units");
    let ok = solvable_on_units(&values, p, m, bound);
    t.check(ok, || json!({ "degree_bound": bound, "nodes": values.len() }), || !solvable_on_units(&values, p, m, 2 * bound));
    o.param("degree_bound", bound)
        .with_note("every polynomial function mod p^m has a representative of degree below the least k with p^m | k!")
        .tally(t)
}

/// `Σ_{i>=1} (-1)^(i+1) y^i / i` modulo `p^n`, `p | y`.
fn log1p_series(y: i128, p: u64, n: u32) -> crate::Result<u64> {
    let q = p.pow(n);
    let yv = ValuedRational::from_int(y, p, n);
    let mut acc = 0u64;
    let mut i = 1u64;
    loop {
        let term = yv.pow(i as u32) * ValuedRational::from_int(i as i128, p, n).recip()?;
        match term.valuation() {
            None => break,
            Some(v) if v >= n as i64 && i as i64 - arith::valuation(i as u128, p) as i64 >= n as i64 => {
                // every later term has valuation i - v_p(i) >= n too
                if i > 4 * n as u64 + 8 {
                    break;
                }
            }
            _ => {}
        }
        let r = term.reduce(n)?.rep();
        acc = if i % 2 == 1 { add_mod(acc, r, q) } else { sub_mod(acc, r, q) };
        i += 1;
    }
    Ok(acc)
}

pub(crate) fn c11(cp: &ClaimParams) -> Outcome {
    let m = cp.m;
    let qs: Vec<u64> = match cp.q {
        Some(q) => vec![q],
        None => vec![3, 5, 7, 9, 15, 21, 45],
    };
    let mut o = Outcome::new().param("m", m).param("q", json!(qs));
    if qs.iter().any(|q| q % 2 == 0 || *q < 3) {
        return o.skip("even or trivial q is outside the odd logarithm machinery");
    }
    let count = cp.budget.min(60);
    o = o.param("x_range", format!("0..{count}"));
    let mut t = Tally::new("p lm(1+xq) = log series mod p^(km), per component p^k || q");
    for &q in &qs {
        for (p, k) in arith::factorize(q) {
            let n = k * m;
            let Some(pn) = checked_pow(p, n) else {
                return o.skip(format!("component precision {p}^{n} beyond 64-bit moduli"));
            };
            let ctx = try_or!(o, PrecisionContext::new(p, n));
            let gp = try_or!(o, find_generator(&ctx));
            for x in 0..count {
                let y = (x as i128) * (q as i128);
                let Ok(l) = lm_full(1 + y, &gp) else {
                    continue;
                };
                let lhs = mul_mod(p, l.rep() % (pn / p), pn);
                let rhs = try_or!(o, log1p_series(y, p, n));
                t.check(lhs == rhs, || json!({ "q": q, "component": format!("{p}^{n}"), "x": x, "lhs": lhs, "series": rhs }), || {
                    if pn > 1_000_000 {
                        return true;
                    }
                    match padic::DlogTable::build(gp.e.rep(), pn).ok().and_then(|tb| tb.log(((1 + y) as u64) % pn)) {
                        Some(l) => mul_mod(p, l % (pn / p), pn) != rhs,
                        None => true,
                    }
                });
            }
        }
    }
    o.tally(t)
}

pub(crate) fn c12(cp: &ClaimParams) -> Outcome {
    let p = cp.p;
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p), p, 100_000));
    let ctx = try_or!(o, PrecisionContext::new(p, 1));
    let gp = try_or!(o, find_generator(&ctx));
    let e = gp.e.rep();
    let o = o.param("e", e).with_note(
        "convention: L = least lm(a) mod p-1; a^(1/2) = e^(L/2) for even L, e^((L+p-1)/2) for odd L (non-residue)",
    );
    let mut t = Tally::new("a^(1/2) (1/a)^(1/2) = -1 mod p over units");
    let mut nonres = 0;
    for a in 1..p {
        let s1 = try_or!(o, padic::sqrt_e(a as i128, &gp));
        let inv = inv_mod(a, p).unwrap();
        let s2 = try_or!(o, padic::sqrt_e(inv as i128, &gp));
        if !s1.is_residue {
            nonres += 1;
        }
        let prod = mul_mod(s1.value.rep(), s2.value.rep(), p);
        t.check(prod == p - 1, || json!({ "a": a, "sqrt_a": s1.value.rep(), "sqrt_inv_a": s2.value.rep(), "product": prod }), || {
            let table: Vec<u64> = (0..p - 1).map(|j| pow_mod(e, j, p)).collect();
            let lg = |v: u64| table.iter().position(|&x| x == v).unwrap() as u64;
            let half = |l: u64| if l % 2 == 0 { l / 2 } else { (l + p - 1) / 2 };
            mul_mod(pow_mod(e, half(lg(a)), p), pow_mod(e, half(lg(inv)), p), p) != p - 1
        });
    }
    let mut o = o.tally(t);
    o.note(format!("{nonres} non-residues flagged"));
    o
}

pub(crate) fn c13(cp: &ClaimParams) -> Outcome {
    let (p, m) = (cp.p, cp.m);
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p).param("m", m), p, u64::MAX));
    let ctx = try_or!(o, PrecisionContext::new(p, m));
    let q = ctx.modulus();
    if checked_pow(p, 2 * m).is_none() {
        return o.skip("closed form needs p^(2m) within 64-bit moduli");
    }
    let (xs, exhaustive) = unit_sample(q, p, cp.budget, cp.seed);
    let mut forms = Tally::new("closed form = series");
    let q2b = BigUint::from(q) * BigUint::from(q);
    for &x in &xs {
        let a = try_or!(o, padic::plm(x as i128, &ctx)).rep();
        let b = try_or!(o, padic::plm_series(x as i128, &ctx)).rep();
        forms.check(a == b, || json!({ "x": x, "closed": a, "series": b }), || {
            // exact exponent p^m(1 - p^m) via x^(p^m) / x^(p^(2m)) in big integers
            let xb = BigUint::from(x);
            let num = xb.modpow(&BigUint::from(q), &q2b);
            let den = xb.modpow(&(BigUint::from(q) * BigUint::from(q)), &q2b);
            let inv = den.modinv(&q2b).unwrap();
            let v = (num * inv) % &q2b;
            let v = (v + &q2b - BigUint::from(1u32)) % &q2b;
            let closed = (v / BigUint::from(q)) % BigUint::from(q);
            closed != BigUint::from(b)
        });
    }
    let mut o = o.param("exhaustive", exhaustive).tally(forms);
    // derivative law by the difference quotient at precision 2m
    match (PrecisionContext::new(p, 2 * m), checked_pow(p, 4 * m)) {
        (Ok(ctx2), Some(_)) => {
            let q2 = ctx2.modulus();
            let mut deriv = Tally::new("(plm(x+p^m) - plm(x))/p^m = 1/x mod p^m");
            for &x in &xs {
                let a = try_or!(o, padic::plm(x as i128, &ctx2)).rep();
                let b = try_or!(o, padic::plm((x + q) as i128, &ctx2)).rep();
                let d = sub_mod(b, a, q2);
                let got = (d % q == 0).then(|| (d / q) % q);
                let want = inv_mod(x % q, q).unwrap();
                deriv.check(got == Some(want), || json!({ "x": x, "quotient": got, "1/x": want }), || {
                    let s1 = padic::plm_series(x as i128, &ctx2).map(|r| r.rep());
                    let s2 = padic::plm_series((x + q) as i128, &ctx2).map(|r| r.rep());
                    match (s1, s2) {
                        (Ok(a), Ok(b)) => {
                            let d = sub_mod(b, a, q2);
                            d % q != 0 || (d / q) % q != want
                        }
                        _ => true,
                    }
                });
            }
            o = o.tally(deriv);
        }
        _ => o.note("derivative law skipped: p^(4m) beyond 64-bit moduli"),
    }
    // clean derivative of the mod-p table, with the value at 0 set to 0
    if p <= MAX_SCAN_PRIME {
        let table: Vec<u64> = (0..p)
            .map(|x| if x == 0 { 0 } else { padic::plm(x as i128, &ctx).map(|r| r.rep() % p).unwrap_or(0) })
            .collect();
        if let Ok(f) = crate::calculus::CalcFn::new(try_or!(o, interpolate_fn(&table, p))) {
            let d = crate::calculus::clean_derivative(&f, 0);
            let agree = (1..p).filter(|&x| d.eval1(x) == inv_mod(x, p).unwrap()).count();
            o.note(format!("clean derivative of the mod-p plm table (plm(0) := 0) equals 1/x at {agree} of {} units", p - 1));
        }
    }
    o
}

pub(crate) fn c14(cp: &ClaimParams) -> Outcome {
    let (p, m) = (cp.p, cp.m);
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p).param("m", m), p, 1000));
    if p % 4 != 3 {
        return o.skip(format!("p = {p} is not 3 mod 4"));
    }
    let circle = try_or!(o, gauss::unit_circle(p));
    let mut t = Tally::new("order p+1 and z^p = z*");
    t.check(circle.order() as u64 == p + 1, || json!({ "order": circle.order() }), || {
        (0..p * p).filter(|&k| (mul_mod(k / p, k / p, p) + mul_mod(k % p, k % p, p)) % p == 1).count() as u64 != p + 1
    });
    for z in &circle.elements {
        let ok = z.pow(p) == z.conj();
        t.check(ok, || json!({ "z": [z.re, z.im] }), || {
            let mut w = gauss::GaussianResidue::one(p);
            for _ in 0..p {
                w = w * *z;
            }
            w != z.conj()
        });
    }
    let mut cover = Tally::new("rational points cover the circle");
    let mut hit = BTreeSet::new();
    for a in 0..p {
        for b in 0..p {
            if let Ok(z) = gauss::rational_point(p, a as i128, b as i128) {
                hit.insert((z.re, z.im));
            }
        }
    }
    for z in &circle.elements {
        cover.check(hit.contains(&(z.re, z.im)), || json!({ "missed": [z.re, z.im] }), || {
            !(0..p).any(|a| (0..p).any(|b| gauss::rational_point(p, a as i128, b as i128).is_ok_and(|w| w == *z)))
        });
    }
    let mut o = o.tally(t).tally(cover);
    let mut norm = Tally::new("E^i (E^i)* = 1 mod p^m");
    match PrecisionContext::new(p, m) {
        Ok(ctx) => {
            let ei = try_or!(o, gauss::exp_i(&ctx));
            norm.check(ei.norm() == 1 % ctx.modulus(), || json!({ "E^i": [ei.re, ei.im] }), || {
                let q = ctx.modulus();
                add_mod(mul_mod(ei.re, ei.re, q), mul_mod(ei.im, ei.im, q), q) != 1 % q
            });
            o = o.tally(norm);
        }
        Err(e) => o.note(format!("E^i norm skipped: {e}")),
    }
    o
}

fn random_perm(n: usize, g: &mut Lcg) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = g.below(i as u64 + 1) as usize;
        v.swap(i, j);
    }
    v
}

pub(crate) fn c15(cp: &ClaimParams) -> Outcome {
    let p = cp.p;
    let o = guard!(odd_or_two(Outcome::new().param("p", p), p));
    let trials = cp.budget.min(50);
    let o = o.param("dims", json!([1, 2, 3])).param("trials_per_dim", trials).param("seed", cp.seed);
    let mut g = Lcg::new(cp.seed);
    let mut inv = Tally::new("bijective groups invert two-sided");
    let mut dep = Tally::new("non-bijective groups detected");
    for k in 1..=3usize {
        let n = (p as usize).pow(k as u32);
        if n > 400 {
            continue;
        }
        let pts: Vec<Vec<u64>> = crate::poly::grid_points(p, k).collect();
        for _ in 0..trials {
            let perm = random_perm(n, &mut g);
            let mut sg = try_or!(o, SquareGroup::from_permutation(&perm, p, k));
            let indep = independence_check(&mut sg);
            let h = square_invert(&sg);
            let ok = indep
                && h.as_ref().is_ok_and(|h| pts.iter().all(|x| h.apply(&sg.apply(x)) == *x && sg.apply(&h.apply(x)) == *x));
            inv.check(ok, || json!({ "k": k, "perm": perm }), || {
                // tables composed by index
                let Ok(h) = h.as_ref() else { return true };
                let (tg, th) = (sg.tables(), h.tables());
                (0..n).any(|i| {
                    let y: Vec<u64> = tg.iter().map(|t| t[i]).collect();
                    let j = crate::poly::grid_index(&y, p);
                    th.iter().map(|t| t[j]).collect::<Vec<_>>() != pts[i]
                })
            });
            // collapse two points onto one image
            let mut table = perm.clone();
            let a = g.below(n as u64) as usize;
            let b = (a + 1 + g.below(n as u64 - 1) as usize) % n;
            table[a] = table[b];
            let funcs = try_or!(o, tables_to_group(&table, p, k));
            let mut bad = funcs;
            let indep = independence_check(&mut bad);
            dep.check(!indep && square_invert(&bad).is_err(), || json!({ "k": k, "table": table }), || {
                table.iter().collect::<BTreeSet<_>>().len() < n
            });
        }
    }
    o.tally(inv).tally(dep)
}

/// Square group whose point `i` maps to grid point `images[i]`.
fn tables_to_group(images: &[usize], p: u64, k: usize) -> crate::Result<SquareGroup> {
    let pts: Vec<Vec<u64>> = crate::poly::grid_points(p, k).collect();
    let funcs = (0..k)
        .map(|j| {
            let t: Vec<u64> = images.iter().map(|&i| pts[i][j]).collect();
            interp::interpolate_multi(&t, p, k)
        })
        .collect::<crate::Result<Vec<_>>>()?;
    SquareGroup::new(funcs, p)
}

fn random_poly_table(p: u64, n: u32, g: &mut Lcg) -> (Vec<u64>, Vec<u64>) {
    let q = p.pow(n);
    let deg = 2 * n as usize + 2;
    let coeffs: Vec<u64> = (0..=deg).map(|_| g.below(q)).collect();
    let table = (0..q).map(|x| horner(&coeffs, x, q)).collect();
    (coeffs, table)
}

pub(crate) fn c_iii(cp: &ClaimParams) -> Outcome {
    let p = cp.p;
    let o = guard!(odd_or_two(Outcome::new().param("p", p), p));
    let n = (1..=cp.m.min(3)).rev().find(|&k| p.pow(k) <= 10_000).unwrap_or(1);
    let q = p.pow(n);
    let count = cp.budget.min(200);
    let o = o.param("n", n).param("samples", count).param("seed", cp.seed);
    let mut g = Lcg::new(cp.seed);
    let mut t = Tally::new("polynomial functions take the branch form");
    for _ in 0..count {
        let (coeffs, table) = random_poly_table(p, n, &mut g);
        let res = local_expand(&table, p, n);
        let ok = res.as_ref().is_ok_and(|le| (0..q).all(|x| le.eval(x) == table[x as usize]));
        t.check(ok, || json!({ "coeffs": coeffs }), || {
            // Taylor form on each class has degree < n in (x - i)
            res.is_err() || (0..q).any(|x| res.as_ref().unwrap().eval(x) != horner(&coeffs, x, q))
        });
    }
    let mut arbitrary = 0;
    for _ in 0..count {
        let table: Vec<u64> = (0..q).map(|_| g.below(q)).collect();
        if local_expand(&table, p, n).is_ok() {
            arbitrary += 1;
        }
    }
    let mut o = o.tally(t);
    o.note(format!("arbitrary maps mod {q}: {arbitrary} of {count} admit the branch form (not claimed)"));
    o
}

pub(crate) fn c_dig(cp: &ClaimParams) -> Outcome {
    let p = cp.p;
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p), p, MAX_SCAN_PRIME));
    let n = (1..=cp.m.min(3)).rev().find(|&k| p.pow(k) <= 2_000).unwrap_or(1);
    let q = p.pow(n);
    let count = cp.budget.min(200);
    let o = o.param("n", n).param("random_maps", count).param("seed", cp.seed);
    let mut g = Lcg::new(cp.seed);
    let mut maps: Vec<Vec<u64>> = (0..count).map(|_| (0..q).map(|_| g.below(q)).collect()).collect();
    if q * q <= 1_000 {
        for a in 0..q {
            for b in 0..q {
                maps.push((0..q).map(|x| add_mod(mul_mod(a, x, q), b, q)).collect());
            }
        }
    }
    let o = o.param("affine_maps", if q * q <= 1_000 { q * q } else { 0 });
    let tallies: Vec<Tally> = maps
        .par_iter()
        .map(|f| {
            let mut t = Tally::new("digitwise resolution reproduces every digit");
            match digital::resolve_digitwise(f, p, n) {
                Ok(res) => {
                    let ok = (0..q).all(|x| res.eval(x as i128) == f[x as usize]);
                    t.check(ok, || json!({ "map": f }), || {
                        (0..q as i128).any(|x| {
                            let want = digital::digits(f[x as usize] as i128, p, n).unwrap().digits;
                            let pt = res.encode(x);
                            let got: Vec<i128> = res.polys.iter().map(|h| crate::ring::centered_rep(h.eval(&pt) as i128, p)).collect();
                            got != want
                        })
                    });
                }
                Err(_) => t.check(false, || json!({ "map": f, "error": "resolution failed" }), || true),
            }
            t
        })
        .collect();
    let mut t = Tally::new("digitwise resolution reproduces every digit");
    for x in tallies {
        t.merge(x);
    }
    o.tally(t)
}

pub(crate) fn c_bb2(cp: &ClaimParams) -> Outcome {
    let m = cp.m;
    let o = Outcome::new().param("p", 2u64).param("m", m);
    if m > 40 {
        return o.skip("m > 40 beyond the even-series guard");
    }
    let ctx = try_or!(o, PrecisionContext::even(m));
    let q = ctx.modulus();
    let count = (2 * q).min(4096);
    let s = |x: u64| padic::even_exp_series(x as i128, m).map(|r| r.rep());
    let s2 = try_or!(o, s(2));
    let mut hom = Tally::new("S(x) = S(2)^(x/2) for even x");
    for x in (0..count).step_by(2) {
        let v = try_or!(o, s(x));
        hom.check(v == pow_mod(s2, x / 2, q), || json!({ "x": x, "series": v }), || {
            let mut acc = 1 % q;
            for _ in 0..x / 2 {
                acc = mul_mod(acc, s2, q);
            }
            acc != v
        });
    }
    let mut lg = Tally::new("S(lm(u)) = u for u = 1 mod 4");
    for u in (1..q.max(2)).step_by(4) {
        let l = try_or!(o, padic::even_log_series(u as i128, m)).rep();
        let back = try_or!(o, s(l));
        lg.check(back == u % q, || json!({ "u": u, "log": l, "S(log)": back }), || pow_mod(s2, l / 2, q) != u % q);
    }
    let mut guard = Tally::new("odd arguments rejected");
    guard.check(pow_e(1, &ctx).is_err(), || json!({ "x": 1 }), || true);
    o.tally(hom).tally(lg).tally(guard)
}

pub(crate) fn c_ccc2(cp: &ClaimParams) -> Outcome {
    let m = cp.m;
    let o = Outcome::new().param("p", 2u64).param("m", m);
    if m > 20 {
        return o.skip("m > 20 beyond the even Taylor guard");
    }
    let ctx = try_or!(o, PrecisionContext::even(m));
    let q = ctx.modulus();
    let o = o.param("degree", TAYLOR_DEGREE as u64).param("coeff_max", 7u64);
    let mut g = Lcg::new(cp.seed);
    let polys: Vec<Vec<u64>> = (0..cp.budget.min(300)).map(|_| (0..=TAYLOR_DEGREE).map(|_| g.below(8)).collect()).collect();
    let mut t = Tally::new("f(x+2z) Taylor identity for even z");
    let mut rejects = Tally::new("odd steps rejected");
    for c in &polys {
        let ci: Vec<i128> = c.iter().map(|&v| v as i128).collect();
        for x in 0..q.min(64) {
            for z in (0..q.min(64)).step_by(2) {
                let rhs = try_or!(o, padic::modulated_taylor(&ci, x as i128, z as i128, &ctx)).rep();
                let lhs = horner(c, (x + 2 * z) % q, q);
                t.check(lhs == rhs, || json!({ "coeffs": c, "x": x, "z": z }), || exact_taylor_violated(c, x, z, 2, q));
            }
        }
        rejects.check(padic::modulated_taylor(&ci, 0, 1, &ctx).is_err(), || json!({ "coeffs": c }), || true);
    }
    o.param("polynomials", polys.len() as u64).tally(t).tally(rejects)
}
