//! Checkers for the integration kernel and summation calculus.

use std::collections::BTreeSet;

use serde_json::json;

use super::{odd_prime_guard, ClaimParams, Outcome, Tally, MAX_SCAN_PRIME};
use crate::arith::{add_mod, inv_mod, mul_mod, neg_mod, pow_mod, sub_mod};
use crate::calculus::{
    antiderivative, area_integral, clean_derivative, kernel_i, modular_derivative_formal, multi_summation,
    summation_calculus, CalcFn, IntegralKernel,
};
use crate::lcg::Lcg;
use crate::poly::grid_points;

/// `I^t(x)` straight from `-Σ_{i=0}^{p-2} x^(p-1-i) t^(i+1)/(i+1)`.
fn kernel_direct(t: u64, x: u64, p: u64) -> u64 {
    (0..=p - 2).fold(0, |acc, i| {
        let c = inv_mod(i + 1, p).unwrap();
        let term = mul_mod(mul_mod(pow_mod(x, p - 1 - i, p), pow_mod(t, i + 1, p), p), c, p);
        sub_mod(acc, term, p)
    })
}

fn kernel_for(o: &Outcome, p: u64) -> Result<IntegralKernel, Outcome> {
    kernel_i(p).map_err(|e| o.clone().error(e))
}

pub(crate) fn c16(cp: &ClaimParams) -> Outcome {
    let p = cp.p;
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p), p, MAX_SCAN_PRIME));
    let k = guard!(kernel_for(&o, p));
    let mut t = Tally::new("t -> I^t(C): p-1 distinct values, two zeros");
    let mut zero_sets = Vec::new();
    for c in 1..p {
        let vals: Vec<u64> = (0..p).map(|s| k.at(s, c)).collect();
        let distinct = vals.iter().collect::<BTreeSet<_>>().len() as u64;
        let zeros: Vec<u64> = (0..p).filter(|&s| vals[s as usize] == 0).collect();
        zero_sets.push(format!("C={c}: values {vals:?}, zeros at t in {zeros:?}"));
        t.check(
            distinct == p - 1 && zeros.len() == 2,
            || json!({ "C": c, "values": vals, "zeros": zeros }),
            || {
                let direct: Vec<u64> = (0..p).map(|s| kernel_direct(s, c, p)).collect();
                direct.iter().collect::<BTreeSet<_>>().len() as u64 != p - 1
                    || direct.iter().filter(|&&v| v == 0).count() != 2
            },
        );
    }
    let mut o = o.tally(t).with_note("zero count includes t = 0");
    if p <= 5 {
        for z in zero_sets {
            o.note(z);
        }
    }
    o
}

pub(crate) fn c17(cp: &ClaimParams) -> Outcome {
    let p = cp.p;
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p), p, MAX_SCAN_PRIME));
    let k = guard!(kernel_for(&o, p));
    let mut t = Tally::new("I^t(x) != -t for t != 0");
    for s in 1..p {
        for x in 0..p {
            let v = k.at(s, x);
            t.check(v != neg_mod(s, p), || json!({ "t": s, "x": x, "I^t(x)": v }), || kernel_direct(s, x, p) == neg_mod(s, p));
        }
    }
    o.tally(t)
}

pub(crate) fn c17_antisymmetry(cp: &ClaimParams) -> Outcome {
    let primes: Vec<u64> = [3u64, 5, 7, 11, 13].into_iter().filter(|&q| q <= cp.p.max(13)).collect();
    let o = Outcome::new().param("primes", json!(primes));
    let mut t = Tally::new("I^t(x) = -I^x(t)");
    for &p in &primes {
        let k = guard!(kernel_for(&o, p));
        for s in 0..p {
            for x in 0..p {
                let (a, b) = (k.at(s, x), k.at(x, s));
                t.check(a == neg_mod(b, p), || json!({ "p": p, "t": s, "x": x, "I^t(x)": a, "I^x(t)": b }), || {
                    kernel_direct(s, x, p) != neg_mod(kernel_direct(x, s, p), p)
                });
            }
        }
    }
    o.tally(t)
}

/// `-(x^p - x)/p mod p` for `x >= 0`, exact.
fn fermat_original(x: u64, p: u64) -> u64 {
    let xb = num_bigint::BigUint::from(x);
    let num = xb.pow(p as u32) - &xb;
    let q = num / num_bigint::BigUint::from(p);
    let r = (q % num_bigint::BigUint::from(p)).to_u64_digits().first().copied().unwrap_or(0);
    neg_mod(r, p)
}

pub(crate) fn c18(cp: &ClaimParams) -> Outcome {
    let p = cp.p;
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p), p, MAX_SCAN_PRIME));
    let k = guard!(kernel_for(&o, p));
    let mut table = vec![0u64; p as usize];
    table[0] = 1;
    let delta = try_or!(o, CalcFn::from_table(&table, p, 1));
    let sc = try_or!(o, summation_calculus(&delta, &k));
    let periods = 3u64;
    let mut o = o.param("track", format!("0..{}", periods * p - 1));
    let mut t = Tally::new("delta^Delta(x) = -(x^p - x)/p on the integer track");
    for x in 0..periods * p {
        let got = sc.delta_at(x as i128);
        let want = fermat_original(x, p);
        t.check(got == want, || json!({ "x": x, "recurrence": got, "closed_form": want }), || {
            // rebuild f^Delta from -I^x(1) increments
            let mut acc = 0u64;
            for y in 1..=x {
                acc = add_mod(acc, neg_mod(kernel_direct(y % p, 1, p), p), p);
            }
            acc != want
        });
    }
    o.note(format!(
        "period sum of delta^I is {}; f^Delta {} after one period on track {}",
        sc.period_sum,
        if sc.wraps_consistently { "closes" } else { "does not close" },
        sc.track
    ));
    // D f^I/Dx = f(x) - f(x-1) over all clean f at p = 3
    if p == 3 {
        let mut holds = 0;
        let mut total = 0;
        for f in crate::calculus::all_clean_univariate(p) {
            let s = try_or!(o, summation_calculus(&f, &k));
            let tb = f.table();
            total += 1;
            if (0..p).all(|x| {
                let prev = ((x + p - 1) % p) as usize;
                sub_mod(s.f_i[x as usize], s.f_i[prev], p) == sub_mod(tb[x as usize], tb[prev], p)
            }) {
                holds += 1;
            }
        }
        o.note(format!("difference law f^I(x) - f^I(x-1) = f(x) - f(x-1) holds for {holds} of {total} clean f"));
    }
    o.tally(t)
}

pub(crate) fn c19(cp: &ClaimParams) -> Outcome {
    let p = cp.p;
    let o = guard!(odd_prime_guard(Outcome::new().param("p", p), p, MAX_SCAN_PRIME));
    let k = guard!(kernel_for(&o, p));
    let deg = (p - 2) as usize;
    let total = (p as u128).pow(deg as u32 + 1);
    let exhaustive = p <= 7;
    let count = if exhaustive { total as u64 } else { cp.budget.min(3000) };
    let mut g = Lcg::new(cp.seed);
    let mut t1 = Tally::new("D(int_0^t f) = f");
    let mut t2 = Tally::new("int_0^t (D f) = f - f(0)");
    let mut agree = 0u64;
    for idx in 0..count {
        let coeffs: Vec<i128> = if exhaustive {
            let mut r = idx;
            (0..=deg)
                .map(|_| {
                    let c = r % p;
                    r /= p;
                    c as i128
                })
                .collect()
        } else {
            (0..=deg).map(|_| g.below(p) as i128).collect()
        };
        let f = try_or!(o, CalcFn::univariate(&coeffs, p));
        let tf = f.table();
        let big_f = try_or!(o, antiderivative(&f, &k));
        let d = try_or!(o, modular_derivative_formal(&big_f));
        t1.check(d.table() == tf, || json!({ "f": coeffs, "D(F)": d.table() }), || {
            let ft: Vec<u64> = (0..p).map(|s| (0..p).fold(0, |a, x| add_mod(a, mul_mod(tf[x as usize], kernel_direct(s, x, p), p), p))).collect();
            let dd: Vec<u64> = (0..p)
                .map(|x| (1..p).fold(0, |a, s| sub_mod(a, mul_mod(ft[((x + s) % p) as usize], inv_mod(s, p).unwrap(), p), p)))
                .collect();
            dd != tf
        });
        let df = try_or!(o, modular_derivative_formal(&f));
        let want: Vec<u64> = tf.iter().map(|&v| sub_mod(v, tf[0], p)).collect();
        match antiderivative(&df, &k) {
            Ok(back) => t2.check(back.table() == want, || json!({ "f": coeffs, "int(Df)": back.table() }), || true),
            Err(_) => t2.check(false, || json!({ "f": coeffs, "reason": "D f is not reduced" }), || !df.is_reduced()),
        }
        if df.table() == clean_derivative(&f, 0).table() {
            agree += 1;
        }
    }
    o.param("functions", count)
        .param("exhaustive", exhaustive)
        .with_note("formal derivation sums over t != 0 only")
        .with_note(format!("formal derivation equals clean_derivative on {agree} of {count} functions"))
        .tally(t1)
        .tally(t2)
}

pub(crate) fn c20(cp: &ClaimParams) -> Outcome {
    let p = 3u64;
    let o = Outcome::new().param("p", p).param("nvars", 2u64);
    if cp.p != 3 {
        return o.skip("multi-argument scan is fixed at p = 3");
    }
    let k = guard!(kernel_for(&o, p));
    let pts: Vec<Vec<u64>> = grid_points(p, 2).collect();
    let idx = |a: u64, b: u64| (a * p + b) as usize;
    let boxes: Vec<(u64, u64, u64, u64)> = (0..p)
        .flat_map(|a1| (a1 + 1..p).flat_map(move |b1| (0..p).flat_map(move |a2| (a2 + 1..p).map(move |b2| (a1, b1, a2, b2)))))
        .collect();
    let mut t = Tally::new("area integral = mixed difference of f^Delta");
    let mut sigma_ok = 0u64;
    let mut cases = 0u64;
    for n in 0..p.pow(9) {
        let mut r = n;
        let table: Vec<u64> = (0..9)
            .map(|_| {
                let v = r % p;
                r /= p;
                v
            })
            .collect();
        let f = try_or!(o, CalcFn::from_table(&table, p, 2));
        if !f.is_reduced() {
            continue;
        }
        let ms = try_or!(o, multi_summation(&f, &k));
        for &(a1, b1, a2, b2) in &boxes {
            let area: Vec<Vec<u64>> =
                pts.iter().filter(|x| a1 < x[0] && x[0] <= b1 && a2 < x[1] && x[1] <= b2).cloned().collect();
            let lhs = try_or!(o, area_integral(&f, &area, &k));
            let mixed = |tab: &[u64]| {
                let s = add_mod(tab[idx(b1, b2)], tab[idx(a1, a2)], p);
                sub_mod(sub_mod(s, tab[idx(a1, b2)], p), tab[idx(b1, a2)], p)
            };
            let rhs = mixed(&ms.f_delta);
            cases += 1;
            if mixed(&ms.f_sigma) == lhs {
                sigma_ok += 1;
            }
            t.check(lhs == rhs, || json!({ "table": table, "box": [[a1, b1], [a2, b2]], "area": lhs, "mixed_delta": rhs }), || {
                let direct = area.iter().fold(0, |acc, x| add_mod(acc, ms.f_i[idx(x[0], x[1])], p));
                direct != rhs
            });
        }
    }
    o.with_note("f^Delta uses the diagonal recurrence with zero boundary on the axes")
        .with_note(format!("product-form f^Sigma mixed difference matches on {sigma_ok} of {cases} cases"))
        .tally(t)
}
