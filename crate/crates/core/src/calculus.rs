//! Calculus of clean functions modulo `p`: the clean derivation (Hasse
//! ladder and kernel form), the integration kernel `I^t(x)`, the `Dt`
//! pairing, interval and area integrals, and summation calculus.

use serde::{Deserialize, Serialize};

use crate::arith::{self, add_mod, inv_mod, mul_mod, neg_mod, sub_mod};
use crate::error::{Error, Result};
use crate::interp::{interpolate_fn, interpolate_multi, tabulate};
use crate::poly::{grid_index, grid_points, Poly};

/// A clean polynomial modulo a prime `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CalcFn {
    poly: Poly,
}

impl CalcFn {
    /// Wraps a clean polynomial; non-clean input is rejected.
    pub fn new(poly: Poly) -> Result<Self> {
        let p = poly.modulus();
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !poly.is_clean(p) {
            return Err(Error::Precondition("polynomial is not clean".into()));
        }
        Ok(CalcFn { poly })
    }

    /// Wraps any polynomial mod `p` after replacing it with its clean form
    /// (the same function).
    pub fn cleaned(poly: Poly) -> Result<Self> {
        let p = poly.modulus();
        Self::new(poly.clean(p))
    }

    pub fn univariate(coeffs: &[i128], p: u64) -> Result<Self> {
        Self::cleaned(Poly::univariate(coeffs, p))
    }

    pub fn from_table(table: &[u64], p: u64, k: usize) -> Result<Self> {
        Self::new(interpolate_multi(table, p, k)?)
    }

    pub fn zero(nvars: usize, p: u64) -> Self {
        CalcFn { poly: Poly::zero(nvars, p) }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn p(&self) -> u64 {
        self.poly.modulus()
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn is_reduced(&self) -> bool {
        self.poly.is_reduced(self.p())
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        self.poly.eval(x)
    }

    pub fn eval1(&self, x: u64) -> u64 {
        self.poly.eval(&[x % self.p()])
    }

    pub fn table(&self) -> Vec<u64> {
        tabulate(&self.poly, self.p())
    }

    fn require_univariate(&self) -> Result<()> {
        if self.nvars() != 1 {
            return Err(Error::InvalidArgument(format!("expected one variable, got {}", self.nvars())));
        }
        Ok(())
    }
}

/// Ladder `Σ_n H^(n(p-1)+1)` of Hasse derivatives in `var`, truncated at
/// `n = ⌈deg/(p-1)⌉ + 1`, then cleaned. Accepts non-clean input.
pub fn clean_derivative_poly(f: &Poly, var: usize, p: u64) -> Poly {
    let deg = f.degree_in(var).unwrap_or(0) as u64;
    let n_max = deg.div_ceil(p - 1) + 1;
    let mut out = Poly::zero(f.nvars(), p);
    for n in 0..=n_max {
        let order = n * (p - 1) + 1;
        if order > deg {
            break;
        }
        out = out.add(&f.hasse(var, order as u32));
    }
    out.clean(p)
}

pub fn clean_derivative(f: &CalcFn, var: usize) -> CalcFn {
    CalcFn { poly: clean_derivative_poly(&f.poly, var, f.p()) }
}

/// `f^D(x) = -Σ_t f(t) (t - x)^(p-2)` in the variable `var`.
pub fn clean_derivative_kernel(f: &CalcFn, var: usize) -> CalcFn {
    let p = f.p();
    let k = f.nvars();
    let x = Poly::var(var, k, p);
    let mut out = Poly::zero(k, p);
    for t in 0..p {
        let mut subs: Vec<Poly> = (0..k).map(|i| Poly::var(i, k, p)).collect();
        subs[var] = Poly::constant(t as i128, k, p);
        let ft = f.poly.compose(&subs);
        let kernel = Poly::constant(t as i128, k, p).sub(&x).pow((p - 2) as u32);
        out = out.sub(&ft.mul(&kernel));
    }
    CalcFn { poly: out.clean(p) }
}

/// Table of `I^t(x) = -Σ_{i=0}^{p-2} x^(p-1-i) t^(i+1)/(i+1)` and of the
/// step kernel `K_t(y) = I^t(y) - I^(t-1)(y) - I^t(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralKernel {
    pub p: u64,
    table: Vec<u64>,
    step: Vec<u64>,
}

impl IntegralKernel {
    pub fn at(&self, t: u64, x: u64) -> u64 {
        let p = self.p;
        self.table[((t % p) * p + x % p) as usize]
    }

    /// `I^t_{t0}(x) = I^t(x) - I^{t0}(x)`.
    pub fn two_point(&self, t: u64, t0: u64, x: u64) -> u64 {
        sub_mod(self.at(t, x), self.at(t0, x), self.p)
    }

    /// `K_t(y)`, so that `f·Dt = Σ_y f(y) K_t(y)`.
    pub fn step(&self, t: u64, y: u64) -> u64 {
        let p = self.p;
        self.step[((t % p) * p + y % p) as usize]
    }

    /// `I^t(x)` as a polynomial in `(t, x)`.
    pub fn poly(&self) -> Poly {
        kernel_poly(self.p)
    }
}

fn kernel_poly(p: u64) -> Poly {
    let mut out = Poly::zero(2, p);
    for i in 0..=(p - 2) {
        let c = inv_mod((i + 1) % p, p).expect("i + 1 < p");
        out.add_term(vec![(i + 1) as u32, (p - 1 - i) as u32], neg_mod(c, p));
    }
    out
}

pub fn kernel_i(p: u64) -> Result<IntegralKernel> {
    if !arith::is_prime(p) || p == 2 {
        return Err(Error::Precondition(format!("kernel needs an odd prime, got {p}")));
    }
    let poly = kernel_poly(p);
    let pu = p as usize;
    let mut table = vec![0u64; pu * pu];
    for t in 0..p {
        for x in 0..p {
            table[(t * p + x) as usize] = poly.eval(&[t, x]);
        }
    }
    let mut step = vec![0u64; pu * pu];
    for t in 0..p {
        let prev = (t + p - 1) % p;
        for y in 0..p {
            let a = sub_mod(table[(t * p + y) as usize], table[(prev * p + y) as usize], p);
            step[(t * p + y) as usize] = sub_mod(a, table[(t * p + 1) as usize], p);
        }
    }
    Ok(IntegralKernel { p, table, step })
}

fn check_kernel(f: &CalcFn, k: &IntegralKernel) -> Result<()> {
    if f.p() != k.p {
        return Err(Error::InvalidArgument("kernel prime differs from function prime".into()));
    }
    Ok(())
}

/// `∫_0^t f(x) dx = Σ_x f(x) I^t(x)` for reduced univariate `f`.
pub fn definite_integral(f: &CalcFn, t: u64, k: &IntegralKernel) -> Result<u64> {
    f.require_univariate()?;
    check_kernel(f, k)?;
    if !f.is_reduced() {
        return Err(Error::Precondition("definite integral needs a reduced function".into()));
    }
    let p = k.p;
    Ok((0..p).fold(0, |acc, x| add_mod(acc, mul_mod(f.eval1(x), k.at(t, x), p), p)))
}

/// `f(t)·Dt = Σ_y f(y) K_t(y)` for univariate `f`.
pub fn dt_pairing(f: &CalcFn, t: u64, k: &IntegralKernel) -> Result<u64> {
    f.require_univariate()?;
    check_kernel(f, k)?;
    Ok(pairing_table(&f.table(), t, k))
}

/// `Σ_y table[y] K_t(y)` for a univariate value table.
pub fn pairing_table(table: &[u64], t: u64, k: &IntegralKernel) -> u64 {
    let p = k.p;
    table
        .iter()
        .enumerate()
        .fold(0, |acc, (y, &v)| add_mod(acc, mul_mod(v, k.step(t, y as u64), p), p))
}

/// `f·Π_i Dt_i = Σ_y f(y) Π_i K_{t_i}(y_i)`.
pub fn tensor_pairing(f: &CalcFn, t: &[u64], k: &IntegralKernel) -> Result<u64> {
    check_kernel(f, k)?;
    if t.len() != f.nvars() {
        return Err(Error::InvalidArgument("point arity differs from function arity".into()));
    }
    Ok(tensor_pairing_table(&f.table(), t, k))
}

/// Tensor pairing on a lexicographic value table.
pub fn tensor_pairing_table(table: &[u64], t: &[u64], k: &IntegralKernel) -> u64 {
    let p = k.p;
    let mut acc = 0u64;
    for (idx, y) in grid_points(p, t.len()).enumerate() {
        if table[idx] == 0 {
            continue;
        }
        let w = y.iter().zip(t).fold(1u64, |w, (&yi, &ti)| mul_mod(w, k.step(ti, yi), p));
        acc = add_mod(acc, mul_mod(table[idx], w, p), p);
    }
    acc
}

/// `∫_A f Π Dx_i = Σ_{x ∈ A} f·Π Dx_i`.
pub fn area_integral(f: &CalcFn, area: &[Vec<u64>], k: &IntegralKernel) -> Result<u64> {
    check_kernel(f, k)?;
    let table = f.table();
    let p = k.p;
    let mut acc = 0u64;
    for x in area {
        if x.len() != f.nvars() {
            return Err(Error::InvalidArgument("area point arity differs from function arity".into()));
        }
        acc = add_mod(acc, tensor_pairing_table(&table, x, k), p);
    }
    Ok(acc)
}

/// `∫_a^b f(x) Dx = Σ_{x ∈ (a, b]} f(x)·Dx` over the integer track.
pub fn interval_integral(f: &CalcFn, a: i128, b: i128, k: &IntegralKernel) -> Result<u64> {
    f.require_univariate()?;
    check_kernel(f, k)?;
    let p = k.p;
    let table = f.table();
    let mut acc = 0u64;
    let mut x = a + 1;
    while x <= b {
        acc = add_mod(acc, pairing_table(&table, arith::reduce_i128(x, p), k), p);
        x += 1;
    }
    Ok(acc)
}

/// `∫_0^x f D(s + C)`: the substitution `u = s + C` applied to the
/// integrand, i.e. `Σ_{s ∈ (0, x]} g(u)·Du` with `g(u) = f(u - C)`.
pub fn translated_integral(f: &CalcFn, x: i128, c: i128, k: &IntegralKernel) -> Result<u64> {
    f.require_univariate()?;
    check_kernel(f, k)?;
    let p = k.p;
    let shifted: Vec<u64> = (0..p)
        .map(|u| f.eval1(arith::reduce_i128(u as i128 - c, p)))
        .collect();
    let mut acc = 0u64;
    let mut s = 1;
    while s <= x {
        acc = add_mod(acc, pairing_table(&shifted, arith::reduce_i128(s + c, p), k), p);
        s += 1;
    }
    Ok(acc)
}

/// `f^I`, `f^Σ` and `f^Δ` on the canonical track `0..p-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummationCalculus {
    pub p: u64,
    /// `f^I(x) = f(x)·Dx`.
    pub f_i: Vec<u64>,
    /// `f^Σ(t) = Σ_{x=1}^t f^I(x)`.
    pub f_sigma: Vec<u64>,
    /// `f^Δ(x) - f^Δ(x-1) = f^I(x)`, `f^Δ(0) = 0`.
    pub f_delta: Vec<u64>,
    /// `Σ_{x=0}^{p-1} f^I(x)`; the increment of `f^Δ` per period.
    pub period_sum: u64,
    /// True when `f^Δ` closes up after one period (`period_sum = 0`).
    pub wraps_consistently: bool,
    pub track: String,
}

impl SummationCalculus {
    /// `f^Δ` on the integer track, continued past one period.
    pub fn delta_at(&self, x: i128) -> u64 {
        let p = self.p as i128;
        let periods = x.div_euclid(p);
        let r = x.rem_euclid(p) as usize;
        add_mod(self.f_delta[r], mul_mod(arith::reduce_i128(periods, self.p), self.period_sum, self.p), self.p)
    }
}

pub fn summation_calculus(f: &CalcFn, k: &IntegralKernel) -> Result<SummationCalculus> {
    f.require_univariate()?;
    check_kernel(f, k)?;
    let p = k.p;
    let table = f.table();
    let f_i: Vec<u64> = (0..p).map(|x| pairing_table(&table, x, k)).collect();
    let mut f_sigma = vec![0u64; p as usize];
    let mut f_delta = vec![0u64; p as usize];
    for x in 1..p as usize {
        f_sigma[x] = add_mod(f_sigma[x - 1], f_i[x], p);
        f_delta[x] = add_mod(f_delta[x - 1], f_i[x], p);
    }
    let period_sum = f_i.iter().fold(0, |a, &v| add_mod(a, v, p));
    Ok(SummationCalculus {
        p,
        f_i,
        f_sigma,
        f_delta,
        period_sum,
        wraps_consistently: period_sum == 0,
        track: format!("0..{}", p - 1),
    })
}

/// Multi-argument `f^I` and `f^Δ` tables over `(Z/p)^k`, lexicographic.
/// `f^Δ` follows the diagonal recurrence
/// `f^Δ(x) - f^Δ(x - (1,..,1)) = f^I(x)` with `f^Δ = 0` on every
/// coordinate hyperplane `x_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiSummation {
    pub p: u64,
    pub k: usize,
    pub f_i: Vec<u64>,
    pub f_sigma: Vec<u64>,
    pub f_delta: Vec<u64>,
}

pub fn multi_summation(f: &CalcFn, kern: &IntegralKernel) -> Result<MultiSummation> {
    check_kernel(f, kern)?;
    let p = kern.p;
    let k = f.nvars();
    let table = f.table();
    let pts: Vec<Vec<u64>> = grid_points(p, k).collect();
    let f_i: Vec<u64> = pts.iter().map(|x| tensor_pairing_table(&table, x, kern)).collect();
    // f^Σ(t) = Π_i Σ_{x_i=0}^{t_i} f^I(x)
    let f_sigma: Vec<u64> = pts
        .iter()
        .map(|t| {
            pts.iter()
                .enumerate()
                .filter(|(_, x)| x.iter().zip(t).all(|(a, b)| a <= b))
                .fold(0, |acc, (i, _)| add_mod(acc, f_i[i], p))
        })
        .collect();
    let mut f_delta = vec![0u64; pts.len()];
    // points sorted so that x - (1,..,1) precedes x
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by_key(|&i| pts[i].iter().copied().min().unwrap_or(0));
    for &i in &order {
        let x = &pts[i];
        if x.contains(&0) {
            continue;
        }
        let prev: Vec<u64> = x.iter().map(|v| v - 1).collect();
        f_delta[i] = add_mod(f_delta[grid_index(&prev, p)], f_i[i], p);
    }
    Ok(MultiSummation { p, k, f_i, f_sigma, f_delta })
}

/// `f^D(x) = -Σ_{t ≢ 0} f(x + t)/t`, evaluated as a function and
/// interpolated back. The `t = 0` term is excluded.
pub fn modular_derivative_formal(f: &CalcFn) -> Result<CalcFn> {
    f.require_univariate()?;
    let p = f.p();
    let table = f.table();
    let out: Vec<u64> = (0..p)
        .map(|x| {
            (1..p).fold(0u64, |acc, t| {
                let inv = inv_mod(t, p).expect("t is a unit");
                sub_mod(acc, mul_mod(table[((x + t) % p) as usize], inv, p), p)
            })
        })
        .collect();
    CalcFn::new(interpolate_fn(&out, p)?)
}

/// `F(t) = ∫_0^t f` as a clean function of `t`.
pub fn antiderivative(f: &CalcFn, k: &IntegralKernel) -> Result<CalcFn> {
    let p = k.p;
    let table = (0..p).map(|t| definite_integral(f, t, k)).collect::<Result<Vec<_>>>()?;
    CalcFn::new(interpolate_fn(&table, p)?)
}

/// Every clean univariate polynomial modulo `p` (`p^p` of them).
pub fn all_clean_univariate(p: u64) -> impl Iterator<Item = CalcFn> {
    let count = (p as usize).pow(p as u32);
    (0..count).map(move |mut idx| {
        let mut coeffs = vec![0i128; p as usize];
        for c in coeffs.iter_mut() {
            *c = (idx % p as usize) as i128;
            idx /= p as usize;
        }
        CalcFn::univariate(&coeffs, p).expect("clean by construction")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(coeffs: &[i128], p: u64) -> CalcFn {
        CalcFn::univariate(coeffs, p).unwrap()
    }

    #[test]
    fn ladder_examples() {
        let x3 = Poly::univariate(&[0, 0, 0, 1], 3);
        assert_eq!(clean_derivative_poly(&x3, 0, 3), Poly::constant(1, 1, 3));
        assert!(clean_derivative(&f(&[2], 3), 0).poly().is_zero());
        assert_eq!(clean_derivative(&f(&[1, 0, -1], 3), 0).poly(), &Poly::var(0, 1, 3));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(clean_derivative_kernel(&f(&[0, 0, 1], 3), 0).poly(), &Poly::univariate(&[0, 2], 3));
        assert!(clean_derivative_kernel(&f(&[1], 3), 0).poly().is_zero());
    }

    #[test]
    fn ladder_matches_kernel() {
        for g in all_clean_univariate(3) {
            assert_eq!(clean_derivative(&g, 0), clean_derivative_kernel(&g, 0));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for p in [5u64, 7] {
            for _ in 0..300 {
                let c: Vec<i128> = (0..p).map(|_| rng.gen_range(0..p) as i128).collect();
                let g = f(&c, p);
                assert_eq!(clean_derivative(&g, 0), clean_derivative_kernel(&g, 0));
            }
        }
    }

    #[test]
    fn ladder_matches_kernel_multivariate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let t: Vec<u64> = (0..9).map(|_| rng.gen_range(0..3)).collect();
            let g = CalcFn::from_table(&t, 3, 2).unwrap();
            for v in 0..2 {
                assert_eq!(clean_derivative(&g, v), clean_derivative_kernel(&g, v));
            }
        }
    }

    #[test]
    fn kernel_table_examples() {
        let k = kernel_i(3).unwrap();
        assert_eq!(k.poly(), {
            let mut q = Poly::zero(2, 3);
            q.add_term(vec![1, 2], 2);
            q.add_term(vec![2, 1], 1);
            q
        });
        for x in 0..3 {
            assert_eq!(k.at(0, x), 0);
        }
        assert_eq!(k.at(2, 1), 2);
    }

    #[test]
    fn antisymmetry() {
        for p in [3u64, 5, 7, 11, 13] {
            let k = kernel_i(p).unwrap();
            for t in 0..p {
                for x in 0..p {
                    assert_eq!(k.at(t, x), neg_mod(k.at(x, t), p));
                }
            }
        }
    }

    #[test]
    fn definite_integral_examples() {
        let k3 = kernel_i(3).unwrap();
        assert_eq!(definite_integral(&f(&[0, 1], 3), 2, &k3).unwrap(), 2);
        assert_eq!(definite_integral(&CalcFn::zero(1, 3), 1, &k3).unwrap(), 0);
        assert!(definite_integral(&f(&[0, 0, 1], 3), 1, &k3).is_err());
        for p in [3u64, 5] {
            let k = kernel_i(p).unwrap();
            let half = inv_mod(2, p).unwrap();
            for t in 0..p {
                let want = mul_mod(t * t % p, half, p);
                assert_eq!(definite_integral(&f(&[0, 1], p), t, &k).unwrap(), want);
            }
        }
    }

    #[test]
    fn fundamental_theorem_low_degree() {
        for p in [3u64, 5] {
            let k = kernel_i(p).unwrap();
            let count = (p as usize).pow((p - 2) as u32);
            for mut idx in 0..count {
                let mut c = vec![0i128; (p - 2) as usize];
                for v in c.iter_mut() {
                    *v = (idx % p as usize) as i128;
                    idx /= p as usize;
                }
                let g = f(&c, p);
                let big = antiderivative(&g, &k).unwrap();
                assert_eq!(clean_derivative(&big, 0), g);
            }
        }
    }

    #[test]
    fn delta_pairing() {
        for p in [3u64, 5, 7] {
            let k = kernel_i(p).unwrap();
            let mut t = vec![0u64; p as usize];
            t[0] = 1;
            let delta = CalcFn::from_table(&t, p, 1).unwrap();
            for x in 0..p {
                assert_eq!(dt_pairing(&delta, x, &k).unwrap(), neg_mod(k.at(x, 1), p));
            }
        }
    }

    #[test]
    fn translation_invariance_reduced() {
        let k = kernel_i(3).unwrap();
        for g in all_clean_univariate(3).filter(|g| g.is_reduced()) {
            for x in 0..6 {
                for c in 0..3 {
                    assert_eq!(
                        translated_integral(&g, x, c, &k).unwrap(),
                        interval_integral(&g, 0, x, &k).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn summation_of_delta() {
        let k = kernel_i(3).unwrap();
        let delta = CalcFn::from_table(&[1, 0, 0], 3, 1).unwrap();
        let s = summation_calculus(&delta, &k).unwrap();
        // -(x^3 - x)/3 mod 3 at x = 2
        assert_eq!(s.f_delta[2], 1);
        for x in 0..9i128 {
            let closed = arith::reduce_i128(-(x.pow(3) - x) / 3, 3);
            assert_eq!(s.delta_at(x), closed);
        }
        let zero = summation_calculus(&CalcFn::zero(1, 3), &k).unwrap();
        assert!(zero.f_i.iter().chain(&zero.f_delta).all(|&v| v == 0));
    }

    #[test]
    fn formal_derivative_examples() {
        assert_eq!(modular_derivative_formal(&f(&[0, 1], 3)).unwrap(), f(&[1], 3));
        assert!(modular_derivative_formal(&f(&[2], 5)).unwrap().poly().is_zero());
    }

    #[test]
    fn zero_area_integral() {
        let k = kernel_i(3).unwrap();
        let area: Vec<Vec<u64>> = grid_points(3, 2).collect();
        assert_eq!(area_integral(&CalcFn::zero(2, 3), &area, &k).unwrap(), 0);
    }
}
