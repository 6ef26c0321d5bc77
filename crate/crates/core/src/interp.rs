//! Polynomial representation of functions modulo `p` and `p^n`.
//!
//! Interpolation over the nodes `0..p` uses the indicator polynomials
//! `δ(x - a) = 1 - (x - a)^(p-1)`, which is the inverse Vandermonde in closed
//! form.

use serde::{Deserialize, Serialize};

use crate::arith::{self, add_mod, binomial_mod, mul_mod, pow_mod};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{grid_index, grid_points, Poly};

/// Coefficients of `δ(x - a) = 1 - (x - a)^(p-1)` modulo `p`, ascending.
pub fn delta_coeffs(a: u64, p: u64) -> Vec<u64> {
    let d = (p - 1) as usize;
    let mut out = vec![0u64; d + 1];
    let neg_a = (p - a % p) % p;
    for k in 0..=d {
        // (x - a)^d coefficient of x^k
        let c = mul_mod(binomial_mod(d as u64, k as u64, p), pow_mod(neg_a, (d - k) as u64, p), p);
        out[k] = (p - c) % p;
    }
    out[0] = add_mod(out[0], 1, p);
    out
}

/// Unique clean polynomial agreeing with `table[x]` for `x = 0..p`.
pub fn interpolate_fn(table: &[u64], p: u64) -> Result<Poly> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if table.len() != p as usize {
        return Err(Error::InvalidArgument(format!("table length {} != {p}", table.len())));
    }
    let mut coeffs = vec![0u64; p as usize];
    for (a, &v) in table.iter().enumerate() {
        let v = v % p;
        if v == 0 {
            continue;
        }
        for (k, c) in delta_coeffs(a as u64, p).into_iter().enumerate() {
            coeffs[k] = add_mod(coeffs[k], mul_mod(v, c, p), p);
        }
    }
    let ints: Vec<i128> = coeffs.iter().map(|&c| c as i128).collect();
    Ok(Poly::univariate(&ints, p))
}

/// Clean polynomial in `k` variables agreeing with a table indexed
/// lexicographically over `(Z/p)^k`. Tensor-product interpolation, one axis
/// at a time.
pub fn interpolate_multi(table: &[u64], p: u64, k: usize) -> Result<Poly> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let size = (p as usize).pow(k as u32);
    if table.len() != size {
        return Err(Error::InvalidArgument(format!("table length {} != {size}", table.len())));
    }
    let pu = p as usize;
    // inverse-Vandermonde matrix: coefficient k of the interpolant of e_a
    let basis: Vec<Vec<u64>> = (0..p).map(|a| delta_coeffs(a, p)).collect();
    let mut data: Vec<u64> = table.iter().map(|x| x % p).collect();
    // transform axis by axis: values -> coefficients
    for axis in 0..k {
        let stride = pu.pow((k - 1 - axis) as u32);
        let mut next = vec![0u64; size];
        for idx in 0..size {
            let digit = (idx / stride) % pu;
            if data[idx] == 0 {
                continue;
            }
            let base = idx - digit * stride;
            for (deg, &c) in basis[digit].iter().enumerate() {
                if c != 0 {
                    let t = base + deg * stride;
                    next[t] = add_mod(next[t], mul_mod(data[idx], c, p), p);
                }
            }
        }
        data = next;
    }
    let mut out = Poly::zero(k, p);
    for (idx, pt) in grid_points(p, k).enumerate() {
        if data[idx] != 0 {
            out.add_term(pt.iter().map(|&e| e as u32).collect(), data[idx]);
        }
    }
    Ok(out)
}

/// Value table of a polynomial over `(Z/p)^k` in lexicographic order.
pub fn tabulate(f: &Poly, p: u64) -> Vec<u64> {
    grid_points(p, f.nvars()).map(|pt| f.eval(&pt) % p).collect()
}

pub fn table_lookup(table: &[u64], point: &[u64], p: u64) -> u64 {
    table[grid_index(point, p)]
}

/// Branch form of a function modulo `p^n`:
/// `Σ_i (1 - (x-i)^(p^(n-1)(p-1))) Σ_k a[i][k] (x-i)^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalExpansion {
    pub p: u64,
    pub n: u32,
    /// `branches[i][k] = a_{k,i}` modulo `p^n`.
    pub branches: Vec<Vec<u64>>,
}

impl LocalExpansion {
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.n)
    }

    /// Evaluates the branch form literally, indicator included.
    pub fn eval(&self, x: u64) -> u64 {
        let q = self.modulus();
        let ind_exp = self.p.pow(self.n - 1) * (self.p - 1);
        let mut acc = 0u64;
        for (i, coeffs) in self.branches.iter().enumerate() {
            let d = arith::sub_mod(x % q, i as u64 % q, q);
            let indicator = arith::sub_mod(1 % q, pow_mod(d, ind_exp, q), q);
            if indicator == 0 {
                continue;
            }
            let mut inner = 0u64;
            let mut dk = 1 % q;
            for &a in coeffs {
                inner = add_mod(inner, mul_mod(a, dk, q), q);
                dk = mul_mod(dk, d, q);
            }
            acc = add_mod(acc, mul_mod(indicator, inner, q), q);
        }
        acc
    }
}

/// `1 - x^(p^(n-1)(p-1))` modulo `p^n`.
pub fn class_indicator(x: u64, p: u64, n: u32) -> u64 {
    let q = p.pow(n);
    arith::sub_mod(1 % q, pow_mod(x % q, p.pow(n - 1) * (p - 1), q), q)
}

/// Finds the branch form of `f` given on `0..p^n`. Fails when some residue
/// class admits no polynomial of the form `Σ_k a_k (x-i)^k`.
pub fn local_expand(f: &[u64], p: u64, n: u32) -> Result<LocalExpansion> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let q = p.pow(n);
    if f.len() != q as usize {
        return Err(Error::InvalidArgument(format!("table length {} != {q}", f.len())));
    }
    let reps = p.pow(n - 1);
    let mut branches = Vec::with_capacity(p as usize);
    for i in 0..p {
        // rows: t in 0..p^(n-1), unknown a_k with column (p t)^k
        let a: Vec<Vec<u64>> = (0..reps)
            .map(|t| (0..n).map(|k| pow_mod(p * t % q, k as u64, q)).collect())
            .collect();
        let b: Vec<u64> = (0..reps).map(|t| f[(i + p * t) as usize] % q).collect();
        let sol = linalg::solve_prime_power(&a, &b, p, n).ok_or_else(|| {
            Error::NotRepresentable(format!("residue class {i} mod {p} has no branch polynomial"))
        })?;
        branches.push(sol);
    }
    Ok(LocalExpansion { p, n, branches })
}

/// `e^j mod p` for `j = 0..p-1`; `e` must generate `(Z/p)^*`.
pub fn exp_table(e: u64, p: u64) -> Result<Vec<u64>> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e % p == 0 || arith::multiplicative_order(e % p, p, p - 1) != p - 1 {
        return Err(Error::NotGenerator { value: e, modulus: p });
    }
    let mut out = Vec::with_capacity(p as usize - 1);
    let mut x = 1 % p;
    for _ in 0..(p - 1) {
        out.push(x);
        x = mul_mod(x, e % p, p);
    }
    Ok(out)
}

/// Interpolates a function of `j mod p-1` as `c_0 + Σ c_i e^(i j)`; returns
/// `c` or `None` when the exponent Vandermonde system is singular.
pub fn exponent_interpolate(values: &[u64], e: u64, p: u64) -> Result<Option<Vec<u64>>> {
    let pw = exp_table(e, p)?;
    let d = (p - 1) as usize;
    if values.len() != d {
        return Err(Error::InvalidArgument("values must have length p-1".into()));
    }
    // row j: (e^j)^i for i = 0..p-1
    let a: Vec<Vec<u64>> = (0..d).map(|j| (0..d).map(|i| pow_mod(pw[j], i as u64, p)).collect()).collect();
    Ok(linalg::solve_prime_power(&a, values, p, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn delta_table_interpolates_to_indicator() {
        let f = interpolate_fn(&[1, 0, 0], 3).unwrap();
        // 1 - x^2 mod 3
        assert_eq!(f, Poly::univariate(&[1, 0, -1], 3));
        for p in [5u64, 7, 11] {
            let mut t = vec![0; p as usize];
            t[0] = 1;
            let f = interpolate_fn(&t, p).unwrap();
            let mut want = vec![0i128; p as usize];
            want[0] = 1;
            want[p as usize - 1] = -1;
            assert_eq!(f, Poly::univariate(&want, p));
        }
    }

    #[test]
    fn identity_table() {
        let f = interpolate_fn(&[0, 1, 2, 3, 4], 5).unwrap();
        assert_eq!(f, Poly::var(0, 1, 5));
    }

    #[test]
    fn composite_rejected() {
        assert_eq!(interpolate_fn(&[0, 1, 2, 3], 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn random_tables_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t: Vec<u64> = (0..7).map(|_| rng.gen_range(0..7)).collect();
        let f = interpolate_fn(&t, 7).unwrap();
        assert!(f.is_clean(7));
        for x in 0..7 {
            assert_eq!(f.eval(&[x]), t[x as usize]);
        }
    }

    #[test]
    fn multivariate_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 1..=3 {
            let size = 3usize.pow(k as u32);
            let t: Vec<u64> = (0..size).map(|_| rng.gen_range(0..3)).collect();
            let f = interpolate_multi(&t, 3, k).unwrap();
            assert!(f.is_clean(3));
            assert_eq!(tabulate(&f, 3), t);
        }
    }

    #[test]
    fn indicator_mod_9() {
        // 1 - x^6 mod 9
        assert_eq!(class_indicator(3, 3, 2), 1);
        assert_eq!(class_indicator(1, 3, 2), 0);
        for x in 0..9u64 {
            assert_eq!(class_indicator(x, 3, 2), u64::from(x % 3 == 0));
        }
    }

    #[test]
    fn local_expand_identity_and_constant() {
        let id: Vec<u64> = (0..9).collect();
        let e = local_expand(&id, 3, 2).unwrap();
        for i in 0..3 {
            assert_eq!(e.branches[i], vec![i as u64, 1]);
        }
        let c = local_expand(&[4; 9], 3, 2).unwrap();
        for i in 0..3 {
            assert_eq!(c.branches[i], vec![4, 0]);
        }
        for x in 0..9 {
            assert_eq!(e.eval(x), x);
            assert_eq!(c.eval(x), 4);
        }
    }

    #[test]
    fn local_expand_rejects_non_polynomial() {
        let mut f = vec![0u64; 9];
        f[3] = 1;
        assert!(matches!(local_expand(&f, 3, 2), Err(Error::NotRepresentable(_))));
    }

    #[test]
    fn exp_table_examples() {
        assert_eq!(exp_table(2, 5).unwrap(), vec![1, 2, 4, 3]);
        assert_eq!(exp_table(3, 7).unwrap(), vec![1, 3, 2, 6, 4, 5]);
        assert_eq!(exp_table(4, 5), Err(Error::NotGenerator { value: 4, modulus: 5 }));
    }

    #[test]
    fn all_tables_mod_3() {
        for idx in 0..27u64 {
            let t = [idx % 3, idx / 3 % 3, idx / 9];
            let f = interpolate_fn(&t, 3).unwrap();
            assert!(f.is_clean(3));
            assert_eq!(tabulate(&f, 3), t);
        }
    }

    #[test]
    fn random_tables_500() {
        let mut rng = ChaCha8Rng::seed_from_u64(500);
        for p in [5u64, 7, 11] {
            for _ in 0..500 {
                let t: Vec<u64> = (0..p).map(|_| rng.gen_range(0..p)).collect();
                assert_eq!(tabulate(&interpolate_fn(&t, p).unwrap(), p), t);
            }
        }
    }

    /// Coefficients from solving the Vandermonde system directly.
    #[test]
    fn matches_vandermonde_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for p in [3u64, 5, 7] {
            let v: Vec<Vec<u64>> = (0..p).map(|x| (0..p).map(|k| pow_mod(x, k, p)).collect()).collect();
            for _ in 0..50 {
                let t: Vec<u64> = (0..p).map(|_| rng.gen_range(0..p)).collect();
                let sol = linalg::solve_prime_power(&v, &t, p, 1).unwrap();
                let mut c = interpolate_fn(&t, p).unwrap().coeffs_univariate();
                c.resize(p as usize, 0);
                assert_eq!(c, sol);
            }
        }
    }

    #[test]
    fn local_expand_roundtrips_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (p, n) in [(3u64, 2u32), (3, 3), (5, 2)] {
            let q = p.pow(n);
            for _ in 0..30 {
                let coeffs: Vec<u64> = (0..5).map(|_| rng.gen_range(0..q)).collect();
                let f: Vec<u64> = (0..q)
                    .map(|x| coeffs.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, q), c, q)))
                    .collect();
                let e = local_expand(&f, p, n).unwrap();
                for x in 0..q {
                    assert_eq!(e.eval(x), f[x as usize], "p={p} n={n} x={x}");
                }
            }
        }
    }
}
