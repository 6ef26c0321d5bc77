//! Centered digits, digit-by-digit resolution of maps modulo `p^m`, and
//! square groups (systems of `n+1` functions in `n+1` variables mod `p`).

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::interp::{interpolate_multi, tabulate};
use crate::poly::{grid_index, grid_points, Poly};
use crate::ring::centered_rep;

/// Centered base-`q` digits of `x`: `digits[k-1] = D_{q^k}(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitVector {
    pub q: u64,
    pub digits: Vec<i128>,
}

impl DigitVector {
    /// `Σ_k digits[k] q^k`, which equals `T(q^n, x)`.
    pub fn reconstruct(&self) -> i128 {
        let mut acc = 0i128;
        let mut w = 1i128;
        for &d in &self.digits {
            acc += d * w;
            w *= self.q as i128;
        }
        acc
    }
}

/// `D_{q^k}(x) = (T(q^k, x) - T(q^(k-1), x)) / q^(k-1)` for `k = 1..=n`.
pub fn digits(x: i128, q: u64, n: u32) -> Result<DigitVector> {
    if q < 2 || n == 0 {
        return Err(Error::InvalidArgument("digits need q >= 2 and n >= 1".into()));
    }
    arith::checked_pow(q, n).ok_or_else(|| Error::Overflow(format!("{q}^{n}")))?;
    let mut out = Vec::with_capacity(n as usize);
    let mut prev = 0i128;
    let mut w = 1u64;
    for _ in 0..n {
        let next_w = w * q;
        let t = centered_rep(x, next_w);
        out.push((t - prev) / w as i128);
        prev = t;
        w = next_w;
    }
    Ok(DigitVector { q, digits: out })
}

/// `D_{(q)p}(x) = D_p((x - T(q, x)) / q)`.
pub fn shifted_digit(x: i128, q: u64, p: u64) -> i128 {
    let y = (x - centered_rep(x, q)) / q as i128;
    centered_rep(y, p)
}

/// Output digit polynomials of a map modulo `p^m`, each in the `m` input
/// digit variables. Digit values `d` are encoded as `d mod p` and decoded
/// with the centered representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitResolution {
    pub p: u64,
    pub m: u32,
    pub polys: Vec<Poly>,
}

impl DigitResolution {
    /// Digit encodings of `x`, the arguments of every digit polynomial.
    pub fn encode(&self, x: i128) -> Vec<u64> {
        encode_digits(x, self.p, self.m)
    }

    /// Evaluates the digit polynomials at `x` and reassembles `f(x) mod p^m`.
    pub fn eval(&self, x: i128) -> u64 {
        let point = self.encode(x);
        let q = self.p.pow(self.m);
        let dv = DigitVector {
            q: self.p,
            digits: self
                .polys
                .iter()
                .map(|f| centered_rep(f.eval(&point) as i128, self.p))
                .collect(),
        };
        arith::reduce_i128(dv.reconstruct(), q)
    }
}

fn encode_digits(x: i128, p: u64, m: u32) -> Vec<u64> {
    digits(x, p, m)
        .expect("valid digit parameters")
        .digits
        .iter()
        .map(|&d| arith::reduce_i128(d, p))
        .collect()
}

/// Resolves `f` (a table over `0..p^m`) into one clean polynomial per
/// output digit by interpolating over the input digit grid.
pub fn resolve_digitwise(f: &[u64], p: u64, m: u32) -> Result<DigitResolution> {
    if !arith::is_prime(p) || p == 2 {
        return Err(Error::Precondition(format!("digit resolution needs an odd prime, got {p}")));
    }
    let q = arith::checked_pow(p, m).ok_or_else(|| Error::Overflow(format!("{p}^{m}")))?;
    if f.len() as u64 != q {
        return Err(Error::InvalidArgument(format!("table length {} != {q}", f.len())));
    }
    let mut tables = vec![vec![0u64; q as usize]; m as usize];
    for x in 0..q {
        let idx = grid_index(&encode_digits(x as i128, p, m), p);
        let out = encode_digits(f[x as usize] as i128, p, m);
        for (k, &d) in out.iter().enumerate() {
            tables[k][idx] = d;
        }
    }
    let polys = tables
        .iter()
        .map(|t| interpolate_multi(t, p, m as usize))
        .collect::<Result<Vec<_>>>()?;
    Ok(DigitResolution { p, m, polys })
}

/// `n+1` clean functions of `n+1` variables modulo `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareGroup {
    pub p: u64,
    pub funcs: Vec<Poly>,
    independent: Option<bool>,
}

impl SquareGroup {
    pub fn new(funcs: Vec<Poly>, p: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let k = funcs.len();
        if k == 0 {
            return Err(Error::InvalidArgument("empty square group".into()));
        }
        for f in &funcs {
            if f.nvars() != k {
                return Err(Error::InvalidArgument(format!(
                    "function arity {} != group size {k}",
                    f.nvars()
                )));
            }
            if f.modulus() != p {
                return Err(Error::InvalidArgument("function modulus differs from p".into()));
            }
        }
        let funcs = funcs.into_iter().map(|f| f.clean(p)).collect();
        Ok(SquareGroup { p, funcs, independent: None })
    }

    pub fn identity(k: usize, p: u64) -> Self {
        Self::new((0..k).map(|i| Poly::var(i, k, p)).collect(), p).expect("identity is valid")
    }

    /// Group induced by a permutation of `(Z/p)^k` given as an index table.
    pub fn from_permutation(perm: &[usize], p: u64, k: usize) -> Result<Self> {
        let pts: Vec<Vec<u64>> = grid_points(p, k).collect();
        if perm.len() != pts.len() {
            return Err(Error::InvalidArgument("permutation length mismatch".into()));
        }
        let funcs = (0..k)
            .map(|j| {
                let t: Vec<u64> = perm.iter().map(|&y| pts[y][j]).collect();
                interpolate_multi(&t, p, k)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(funcs, p)
    }

    pub fn dim(&self) -> usize {
        self.funcs.len()
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        self.funcs.iter().map(|f| f.eval(x)).collect()
    }

    /// Value tables, one per coordinate.
    pub fn tables(&self) -> Vec<Vec<u64>> {
        self.funcs.iter().map(|f| tabulate(f, self.p)).collect()
    }

    /// Size of the image of the joint map.
    pub fn image_size(&self) -> usize {
        let image: HashSet<Vec<u64>> = grid_points(self.p, self.dim()).map(|x| self.apply(&x)).collect();
        image.len()
    }

    /// `self ∘ inner`, cleaned.
    pub fn compose(&self, inner: &SquareGroup) -> Result<SquareGroup> {
        if inner.dim() != self.dim() || inner.p != self.p {
            return Err(Error::InvalidArgument("incompatible square groups".into()));
        }
        let funcs = self.funcs.iter().map(|f| f.compose(&inner.funcs)).collect();
        SquareGroup::new(funcs, self.p)
    }

    pub fn is_independent(&self) -> Option<bool> {
        self.independent
    }
}

/// True iff the joint map is surjective, hence bijective, on `(Z/p)^(n+1)`.
pub fn independence_check(g: &mut SquareGroup) -> bool {
    let ok = g.image_size() == (g.p as usize).pow(g.dim() as u32);
    g.independent = Some(ok);
    ok
}

/// The inverse group, interpolated from the inverse value table.
pub fn square_invert(g: &SquareGroup) -> Result<SquareGroup> {
    let k = g.dim();
    let p = g.p;
    let size = (p as usize).pow(k as u32);
    let mut inv: Vec<Option<Vec<u64>>> = vec![None; size];
    for x in grid_points(p, k) {
        let y = g.apply(&x);
        let slot = &mut inv[grid_index(&y, p)];
        if slot.is_some() {
            return Err(Error::Precondition("square group is not independent".into()));
        }
        *slot = Some(x);
    }
    let inv: Vec<Vec<u64>> = inv.into_iter().map(|x| x.expect("bijective")).collect();
    let funcs = (0..k)
        .map(|j| {
            let t: Vec<u64> = inv.iter().map(|x| x[j]).collect();
            interpolate_multi(&t, p, k)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut h = SquareGroup::new(funcs, p)?;
    h.independent = Some(true);
    Ok(h)
}
