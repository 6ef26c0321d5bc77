//! Sparse multivariate polynomials with coefficients modulo `n`.
//!
//! A polynomial modulo a prime `p` is *clean* when every variable appears
//! with degree at most `p - 1`; every function on `(Z/p)^k` has exactly one
//! clean form.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, add_mod, mul_mod, neg_mod, pow_mod, sub_mod};

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "PolyRepr", from = "PolyRepr")]
pub struct Poly {
    nvars: usize,
    modulus: u64,
    terms: BTreeMap<Exponents, u64>,
}

/// Serialized form: a term list, since JSON map keys must be strings.
#[derive(Serialize, Deserialize)]
struct PolyRepr {
    nvars: usize,
    modulus: u64,
    terms: Vec<(Exponents, u64)>,
}

impl From<Poly> for PolyRepr {
    fn from(p: Poly) -> Self {
        PolyRepr { nvars: p.nvars, modulus: p.modulus, terms: p.terms.into_iter().collect() }
    }
}

impl From<PolyRepr> for Poly {
    fn from(r: PolyRepr) -> Self {
        let mut p = Poly::zero(r.nvars, r.modulus);
        for (e, c) in r.terms {
            p.add_term(e, c % r.modulus.max(1));
        }
        p
    }
}

impl Poly {
    pub fn zero(nvars: usize, modulus: u64) -> Self {
        Poly { nvars, modulus, terms: BTreeMap::new() }
    }

    pub fn constant(c: i128, nvars: usize, modulus: u64) -> Self {
        let mut p = Self::zero(nvars, modulus);
        p.add_term(vec![0; nvars], arith::reduce_i128(c, modulus));
        p
    }

    pub fn var(i: usize, nvars: usize, modulus: u64) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, 1, modulus)
    }

    pub fn monomial(exps: Exponents, c: u64, modulus: u64) -> Self {
        let mut p = Self::zero(exps.len(), modulus);
        p.add_term(exps, c % modulus);
        p
    }

    /// Univariate polynomial from ascending coefficients.
    pub fn univariate(coeffs: &[i128], modulus: u64) -> Self {
        let mut p = Self::zero(1, modulus);
        for (k, &c) in coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], arith::reduce_i128(c, modulus));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, u64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> u64 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    /// Ascending coefficient list of a univariate polynomial.
    pub fn coeffs_univariate(&self) -> Vec<u64> {
        assert_eq!(self.nvars, 1);
        let deg = self.degree_in(0).unwrap_or(0) as usize;
        let mut out = vec![0; deg + 1];
        for (e, c) in self.terms() {
            out[e[0] as usize] = c;
        }
        out
    }

    pub fn add_term(&mut self, exps: Exponents, c: u64) {
        assert_eq!(exps.len(), self.nvars, "exponent arity");
        let c = c % self.modulus;
        if c == 0 {
            return;
        }
        let n = self.modulus;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = add_mod(*o.get(), c, n);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_clean(&self, p: u64) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| (k as u64) < p))
    }

    /// Clean and free of any term carrying degree `p - 1` in one variable.
    pub fn is_reduced(&self, p: u64) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| (k as u64) < p - 1))
    }

    /// Clean form as a function on `(Z/p)^k`, using `x^p = x`.
    pub fn clean(&self, p: u64) -> Poly {
        assert_eq!(self.modulus, p, "clean form needs coefficients modulo p");
        let mut out = Poly::zero(self.nvars, p);
        for (e, c) in self.terms() {
            let reduced: Exponents = e
                .iter()
                .map(|&k| {
                    let k = k as u64;
                    if k < p {
                        k as u32
                    } else {
                        (1 + (k - 1) % (p - 1)) as u32
                    }
                })
                .collect();
            out.add_term(reduced, c);
        }
        out
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        assert_eq!(point.len(), self.nvars);
        let n = self.modulus;
        let mut acc = 0u64;
        for (e, c) in self.terms() {
            let mut t = c;
            for (x, k) in point.iter().zip(e.iter()) {
                if *k > 0 {
                    t = mul_mod(t, pow_mod(*x, *k as u64, n), n);
                }
            }
            acc = add_mod(acc, t, n);
        }
        acc
    }

    pub fn eval_signed(&self, point: &[i128]) -> u64 {
        let pt: Vec<u64> = point.iter().map(|&x| arith::reduce_i128(x, self.modulus)).collect();
        self.eval(&pt)
    }

    pub fn scale(&self, c: u64) -> Poly {
        let mut out = Poly::zero(self.nvars, self.modulus);
        for (e, v) in self.terms() {
            out.add_term(e.clone(), mul_mod(v, c % self.modulus, self.modulus));
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero(self.nvars, self.modulus);
        for (e, v) in self.terms() {
            out.add_term(e.clone(), neg_mod(v, self.modulus));
        }
        out
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.compatible(other);
        let mut out = self.clone();
        for (e, v) in other.terms() {
            out.add_term(e.clone(), v);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.compatible(other);
        let mut out = self.clone();
        for (e, v) in other.terms() {
            out.add_term(e.clone(), sub_mod(0, v, self.modulus));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.compatible(other);
        let n = self.modulus;
        let mut out = Poly::zero(self.nvars, n);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let e: Exponents = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                out.add_term(e, mul_mod(c1, c2, n));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::constant(1, self.nvars, self.modulus);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divided-power (Hasse) derivative of order `k` in `var`:
    /// `x^e ↦ C(e, k) x^(e-k)`, exact integer binomials.
    pub fn hasse(&self, var: usize, k: u32) -> Poly {
        let n = self.modulus;
        let mut out = Poly::zero(self.nvars, n);
        for (e, c) in self.terms() {
            if e[var] >= k {
                let b = arith::binomial_mod(e[var] as u64, k as u64, n);
                let mut ne = e.clone();
                ne[var] -= k;
                out.add_term(ne, mul_mod(c, b, n));
            }
        }
        out
    }

    /// Formal derivative in `var`.
    pub fn derivative(&self, var: usize) -> Poly {
        self.hasse(var, 1)
    }

    /// Substitutes variable `i` by `subs[i]`; all substitutes share one
    /// variable space.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let target = subs.first().map(|s| s.nvars).unwrap_or(0);
        let n = self.modulus;
        let mut out = Poly::zero(target, n);
        // cache powers per variable
        let mut powers: Vec<Vec<Poly>> = subs
            .iter()
            .map(|s| vec![Poly::constant(1, target, n), s.clone()])
            .collect();
        for (e, c) in self.terms() {
            let mut t = Poly::constant(c as i128, target, n);
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Re-embeds the polynomial into `nvars` variables, sending variable `i`
    /// to `map[i]`.
    pub fn remap(&self, map: &[usize], nvars: usize) -> Poly {
        assert_eq!(map.len(), self.nvars);
        let mut out = Poly::zero(nvars, self.modulus);
        for (e, c) in self.terms() {
            let mut ne = vec![0u32; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            out.add_term(ne, c);
        }
        out
    }

    /// The same coefficients read modulo a divisor of the modulus.
    pub fn reduce_modulus(&self, m: u64) -> Poly {
        assert_eq!(self.modulus % m, 0);
        let mut out = Poly::zero(self.nvars, m);
        for (e, c) in self.terms() {
            out.add_term(e.clone(), c % m);
        }
        out
    }

    fn compatible(&self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        assert_eq!(self.modulus, other.modulus, "modulus mismatch");
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| if *k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if *c == 1 {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{c}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Iterates every point of `(Z/p)^k` in lexicographic order.
pub fn grid_points(p: u64, k: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = (p as usize).pow(k as u32);
    (0..total).map(move |mut idx| {
        let mut pt = vec![0u64; k];
        for slot in pt.iter_mut().rev() {
            *slot = (idx % p as usize) as u64;
            idx /= p as usize;
        }
        pt
    })
}

/// Lexicographic index of a grid point, inverse of [`grid_points`].
pub fn grid_index(point: &[u64], p: u64) -> usize {
    point.iter().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_form_agrees_as_function() {
        let p = 5;
        let f = Poly::univariate(&[1, 0, 0, 0, 0, 0, 0, 3, 0, 2], p);
        let c = f.clean(p);
        assert!(c.is_clean(p));
        for x in 0..p {
            assert_eq!(f.eval(&[x]), c.eval(&[x]));
        }
        // x^p ≡ x, but x^0 and x^(p-1) stay distinct
        assert_eq!(Poly::univariate(&[0, 0, 0, 1], 3).clean(3), Poly::var(0, 1, 3));
    }

    #[test]
    fn hasse_of_binomial_power() {
        let f = Poly::univariate(&[0, 0, 0, 1], 3);
        assert_eq!(f.hasse(0, 3), Poly::constant(1, 1, 3));
        assert!(f.hasse(0, 1).is_zero());
    }

    #[test]
    fn compose_shift() {
        // (x + y)^2 in two variables
        let n = 7;
        let f = Poly::univariate(&[0, 0, 1], n);
        let s = Poly::var(0, 2, n).add(&Poly::var(1, 2, n));
        let g = f.compose(&[s]);
        assert_eq!(g.coeff(&[1, 1]), 2);
        assert_eq!(g.coeff(&[2, 0]), 1);
        assert_eq!(g.coeff(&[0, 2]), 1);
    }

    #[test]
    fn grid_roundtrip() {
        for (i, pt) in grid_points(3, 3).enumerate() {
            assert_eq!(grid_index(&pt, 3), i);
        }
    }
}
