//! Exact residue arithmetic over factored moduli.
//!
//! Residues are kept in least-nonnegative form; the centered window is only
//! produced on demand by [`centered_rep`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::arith::{self, add_mod, mul_mod, neg_mod, pow_mod, reduce_i128, sub_mod};
use crate::error::{Error, Result};

/// A modulus together with its prime factorisation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    factors: Vec<(u64, u32)>,
    value: u64,
}

impl Modulus {
    pub fn from_factors(mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.sort_unstable();
        let mut value: u64 = 1;
        for w in factors.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidArgument(format!("repeated prime {}", w[0].0)));
            }
        }
        for &(p, k) in &factors {
            if !arith::is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if k == 0 {
                return Err(Error::InvalidArgument(format!("zero exponent for {p}")));
            }
            let pk = arith::checked_pow(p, k)
                .ok_or_else(|| Error::Overflow(format!("{p}^{k}")))?;
            value = value
                .checked_mul(pk)
                .filter(|v| *v < arith::MAX_MODULUS)
                .ok_or_else(|| Error::Overflow("modulus product".into()))?;
        }
        Ok(Modulus { factors, value })
    }

    pub fn prime_power(p: u64, k: u32) -> Result<Self> {
        Self::from_factors(vec![(p, k)])
    }

    /// Factors `n` by trial division.
    pub fn factor(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("modulus 0".into()));
        }
        Self::from_factors(arith::factorize(n))
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Prime-power components `p^k`.
    pub fn components(&self) -> impl Iterator<Item = (u64, u32, u64)> + '_ {
        self.factors.iter().map(|&(p, k)| (p, k, p.pow(k)))
    }

    pub fn residue(&self, x: i128) -> Residue {
        Residue::new(x, self.value)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, k)| if *k == 1 { p.to_string() } else { format!("{p}^{k}") })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

/// An integer class modulo `modulus`, stored as its least nonnegative
/// representative. Equality is congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    rep: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(x: i128, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Residue { rep: reduce_i128(x, modulus), modulus }
    }

    pub fn from_u64(x: u64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Residue { rep: x % modulus, modulus }
    }

    pub fn rep(&self) -> u64 {
        self.rep
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn centered(&self) -> i128 {
        centered_rep(self.rep as i128, self.modulus)
    }

    pub fn pow(&self, e: u64) -> Self {
        Residue { rep: pow_mod(self.rep, e, self.modulus), modulus: self.modulus }
    }

    /// Power with a signed exponent; requires a unit for negative exponents.
    pub fn pow_signed(&self, e: i128) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow_big(e as u128))
        } else {
            let inv = self.inverse()?;
            Ok(inv.pow_big(e.unsigned_abs()))
        }
    }

    fn pow_big(&self, mut e: u128) -> Self {
        let n = self.modulus;
        if n == 1 {
            return *self;
        }
        let mut acc = 1u64;
        let mut b = self.rep;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, b, n);
            }
            b = mul_mod(b, b, n);
            e >>= 1;
        }
        Residue { rep: acc, modulus: n }
    }

    pub fn inverse(&self) -> Result<Self> {
        arith::inv_mod(self.rep, self.modulus)
            .map(|r| Residue { rep: r, modulus: self.modulus })
            .ok_or(Error::NotUnit { value: self.rep as i128, modulus: self.modulus })
    }

    pub fn is_unit(&self) -> bool {
        arith::gcd(self.rep, self.modulus) == 1
    }

    /// Reduction to a divisor of the modulus.
    pub fn reduce_to(&self, m: u64) -> Self {
        debug_assert!(self.modulus % m == 0);
        Residue::from_u64(self.rep, m)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "residues with different moduli");
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.rep, self.modulus)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        Residue { rep: add_mod(self.rep, rhs.rep, self.modulus), modulus: self.modulus }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        Residue { rep: sub_mod(self.rep, rhs.rep, self.modulus), modulus: self.modulus }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        Residue { rep: mul_mod(self.rep, rhs.rep, self.modulus), modulus: self.modulus }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue { rep: neg_mod(self.rep, self.modulus), modulus: self.modulus }
    }
}

/// Centered representative: the unique `y ≡ x (mod q)` with
/// `-q/2 < y < q/2 + 1` for even `q` and `-q/2 < y < q/2` for odd `q`.
pub fn centered_rep(x: i128, q: u64) -> i128 {
    assert!(q >= 1, "centered_rep needs q >= 1");
    let q = q as i128;
    let r = x.rem_euclid(q);
    // even q: window (-q/2, q/2]; odd q: [-(q-1)/2, (q-1)/2]
    if 2 * r > q {
        r - q
    } else {
        r
    }
}

/// Chinese remainder combination of `(rep, modulus)` pairs with pairwise
/// coprime moduli.
pub fn crt_combine(pairs: &[(i128, u64)]) -> Result<Residue> {
    let mut acc = Residue::new(0, 1);
    for &(rep, m) in pairs {
        if m == 0 {
            return Err(Error::InvalidArgument("zero modulus".into()));
        }
        let n = acc.modulus;
        if arith::gcd(n, m) != 1 {
            return Err(Error::NotCoprime(n, m));
        }
        let total = n
            .checked_mul(m)
            .filter(|v| *v < arith::MAX_MODULUS)
            .ok_or_else(|| Error::Overflow(format!("{n}·{m}")))?;
        let r = reduce_i128(rep, m);
        // x = acc + n·t with n·t ≡ r - acc (mod m)
        let inv = arith::inv_mod(n % m, m).expect("coprime");
        let t = mul_mod(sub_mod(r, acc.rep % m, m), inv, m);
        let x = (acc.rep as u128 + n as u128 * t as u128) % total as u128;
        acc = Residue { rep: x as u64, modulus: total };
    }
    Ok(acc)
}

/// Bracket product `[a]_p [b]_q` of residues with coprime moduli.
pub fn bracket(a: Residue, b: Residue) -> Result<Residue> {
    crt_combine(&[(a.rep as i128, a.modulus), (b.rep as i128, b.modulus)])
}

/// The `Q`-part of `x`: product of `p^n` with `p^n ∥ x` over the primes of `Q`.
pub fn val_part(x: i128, q: &Modulus) -> Result<u128> {
    if x == 0 {
        return Err(Error::InvalidArgument("val_part of 0".into()));
    }
    let a = x.unsigned_abs();
    let mut out: u128 = 1;
    for &(p, _) in q.factors() {
        let v = arith::valuation(a, p);
        out *= (p as u128).pow(v);
    }
    Ok(out)
}

/// Product of the distinct primes dividing `q`; `radical(1) = 1`.
pub fn radical(q: u64) -> u64 {
    assert!(q >= 1);
    arith::factorize(q).iter().map(|(p, _)| *p).product()
}

/// Least `s ≥ 1` with `y^s ≡ 1 (mod x)` for every unit `y`.
pub fn carmichael(x: u64) -> Result<u64> {
    if x < 2 {
        return Err(Error::InvalidArgument(format!("carmichael({x}) needs x >= 2")));
    }
    let mut acc = 1u64;
    for (p, k) in arith::factorize(x) {
        let lam = if p == 2 {
            match k {
                1 => 1,
                2 => 2,
                _ => 1u64 << (k - 2),
            }
        } else {
            p.pow(k - 1) * (p - 1)
        };
        acc = num_integer::lcm(acc, lam);
    }
    Ok(acc)
}

/// The inverse convention `1/x := x^{p(p-1)-1}` modulo `p^2`.
pub fn unit_inverse_convention(x: i128, p: u64) -> Result<Residue> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let n = p * p;
    let r = Residue::new(x, n);
    if r.rep % p == 0 {
        return Err(Error::NotUnit { value: x, modulus: p });
    }
    Ok(r.pow(p * (p - 1) - 1))
}

/// All `y (mod p)` with `y^a ≡ x`. Possibly empty.
pub fn nth_root_set(x: Residue, a: u64) -> Result<Vec<Residue>> {
    let p = x.modulus;
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok((0..p)
        .filter(|&y| pow_mod(y, a, p) == x.rep)
        .map(|y| Residue::from_u64(y, p))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_examples() {
        assert_eq!(centered_rep(7, 5), 2);
        assert_eq!(centered_rep(3, 4), -1);
        assert_eq!(centered_rep(8, 5), -2);
        assert_eq!(centered_rep(2, 4), 2);
        assert_eq!(centered_rep(5, 1), 0);
    }

    #[test]
    fn centered_window_exhaustive() {
        for q in 1..=1000u64 {
            let qi = q as i128;
            for x in (-10 * qi)..=(10 * qi) {
                let y = centered_rep(x, q);
                assert_eq!((x - y).rem_euclid(qi), 0);
                if q % 2 == 0 {
                    assert!(-qi < 2 * y && 2 * y < qi + 2, "q={q} x={x} y={y}");
                } else {
                    assert!(-qi < 2 * y && 2 * y < qi, "q={q} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn crt_examples() {
        // brute-force oracle for the unique solution mod 15
        let want = (0..15).find(|x| x % 3 == 1 && x % 5 == 2).unwrap();
        assert_eq!(want, 7);
        assert_eq!(crt_combine(&[(1, 3), (2, 5)]).unwrap(), Residue::new(7, 15));
        assert_eq!(crt_combine(&[(4, 9)]).unwrap(), Residue::new(4, 9));
        assert_eq!(crt_combine(&[(1, 6), (1, 4)]), Err(Error::NotCoprime(6, 4)));
        for x in 0..315i128 {
            let parts = [(x % 9, 9), (x % 5, 5), (x % 7, 7)];
            assert_eq!(crt_combine(&parts).unwrap().rep() as i128, x);
        }
    }

    #[test]
    fn crt_is_ring_isomorphism_mod_315() {
        let split = |x: u64| [(x as i128 % 9, 9u64), (x as i128 % 5, 5), (x as i128 % 7, 7)];
        for a in 0..315u64 {
            for b in (0..315u64).step_by(7) {
                let ca = crt_combine(&split(a)).unwrap();
                let cb = crt_combine(&split(b)).unwrap();
                let sum: Vec<(i128, u64)> = split(a)
                    .iter()
                    .zip(split(b).iter())
                    .map(|(x, y)| ((x.0 + y.0) % x.1 as i128, x.1))
                    .collect();
                let prod: Vec<(i128, u64)> = split(a)
                    .iter()
                    .zip(split(b).iter())
                    .map(|(x, y)| ((x.0 * y.0) % x.1 as i128, x.1))
                    .collect();
                assert_eq!(crt_combine(&sum).unwrap(), ca + cb);
                assert_eq!(crt_combine(&prod).unwrap(), ca * cb);
            }
        }
    }

    #[test]
    fn val_part_examples() {
        let m3 = Modulus::prime_power(3, 5).unwrap();
        assert_eq!(val_part(18, &m3).unwrap(), 9);
        assert_eq!(val_part(5, &m3).unwrap(), 1);
        let m6 = Modulus::from_factors(vec![(2, 4), (3, 4)]).unwrap();
        assert_eq!(val_part(12, &m6).unwrap(), 12);
        assert!(val_part(0, &m3).is_err());
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(12), 6);
        assert_eq!(radical(8), 2);
        assert_eq!(radical(1), 1);
    }

    fn carmichael_brute(x: u64) -> u64 {
        let units: Vec<u64> = (1..x).filter(|y| arith::gcd(*y, x) == 1).collect();
        (1..=x).find(|&s| units.iter().all(|&y| pow_mod(y, s, x) == 1 % x)).unwrap()
    }

    #[test]
    fn carmichael_matches_brute_force() {
        assert_eq!(carmichael(15).unwrap(), 4);
        assert_eq!(carmichael(8).unwrap(), 2);
        for p in [3u64, 5, 7, 11, 13] {
            assert_eq!(carmichael(p).unwrap(), p - 1);
        }
        for x in 2..400 {
            assert_eq!(carmichael(x).unwrap(), carmichael_brute(x), "x={x}");
        }
        assert!(carmichael(1).is_err());
    }

    #[test]
    fn inverse_convention() {
        assert_eq!(unit_inverse_convention(2, 3).unwrap(), Residue::new(5, 9));
        assert_eq!(unit_inverse_convention(1, 7).unwrap(), Residue::new(1, 49));
        assert!(unit_inverse_convention(3, 3).is_err());
        for p in [3u64, 5, 7] {
            for x in 1..(p * p) as i128 {
                if x % p as i128 == 0 {
                    continue;
                }
                let inv = unit_inverse_convention(x, p).unwrap();
                assert_eq!(inv * Residue::new(x, p * p), Residue::new(1, p * p));
            }
        }
    }

    #[test]
    fn root_sets() {
        let r = nth_root_set(Residue::new(4, 5), 2).unwrap();
        assert_eq!(r, vec![Residue::new(2, 5), Residue::new(3, 5)]);
        assert!(nth_root_set(Residue::new(2, 5), 2).unwrap().is_empty());
        assert!(nth_root_set(Residue::new(1, 7), 4).unwrap().contains(&Residue::new(1, 7)));
        // gcd(a, p-1) = 1 gives a unique root of every nonzero x
        for x in 1..7 {
            assert_eq!(nth_root_set(Residue::new(x, 7), 5).unwrap().len(), 1);
        }
    }

    #[test]
    fn bracket_laws() {
        let (p, q) = (7u64, 11u64);
        for k in 0..20i128 {
            for a in 0..7i128 {
                for b in (0..11i128).step_by(3) {
                    let ab = bracket(Residue::new(a, p), Residue::new(b, q)).unwrap();
                    let kab = bracket(Residue::new(k * a, p), Residue::new(k * b, q)).unwrap();
                    assert_eq!(kab, Residue::new(k, p * q) * ab);
                    let pow = bracket(
                        Residue::new(a, p).pow(k as u64),
                        Residue::new(b, q).pow(k as u64),
                    )
                    .unwrap();
                    assert_eq!(pow, ab.pow(k as u64));
                }
            }
        }
    }
}
