//! Rationals with an explicit `p`-valuation.
//!
//! Every series term such as `p^i / i!` or `p^(i-1) / i` is built as a
//! [`ValuedRational`]: division by `p` only moves the valuation, so no
//! modular inverse of a multiple of `p` is ever taken.

use std::ops::Mul;

use crate::arith::{self, mul_mod};
use crate::error::{Error, Result};
use crate::ring::Residue;

/// `unit · p^valuation`, with the unit known modulo `p^precision`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValuedRational {
    p: u64,
    precision: u32,
    modulus: u64,
    /// `None` is exact zero.
    inner: Option<(i64, u64)>,
}

impl ValuedRational {
    pub fn zero(p: u64, precision: u32) -> Self {
        let modulus = p.pow(precision);
        ValuedRational { p, precision, modulus, inner: None }
    }

    pub fn one(p: u64, precision: u32) -> Self {
        Self::from_int(1, p, precision)
    }

    pub fn from_int(x: i128, p: u64, precision: u32) -> Self {
        let modulus = p.pow(precision);
        if x == 0 {
            return ValuedRational { p, precision, modulus, inner: None };
        }
        let v = arith::valuation(x.unsigned_abs(), p);
        let unit = x / (p as i128).pow(v);
        ValuedRational {
            p,
            precision,
            modulus,
            inner: Some((v as i64, arith::reduce_i128(unit, modulus))),
        }
    }

    /// `num / den` for nonzero `den`.
    pub fn ratio(num: i128, den: i128, p: u64, precision: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        Ok(Self::from_int(num, p, precision) * Self::from_int(den, p, precision).recip()?)
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_none()
    }

    pub fn valuation(&self) -> Option<i64> {
        self.inner.map(|(v, _)| v)
    }

    pub fn unit(&self) -> Option<u64> {
        self.inner.map(|(_, u)| u)
    }

    pub fn recip(&self) -> Result<Self> {
        let (v, u) = self
            .inner
            .ok_or_else(|| Error::InvalidArgument("reciprocal of zero".into()))?;
        let inv = arith::inv_mod(u, self.modulus).expect("unit part is coprime to p");
        Ok(ValuedRational { inner: Some((-v, inv)), ..*self })
    }

    pub fn pow(&self, e: u32) -> Self {
        match self.inner {
            None if e == 0 => Self::one(self.p, self.precision),
            None => *self,
            Some((v, u)) => ValuedRational {
                inner: Some((v * e as i64, arith::pow_mod(u, e as u64, self.modulus))),
                ..*self
            },
        }
    }

    /// Reduces to a residue modulo `p^m`, `m ≤ precision`. Defined only for
    /// nonnegative valuation.
    pub fn reduce(&self, m: u32) -> Result<Residue> {
        assert!(m <= self.precision, "reduction beyond tracked precision");
        let n = self.p.pow(m);
        match self.inner {
            None => Ok(Residue::from_u64(0, n)),
            Some((v, _)) if v < 0 => Err(Error::Precondition(format!(
                "negative valuation {v} has no residue mod {}^{m}",
                self.p
            ))),
            Some((v, _)) if v as u64 >= m as u64 => Ok(Residue::from_u64(0, n)),
            Some((v, u)) => Ok(Residue::from_u64(mul_mod(u % n, self.p.pow(v as u32), n), n)),
        }
    }

    /// `p^i / i!`.
    pub fn p_power_over_factorial(p: u64, i: u64, precision: u32) -> Self {
        let modulus = p.pow(precision);
        let vf = arith::factorial_valuation(i, p);
        let mut unit_part = 1u64;
        for k in 1..=i {
            let mut c = k;
            while c % p == 0 {
                c /= p;
            }
            unit_part = mul_mod(unit_part, c % modulus, modulus);
        }
        let inv = arith::inv_mod(unit_part, modulus).expect("coprime to p");
        ValuedRational { p, precision, modulus, inner: Some((i as i64 - vf as i64, inv)) }
    }

    /// `p^(i-1) / i` for `i ≥ 1`.
    pub fn log_coefficient(p: u64, i: u64, precision: u32) -> Self {
        let vi = arith::valuation(i as u128, p);
        let modulus = p.pow(precision);
        let unit = (i / p.pow(vi)) % modulus;
        let inv = arith::inv_mod(unit, modulus).expect("coprime to p");
        ValuedRational { p, precision, modulus, inner: Some((i as i64 - 1 - vi as i64, inv)) }
    }
}

impl Mul for ValuedRational {
    type Output = ValuedRational;
    fn mul(self, rhs: ValuedRational) -> ValuedRational {
        assert_eq!((self.p, self.precision), (rhs.p, rhs.precision));
        match (self.inner, rhs.inner) {
            (Some((v1, u1)), Some((v2, u2))) => ValuedRational {
                inner: Some((v1 + v2, mul_mod(u1, u2, self.modulus))),
                ..self
            },
            _ => ValuedRational { inner: None, ..self },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_terms_match_integer_arithmetic() {
        // p^i / i! with i! invertible (i < p) agrees with the modular inverse
        for p in [5u64, 7, 11] {
            let m = 3;
            let n = p.pow(m);
            for i in 0..p {
                let t = ValuedRational::p_power_over_factorial(p, i, m);
                let fact: u64 = (1..=i).product::<u64>().max(1);
                let want = mul_mod(
                    arith::pow_mod(p, i, n),
                    arith::inv_mod(fact % n, n).unwrap(),
                    n,
                );
                assert_eq!(t.reduce(m).unwrap().rep(), want);
            }
        }
    }

    #[test]
    fn factorial_valuations() {
        for p in [3u64, 5, 7] {
            for i in 0..60 {
                let t = ValuedRational::p_power_over_factorial(p, i, 4);
                assert_eq!(t.valuation().unwrap(), i as i64 - arith::factorial_valuation(i, p) as i64);
            }
        }
    }

    #[test]
    fn division_by_p_is_exact() {
        // 9/3 tracked with valuation, reduces to 3
        let r = ValuedRational::ratio(9, 3, 3, 3).unwrap();
        assert_eq!(r.valuation(), Some(1));
        assert_eq!(r.reduce(3).unwrap().rep(), 3);
        // 1/3 has no residue
        let r = ValuedRational::ratio(1, 3, 3, 3).unwrap();
        assert!(r.reduce(2).is_err());
        // 3^2/3 = 3: log coefficient at i = 3, p = 3
        let c = ValuedRational::log_coefficient(3, 3, 3);
        assert_eq!(c.reduce(3).unwrap().rep(), 3);
    }

    #[test]
    fn products_roundtrip() {
        let a = ValuedRational::ratio(10, 7, 5, 4).unwrap();
        let b = ValuedRational::ratio(7, 10, 5, 4).unwrap();
        assert_eq!((a * b).reduce(4).unwrap().rep(), 1);
        assert!(ValuedRational::zero(5, 4).is_zero());
        assert!(ValuedRational::zero(5, 4).recip().is_err());
    }
}
