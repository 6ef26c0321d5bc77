//! Gaussian integers modulo `p^m`, the unit circle `z z* ≡ 1`, the
//! complex exponential `E^i`, and pseudo-imaginary units for `p ≡ 1 (mod 4)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::arith::{self, add_mod, inv_mod, mul_mod, sub_mod};
use crate::error::{Error, Result};
use crate::padic::{GeneratorPair, PrecisionContext};
use crate::ring::Residue;
use crate::valued::ValuedRational;

/// `re + im·i` modulo `modulus`, with `i² = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaussianResidue {
    pub re: u64,
    pub im: u64,
    pub modulus: u64,
}

impl GaussianResidue {
    pub fn new(re: i128, im: i128, modulus: u64) -> Self {
        GaussianResidue {
            re: arith::reduce_i128(re, modulus),
            im: arith::reduce_i128(im, modulus),
            modulus,
        }
    }

    pub fn one(modulus: u64) -> Self {
        Self::new(1, 0, modulus)
    }

    pub fn i(modulus: u64) -> Self {
        Self::new(0, 1, modulus)
    }

    pub fn conj(&self) -> Self {
        GaussianResidue { im: (self.modulus - self.im) % self.modulus, ..*self }
    }

    /// `z z* = re² + im²`.
    pub fn norm(&self) -> u64 {
        let q = self.modulus;
        add_mod(mul_mod(self.re, self.re, q), mul_mod(self.im, self.im, q), q)
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::one(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `z^(-1) = z* / N(z)` when the norm is a unit.
    pub fn inverse(&self) -> Result<Self> {
        let n = inv_mod(self.norm(), self.modulus).ok_or(Error::NotUnit {
            value: self.norm() as i128,
            modulus: self.modulus,
        })?;
        let c = self.conj();
        Ok(GaussianResidue {
            re: mul_mod(c.re, n, self.modulus),
            im: mul_mod(c.im, n, self.modulus),
            modulus: self.modulus,
        })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.modulus != rhs.modulus {
            return Err(Error::InvalidArgument(format!(
                "mismatched moduli {} and {}",
                self.modulus, rhs.modulus
            )));
        }
        Ok(*self * *rhs)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        if self.modulus != rhs.modulus {
            return Err(Error::InvalidArgument(format!(
                "mismatched moduli {} and {}",
                self.modulus, rhs.modulus
            )));
        }
        Ok(*self + *rhs)
    }
}

impl Add for GaussianResidue {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        assert_eq!(self.modulus, r.modulus, "mismatched moduli");
        let q = self.modulus;
        GaussianResidue { re: add_mod(self.re, r.re, q), im: add_mod(self.im, r.im, q), modulus: q }
    }
}

impl Sub for GaussianResidue {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        self + (-r)
    }
}

impl Neg for GaussianResidue {
    type Output = Self;
    fn neg(self) -> Self {
        let q = self.modulus;
        GaussianResidue { re: (q - self.re) % q, im: (q - self.im) % q, modulus: q }
    }
}

impl Mul for GaussianResidue {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        assert_eq!(self.modulus, r.modulus, "mismatched moduli");
        let q = self.modulus;
        let re = sub_mod(mul_mod(self.re, r.re, q), mul_mod(self.im, r.im, q), q);
        let im = add_mod(mul_mod(self.re, r.im, q), mul_mod(self.im, r.re, q), q);
        GaussianResidue { re, im, modulus: q }
    }
}

impl fmt::Display for GaussianResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i (mod {})", self.re, self.im, self.modulus)
    }
}

fn require_3_mod_4(p: u64) -> Result<()> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 3 {
        return Err(Error::Precondition(format!("{p} is not ≡ 3 (mod 4)")));
    }
    Ok(())
}

/// The group `{z : z z* ≡ 1 (mod p)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitCircle {
    pub p: u64,
    pub elements: Vec<GaussianResidue>,
    /// Every element satisfies `z^p ≡ z*`.
    pub frobenius_holds: bool,
}

impl UnitCircle {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

pub fn unit_circle(p: u64) -> Result<UnitCircle> {
    require_3_mod_4(p)?;
    let elements: Vec<GaussianResidue> = (0..p)
        .flat_map(|a| (0..p).map(move |b| GaussianResidue::new(a as i128, b as i128, p)))
        .filter(|z| z.norm() == 1)
        .collect();
    let frobenius_holds = elements.iter().all(|z| z.pow(p) == z.conj());
    Ok(UnitCircle { p, elements, frobenius_holds })
}

/// `E^i = Σ_j p^j i^j / j!` modulo `p^m`.
pub fn exp_i(ctx: &PrecisionContext) -> Result<GaussianResidue> {
    require_3_mod_4(ctx.p)?;
    let q = ctx.modulus();
    let mut acc = GaussianResidue::new(0, 0, q);
    for j in 0..=ctx.n_terms {
        let c = ValuedRational::p_power_over_factorial(ctx.p, j, ctx.m).reduce(ctx.m)?.rep() as i128;
        let term = match j % 4 {
            0 => GaussianResidue::new(c, 0, q),
            1 => GaussianResidue::new(0, c, q),
            2 => GaussianResidue::new(-c, 0, q),
            _ => GaussianResidue::new(0, -c, q),
        };
        acc = acc + term;
    }
    Ok(acc)
}

/// Order of the norm-one group modulo `p^m`, `p ≡ 3 (mod 4)`.
pub fn circle_order(p: u64, m: u32) -> u64 {
    (p + 1) * p.pow(m - 1)
}

fn element_order(z: GaussianResidue, group_order: u64) -> u64 {
    let mut ord = group_order;
    for (r, _) in arith::factorize(group_order) {
        while ord % r == 0 && z.pow(ord / r) == GaussianResidue::one(z.modulus) {
            ord /= r;
        }
    }
    ord
}

/// Smallest norm-one `g` (by `(re, im)`) generating the circle group mod
/// `p^m` with `g^(1-p^(2m)) ≡ E^i`; this is the base `e^i` of `e^(ji)`.
pub fn circle_generator(ctx: &PrecisionContext) -> Result<GaussianResidue> {
    let (p, m) = (ctx.p, ctx.m);
    require_3_mod_4(p)?;
    let q = ctx.modulus();
    if q.checked_mul(q).is_none_or(|n| n > 50_000_000) {
        return Err(Error::Precondition(format!("circle scan mod {q} beyond desk scale")));
    }
    let target = exp_i(ctx)?;
    let order = circle_order(p, m);
    let k = (1i128 - (q as i128) * (q as i128)).rem_euclid(order as i128) as u64;
    for re in 0..q {
        for im in 0..q {
            let z = GaussianResidue { re, im, modulus: q };
            if z.norm() == 1 && z.pow(k) == target && element_order(z, order) == order {
                return Ok(z);
            }
        }
    }
    Err(Error::Precondition(format!("no circle generator mod {q}")))
}

/// `e^(a + bi) := e^a (e^i)^b` with `e` the generator of `gp` and `ei`
/// the circle base at the same precision.
pub fn gauss_exp(a: i128, b: i128, gp: &GeneratorPair, ei: GaussianResidue) -> GaussianResidue {
    let ctx = &gp.ctx;
    let q = ctx.modulus();
    let ea = arith::pow_mod(gp.e.rep(), a.rem_euclid(ctx.group_order() as i128) as u64, q);
    let b = b.rem_euclid(circle_order(ctx.p, ctx.m) as i128) as u64;
    GaussianResidue::new(ea as i128, 0, q) * ei.pow(b)
}

/// `(2ab/(a²+b²)) + i (a²-b²)/(a²+b²)` modulo `p`.
pub fn rational_point(p: u64, a: i128, b: i128) -> Result<GaussianResidue> {
    let a = arith::reduce_i128(a, p);
    let b = arith::reduce_i128(b, p);
    let s = add_mod(mul_mod(a, a, p), mul_mod(b, b, p), p);
    let inv = inv_mod(s, p).ok_or(Error::NotUnit { value: s as i128, modulus: p })?;
    let re = mul_mod(mul_mod(2 % p, mul_mod(a, b, p), p), inv, p);
    let im = mul_mod(sub_mod(mul_mod(a, a, p), mul_mod(b, b, p), p), inv, p);
    Ok(GaussianResidue { re, im, modulus: p })
}

/// A square root of `-1` modulo `p^m`, `p ≡ 1 (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoImaginary {
    pub p: u64,
    pub m: u32,
    pub omega: Residue,
}

impl PseudoImaginary {
    /// `a + bω` as a residue.
    pub fn embed(&self, a: i128, b: i128) -> Residue {
        let q = self.omega.modulus();
        Residue::new(a, q) + Residue::new(b, q) * self.omega
    }

    /// The conjugate unit `-ω`.
    pub fn conjugate(&self) -> PseudoImaginary {
        PseudoImaginary { omega: -self.omega, ..*self }
    }
}

/// Smallest mod-`p` root of `x² + 1`, Hensel-lifted to `p^m`; the smaller of
/// the two lifted roots is returned.
pub fn find_omega(p: u64, m: u32) -> Result<PseudoImaginary> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::Precondition(format!("{p} is not ≡ 1 (mod 4)")));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    let r0 = (1..p).find(|&x| mul_mod(x, x, p) == p - 1).expect("-1 is a square");
    let mut r = r0;
    let mut pk = p;
    for _ in 1..m {
        let next = pk * p;
        // r ← r - (r² + 1)/(2r)
        let f = add_mod(mul_mod(r, r, next), 1, next);
        let d = inv_mod(mul_mod(2, r, next), next).expect("2r is a unit");
        r = sub_mod(r, mul_mod(f, d, next), next);
        pk = next;
    }
    let q = pk;
    let omega = r.min(q - r);
    Ok(PseudoImaginary { p, m, omega: Residue::from_u64(omega, q) })
}

/// `e^(ji)` from the circle generator.
pub fn exp_ji(j: i128, ctx: &PrecisionContext) -> Result<GaussianResidue> {
    let g = circle_generator(ctx)?;
    let order = circle_order(ctx.p, ctx.m);
    Ok(g.pow(j.rem_euclid(order as i128) as u64))
}

pub fn exp_i_for(p: u64, m: u32) -> Result<GaussianResidue> {
    exp_i(&PrecisionContext::new(p, m)?)
}
