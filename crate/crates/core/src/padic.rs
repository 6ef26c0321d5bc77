//! Truncated exponential `E = Σ p^i/i!`, its powers, modulated logarithms,
//! the Fermat-quotient logarithm `plm`, roots and modulated derivation.
//!
//! Every series term is carried as a [`ValuedRational`] and reduced only at
//! the end, so terms like `p^(i-1)/i` with `p | i` are exact.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{self, add_mod, mul_mod, pow_mod, reduce_i128, sub_mod};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{crt_combine, Modulus, Residue};
use crate::valued::ValuedRational;

/// A logarithm value: a residue modulo the order of the group it indexes.
pub type LogValue = Residue;

/// Prime, precision exponent and series truncation depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub p: u64,
    pub m: u32,
    pub n_terms: u64,
}

impl PrecisionContext {
    /// Context for an odd prime with the default truncation depth.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        Self::with_terms(p, m, Self::default_terms(p, m))
    }

    pub fn with_terms(p: u64, m: u32, n_terms: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("precision m must be >= 1".into()));
        }
        if arith::checked_pow(p, m).is_none() {
            return Err(Error::Overflow(format!("{p}^{}", m)));
        }
        let ctx = PrecisionContext { p, m, n_terms };
        if !ctx.truncation_sound() {
            return Err(Error::Precondition(format!("{n_terms} terms too few for {p}^{m}")));
        }
        Ok(ctx)
    }

    /// The `p = 2` context, usable only by the even-argument series.
    pub fn even(m: u32) -> Result<Self> {
        Self::with_terms(2, m, 2 * m as u64 + 6)
    }

    /// `(m+2)·⌈(p-1)/(p-2)⌉ + p`, from `i - v_p(i!) ≥ i(p-2)/(p-1)`.
    pub fn default_terms(p: u64, m: u32) -> u64 {
        if p <= 2 {
            return 2 * m as u64 + 6;
        }
        let ratio = (p - 1).div_ceil(p - 2);
        (m as u64 + 2) * ratio + p
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.m)
    }

    pub fn is_even(&self) -> bool {
        self.p == 2
    }

    /// Order of the unit group modulo `p^m`.
    pub fn group_order(&self) -> u64 {
        self.p.pow(self.m - 1) * (self.p - 1)
    }

    /// Same prime and depth rule at another precision.
    pub fn at_precision(&self, m: u32) -> Result<Self> {
        if self.is_even() {
            Self::even(m)
        } else {
            Self::new(self.p, m)
        }
    }

    /// The first omitted exponential term already vanishes modulo `p^m`.
    /// For `p = 2` the bound is for even arguments, where term `i` carries
    /// an extra `2^i`.
    pub fn truncation_sound(&self) -> bool {
        let i = self.n_terms + 1;
        let v = i - arith::factorial_valuation(i, self.p);
        let v = if self.p == 2 { v + i } else { v };
        v > self.m as u64
    }
}

/// `e` generates `(Z/p^m)^*` and `e^(1-p^m) ≡ E`.
#[derive(Debug, Clone)]
pub struct GeneratorPair {
    pub ctx: PrecisionContext,
    pub e: Residue,
    pub big_e: Residue,
    dlog_mod_p: Arc<DlogTable>,
}

impl GeneratorPair {
    pub fn dlog_table(&self) -> &DlogTable {
        &self.dlog_mod_p
    }

    /// `(1 - p^m) mod φ(p^m)`.
    pub fn compat_exponent(&self) -> u64 {
        compat_exponent(&self.ctx)
    }
}

fn compat_exponent(ctx: &PrecisionContext) -> u64 {
    let phi = ctx.group_order() as i128;
    (1i128 - ctx.modulus() as i128).rem_euclid(phi) as u64
}

/// Power table of a base modulo `n` together with its inverse map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DlogTable {
    pub base: u64,
    pub modulus: u64,
    pub powers: Vec<u64>,
    #[serde(skip)]
    index: HashMap<u64, u32>,
}

impl DlogTable {
    pub fn build(base: u64, modulus: u64) -> Result<Self> {
        let mut powers = Vec::new();
        let mut x = 1 % modulus;
        loop {
            powers.push(x);
            x = mul_mod(x, base % modulus, modulus);
            if x == 1 % modulus || powers.len() as u64 > modulus {
                break;
            }
        }
        Self::from_powers(base, modulus, powers)
    }

    /// Validates a stored table: `powers[0] = 1`, each entry is the previous
    /// one times `base`, and the cycle closes.
    pub fn from_powers(base: u64, modulus: u64, powers: Vec<u64>) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("invalid power table for base {base} mod {modulus}"));
        if modulus == 0 || powers.is_empty() || powers[0] != 1 % modulus {
            return Err(bad());
        }
        for w in powers.windows(2) {
            if w[1] != mul_mod(w[0], base % modulus, modulus) {
                return Err(bad());
            }
        }
        if mul_mod(*powers.last().unwrap(), base % modulus, modulus) != 1 % modulus {
            return Err(bad());
        }
        let mut index = HashMap::with_capacity(powers.len());
        for (j, &x) in powers.iter().enumerate() {
            if index.insert(x, j as u32).is_some() {
                return Err(bad());
            }
        }
        Ok(DlogTable { base, modulus, powers, index })
    }

    pub fn order(&self) -> u64 {
        self.powers.len() as u64
    }

    pub fn log(&self, x: u64) -> Option<u64> {
        self.index.get(&(x % self.modulus)).map(|&j| j as u64)
    }
}

/// `E = Σ_{i≤n} p^i/i!` modulo `p^m`.
pub fn compute_e(ctx: &PrecisionContext) -> Result<Residue> {
    if ctx.is_even() {
        return Err(Error::Precondition("E is not defined for p = 2; use the even-argument series".into()));
    }
    exp_series(1, ctx)
}

/// `Σ_{i≤n} (p^i/i!) x^i` modulo `p^m` (the series for `E^x`).
fn exp_series(x: i128, ctx: &PrecisionContext) -> Result<Residue> {
    let q = ctx.modulus();
    let xr = reduce_i128(x, q);
    let mut acc = 0u64;
    let mut xi = 1 % q;
    for i in 0..=ctx.n_terms {
        let t = ValuedRational::p_power_over_factorial(ctx.p, i, ctx.m).reduce(ctx.m)?;
        acc = add_mod(acc, mul_mod(t.rep(), xi, q), q);
        xi = mul_mod(xi, xr, q);
    }
    Ok(Residue::from_u64(acc, q))
}

/// `E^x` modulo `p^m`, evaluated by its series. For `p = 2` only even `x`
/// is admitted.
pub fn pow_e(x: i128, ctx: &PrecisionContext) -> Result<Residue> {
    if ctx.is_even() && x % 2 != 0 {
        return Err(Error::Precondition("p = 2 series needs an even argument".into()));
    }
    exp_series(x, ctx)
}

/// Principal logarithm `lm_E(u)` modulo `p^(m-1)` for `u ≡ 1 (mod p)`:
/// `Σ (-1)^(i+1) p^(i-1)/i x^i` with `u = p x + 1`.
pub fn lm_principal(u: Residue, ctx: &PrecisionContext) -> Result<LogValue> {
    let q = ctx.modulus();
    if u.modulus() != q {
        return Err(Error::InvalidArgument(format!("expected residue mod {q}, got mod {}", u.modulus())));
    }
    if u.rep() % ctx.p != 1 % ctx.p {
        return Err(Error::Precondition(format!("{} is not ≡ 1 (mod {})", u.rep(), ctx.p)));
    }
    if ctx.is_even() && u.rep() % 4 != 1 % q.min(4) {
        return Err(Error::Precondition("p = 2 logarithm needs u ≡ 1 (mod 4)".into()));
    }
    let out_exp = ctx.m - 1;
    let out_mod = ctx.p.pow(out_exp);
    let prec = out_exp.max(1);
    let x = ((u.rep() + q - 1) % q) / ctx.p;
    let xv = ValuedRational::from_int(x as i128, ctx.p, prec);
    let mut acc = 0u64;
    for i in 1..=ctx.n_terms {
        let term = ValuedRational::log_coefficient(ctx.p, i, prec) * xv.pow(i as u32);
        let r = term.reduce(out_exp)?.rep();
        acc = if i % 2 == 1 { add_mod(acc, r, out_mod) } else { sub_mod(acc, r, out_mod) };
    }
    Ok(Residue::from_u64(acc, out_mod))
}

/// Smallest `e ≥ 2` generating `(Z/p^m)^*` with `e^(1-p^m) ≡ E`.
pub fn find_generator(ctx: &PrecisionContext) -> Result<GeneratorPair> {
    if ctx.is_even() {
        return Err(Error::Precondition("(Z/2^m)^* is not cyclic for m > 2".into()));
    }
    let big_e = compute_e(ctx)?;
    let q = ctx.modulus();
    let p = ctx.p;
    // qualifying e are exactly ζ·E with ζ the Teichmüller lift of a
    // primitive root mod p
    let lift = q / p;
    let best = (1..p)
        .filter(|&g| arith::multiplicative_order(g, p, p - 1) == p - 1)
        .map(|g| mul_mod(pow_mod(g, lift, q), big_e.rep(), q))
        .filter(|&e| e >= 2)
        .min()
        .ok_or_else(|| Error::Precondition(format!("no compatible generator mod {q}")))?;
    let table = DlogTable::build(best % p, p)?;
    Ok(GeneratorPair { ctx: *ctx, e: Residue::from_u64(best, q), big_e, dlog_mod_p: Arc::new(table) })
}

/// Builds the pair for a given generator; fails if `e` does not generate or
/// is not compatible with `E`.
pub fn generator_pair(ctx: &PrecisionContext, e: u64) -> Result<GeneratorPair> {
    let big_e = compute_e(ctx)?;
    let q = ctx.modulus();
    if e % ctx.p == 0 || arith::multiplicative_order(e % q, q, ctx.group_order()) != ctx.group_order() {
        return Err(Error::NotGenerator { value: e, modulus: q });
    }
    if pow_mod(e, compat_exponent(ctx), q) != big_e.rep() {
        return Err(Error::Precondition(format!("e^(1-p^m) != E for e = {e}")));
    }
    Ok(GeneratorPair {
        ctx: *ctx,
        e: Residue::from_u64(e, q),
        big_e,
        dlog_mod_p: Arc::new(DlogTable::build(e % ctx.p, ctx.p)?),
    })
}

impl GeneratorPair {
    /// Swaps in a mod-p table loaded elsewhere (e.g. from the on-disk cache).
    pub fn with_table(mut self, table: DlogTable) -> Result<Self> {
        if table.base != self.e.rep() % self.ctx.p || table.modulus != self.ctx.p {
            return Err(Error::InvalidArgument("table does not match generator".into()));
        }
        self.dlog_mod_p = Arc::new(table);
        Ok(self)
    }
}

/// Full logarithm `lm_e(x)` modulo `p^(m-1)(p-1)`: the mod-p part from the
/// power table, the principal part from [`lm_principal`], recombined by CRT.
pub fn lm_full(x: i128, gp: &GeneratorPair) -> Result<LogValue> {
    let ctx = &gp.ctx;
    let q = ctx.modulus();
    let r = reduce_i128(x, q);
    if r % ctx.p == 0 {
        return Err(Error::NotUnit { value: x, modulus: ctx.p });
    }
    let low = gp
        .dlog_mod_p
        .log(r % ctx.p)
        .ok_or_else(|| Error::Precondition("mod-p table incomplete".into()))?;
    let w = Residue::from_u64(pow_mod(r, gp.compat_exponent(), q), q);
    let high = lm_principal(w, ctx)?;
    crt_combine(&[(low as i128, ctx.p - 1), (high.rep() as i128, high.modulus())])
}

/// One prime-power component of a composite logarithm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogComponent {
    pub p: u64,
    pub k: u32,
    pub e: u64,
    pub value: LogValue,
}

/// Bracket product of per-component logarithms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeLog {
    pub components: Vec<LogComponent>,
}

/// Reusable generators for every prime-power component of a modulus.
#[derive(Debug, Clone)]
pub struct CompositeLogger {
    modulus: Modulus,
    pairs: Vec<GeneratorPair>,
}

impl CompositeLogger {
    pub fn new(q: &Modulus) -> Result<Self> {
        let mut pairs = Vec::new();
        for &(p, k) in q.factors() {
            if p == 2 {
                return Err(Error::Precondition("even component in composite logarithm".into()));
            }
            pairs.push(find_generator(&PrecisionContext::new(p, k)?)?);
        }
        Ok(CompositeLogger { modulus: q.clone(), pairs })
    }

    pub fn log(&self, x: i128) -> Result<CompositeLog> {
        let n = self.modulus.value();
        if arith::gcd(reduce_i128(x, n), n) != 1 {
            return Err(Error::NotUnit { value: x, modulus: n });
        }
        let components = self
            .pairs
            .iter()
            .map(|gp| {
                Ok(LogComponent {
                    p: gp.ctx.p,
                    k: gp.ctx.m,
                    e: gp.e.rep(),
                    value: lm_full(x, gp)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CompositeLog { components })
    }

    pub fn pairs(&self) -> &[GeneratorPair] {
        &self.pairs
    }
}

/// Component-wise logarithm over a composite odd modulus.
pub fn lm_composite(x: i128, q: &Modulus) -> Result<CompositeLog> {
    CompositeLogger::new(q)?.log(x)
}

/// `plm(x) = (x^(p^m(1-p^m)) - 1) / p^m` modulo `p^m`, numerator taken
/// modulo `p^(2m)`.
pub fn plm(x: i128, ctx: &PrecisionContext) -> Result<Residue> {
    let (p, m) = (ctx.p, ctx.m);
    let big = arith::checked_pow(p, 2 * m).ok_or_else(|| Error::Overflow(format!("{p}^{}", 2 * m)))?;
    let r = reduce_i128(x, big);
    if r % p == 0 {
        return Err(Error::NotUnit { value: x, modulus: p });
    }
    let q = ctx.modulus();
    let phi2 = p.pow(2 * m - 1) * (p - 1);
    let exp = ((q as i128) * (1 - q as i128)).rem_euclid(phi2 as i128) as u64;
    let num = sub_mod(pow_mod(r, exp, big), 1, big);
    if num % q != 0 {
        return Err(Error::Precondition("plm numerator not divisible by p^m".into()));
    }
    Ok(Residue::from_u64(num / q, q))
}

/// Series form `Σ (-1)^(i+1) y^i / i` with `y = x^(1-p^m) - 1`, modulo `p^m`.
pub fn plm_series(x: i128, ctx: &PrecisionContext) -> Result<Residue> {
    let (p, m) = (ctx.p, ctx.m);
    let q = ctx.modulus();
    let r = reduce_i128(x, q);
    if r % p == 0 {
        return Err(Error::NotUnit { value: x, modulus: p });
    }
    let y = sub_mod(pow_mod(r, compat_exponent(ctx), q), 1, q);
    let yv = ValuedRational::from_int(y as i128, p, m);
    let mut acc = 0u64;
    for i in 1..=ctx.n_terms {
        let t = (yv.pow(i as u32) * ValuedRational::ratio(1, i as i128, p, m)?).reduce(m)?.rep();
        acc = if i % 2 == 1 { add_mod(acc, t, q) } else { sub_mod(acc, t, q) };
    }
    Ok(Residue::from_u64(acc, q))
}

/// Result of the halving square root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqrtValue {
    pub value: Residue,
    /// False when `lm(a) mod (p-1)` was odd, i.e. `a` is a non-residue and
    /// `value` is the convention value `e^((L+p-1)/2)`.
    pub is_residue: bool,
}

/// `a^(1/2) := e^(L/2)` with `L` the least nonnegative `lm(a) mod (p-1)`.
pub fn sqrt_e(a: i128, gp: &GeneratorPair) -> Result<SqrtValue> {
    let p = gp.ctx.p;
    let r = reduce_i128(a, p);
    if r == 0 {
        return Err(Error::NotUnit { value: a, modulus: p });
    }
    let l = gp.dlog_mod_p.log(r).expect("complete table");
    let e = gp.e.rep() % p;
    let (half, is_residue) = if l % 2 == 0 { (l / 2, true) } else { ((l + p - 1) / 2, false) };
    Ok(SqrtValue { value: Residue::from_u64(pow_mod(e, half, p), p), is_residue })
}

/// The unique `y ≡ 1 (mod p)` modulo `p^m` with `y^p ≡ w (mod p^(m+1))`,
/// for `w ≡ 1 (mod p^2)`.
pub fn pth_root_unit(w: Residue, ctx: &PrecisionContext) -> Result<Residue> {
    let (p, m) = (ctx.p, ctx.m);
    let upper = ctx.at_precision(m + 1)?;
    if w.modulus() != upper.modulus() {
        return Err(Error::InvalidArgument(format!("expected residue mod {}", upper.modulus())));
    }
    if w.rep() % (p * p) != 1 % (p * p) {
        return Err(Error::Precondition(format!("{} is not ≡ 1 (mod {})", w.rep(), p * p)));
    }
    let l = lm_principal(w, &upper)?;
    debug_assert_eq!(l.rep() % p, 0);
    pow_e((l.rep() / p) as i128, ctx)
}

/// Difference quotient `(f(x + p^m) - f(x)) / p^m` reduced modulo `p^m`,
/// with `f` taken modulo `p^(2m)`.
pub fn modulated_derivative(coeffs: &[i128], ctx: &PrecisionContext) -> Result<Poly> {
    let (p, m) = (ctx.p, ctx.m);
    let q = ctx.modulus();
    let big = arith::checked_pow(p, 2 * m).ok_or_else(|| Error::Overflow(format!("{p}^{}", 2 * m)))?;
    let f = Poly::univariate(coeffs, big);
    let shifted = f.compose(&[Poly::univariate(&[q as i128, 1], big)]);
    let diff = shifted.sub(&f);
    let mut out = Poly::zero(1, q);
    for (e, c) in diff.terms() {
        if c % q != 0 {
            return Err(Error::Precondition("difference not divisible by p^m".into()));
        }
        out.add_term(e.clone(), (c / q) % q);
    }
    Ok(out)
}

/// `Σ_{i≤n} (p^i/i!) z^i f^(i)(x)` modulo `p^m`, with `f^(i)` the ordinary
/// derivative of the integer polynomial `f`.
pub fn modulated_taylor(coeffs: &[i128], x: i128, z: i128, ctx: &PrecisionContext) -> Result<Residue> {
    if ctx.is_even() && z % 2 != 0 {
        return Err(Error::Precondition("p = 2 Taylor form needs an even step".into()));
    }
    let q = ctx.modulus();
    let weights = taylor_weights(z, ctx, coeffs.len())?;
    Ok(Residue::from_u64(taylor_with_weights(coeffs, reduce_i128(x, q), &weights, q), q))
}

/// `(p^i/i!) z^i mod p^m` for `i < len`.
pub fn taylor_weights(z: i128, ctx: &PrecisionContext, len: usize) -> Result<Vec<u64>> {
    let q = ctx.modulus();
    let zr = reduce_i128(z, q);
    let terms = (ctx.n_terms as usize + 1).min(len.max(1));
    let mut out = Vec::with_capacity(terms);
    let mut zi = 1 % q;
    for i in 0..terms {
        let c = ValuedRational::p_power_over_factorial(ctx.p, i as u64, ctx.m).reduce(ctx.m)?;
        out.push(mul_mod(c.rep(), zi, q));
        zi = mul_mod(zi, zr, q);
    }
    Ok(out)
}

/// Taylor sum with precomputed weights; `x` already reduced.
pub fn taylor_with_weights(coeffs: &[i128], x: u64, weights: &[u64], q: u64) -> u64 {
    let mut acc = 0u64;
    for (i, &w) in weights.iter().enumerate() {
        if w == 0 {
            continue;
        }
        // f^(i)(x) = Σ_k c_k k!/(k-i)! x^(k-i)
        let mut d = 0u64;
        let mut xp = 1 % q;
        for k in i..coeffs.len() {
            let falling = falling_factorial(k as u64, i as u64) % q as u128;
            let c = reduce_i128(coeffs[k], q);
            d = add_mod(d, mul_mod(mul_mod(c, falling as u64, q), xp, q), q);
            xp = mul_mod(xp, x, q);
        }
        acc = add_mod(acc, mul_mod(w, d, q), q);
    }
    acc
}

fn falling_factorial(k: u64, i: u64) -> u128 {
    ((k - i + 1)..=k).fold(1u128, |a, j| a * j as u128)
}

/// `d_m` with `p^(d_m) ∥ p^m/m!`.
pub fn d_valuation(p: u64, m: u64) -> i64 {
    m as i64 - arith::factorial_valuation(m, p) as i64
}

/// Even-argument exponential series for `p = 2`: `Σ 2^i x^i / i!`.
pub fn even_exp_series(x: i128, m: u32) -> Result<Residue> {
    pow_e(x, &PrecisionContext::even(m)?)
}

/// Even-argument logarithm series for `p = 2`, `u ≡ 1 (mod 4)`.
pub fn even_log_series(u: i128, m: u32) -> Result<LogValue> {
    let ctx = PrecisionContext::even(m)?;
    lm_principal(Residue::new(u, ctx.modulus()), &ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, m: u32) -> PrecisionContext {
        PrecisionContext::new(p, m).unwrap()
    }

    /// Term-by-term oracle for E with explicit rationals: numerators and
    /// denominators as i128, reduced with the valuation stripped by hand.
    fn e_oracle(p: u64, m: u32) -> u64 {
        let q = p.pow(m) as i128;
        let mut acc = 0i128;
        let mut num: i128 = 1;
        let mut den: i128 = 1;
        for i in 0..30i128 {
            if i > 0 {
                num *= p as i128;
                den *= i;
            }
            let g = num_integer::gcd(num, den);
            let (a, b) = (num / g, den / g);
            // b is coprime to p here
            let inv = arith::inv_mod((b % q) as u64, q as u64).unwrap() as i128;
            acc = (acc + (a % q) * inv) % q;
        }
        acc as u64
    }

    #[test]
    fn e_anchor_values() {
        assert_eq!(e_oracle(3, 2), 4);
        assert_eq!(e_oracle(3, 3), 13);
        assert_eq!(compute_e(&ctx(3, 2)).unwrap().rep(), 4);
        assert_eq!(compute_e(&ctx(3, 3)).unwrap().rep(), 13);
        assert_eq!(compute_e(&ctx(5, 1)).unwrap().rep(), 1);
        for (p, m) in [(5, 3), (7, 2), (11, 2)] {
            assert_eq!(compute_e(&ctx(p, m)).unwrap().rep(), e_oracle(p, m));
        }
    }

    #[test]
    fn e_properties() {
        for (p, m) in [(3u64, 4u32), (5, 3), (7, 3), (11, 2)] {
            let c = ctx(p, m);
            let e = compute_e(&c).unwrap();
            assert_eq!(e.rep() % (p * p), 1 + p);
            assert_eq!(arith::multiplicative_order(e.rep(), c.modulus(), c.group_order()), p.pow(m - 1));
        }
        assert!(compute_e(&PrecisionContext::even(3).unwrap()).is_err());
    }

    #[test]
    fn generator_examples() {
        assert_eq!(find_generator(&ctx(3, 2)).unwrap().e.rep(), 5);
        assert_eq!(find_generator(&ctx(3, 1)).unwrap().e.rep(), 2);
        let gp = find_generator(&ctx(5, 2)).unwrap();
        assert_eq!(pow_mod(gp.e.rep(), gp.compat_exponent(), 25), gp.big_e.rep());
        // exhaustive scan oracle: the first qualifying e
        for (p, m) in [(3, 1), (3, 2), (3, 3), (3, 5), (5, 2), (5, 3), (7, 2), (11, 2), (13, 1)] {
            let c = ctx(p, m);
            let q = c.modulus();
            let phi = c.group_order();
            let big_e = compute_e(&c).unwrap().rep();
            let scan = (2..q)
                .find(|&e| {
                    e % p != 0
                        && arith::multiplicative_order(e, q, phi) == phi
                        && pow_mod(e, compat_exponent(&c), q) == big_e
                })
                .unwrap();
            assert_eq!(find_generator(&c).unwrap().e.rep(), scan, "p={p} m={m}");
        }
        let c = ctx(3, 39);
        let gp = find_generator(&c).unwrap();
        let q = c.modulus();
        assert_eq!(arith::multiplicative_order(gp.e.rep(), q, c.group_order()), c.group_order());
        assert_eq!(pow_mod(gp.e.rep(), gp.compat_exponent(), q), gp.big_e.rep());
    }

    #[test]
    fn pow_e_matches_square_and_multiply() {
        let c = ctx(3, 3);
        assert_eq!(pow_e(0, &c).unwrap().rep(), 1);
        assert_eq!(pow_e(7, &c).unwrap().rep(), 4);
        assert_eq!(pow_mod(13, 7, 27), 4);
        for x in 0..9 {
            assert_eq!(pow_e(x, &c).unwrap().rep(), pow_mod(13, x as u64, 27));
        }
    }

    #[test]
    fn lm_principal_examples() {
        let c = ctx(3, 3);
        assert_eq!(lm_principal(Residue::new(1, 27), &c).unwrap().rep(), 0);
        assert_eq!(lm_principal(Residue::new(4, 27), &c).unwrap().rep(), 7);
        // power-table oracle
        let table: Vec<u64> = (0..9).map(|y| pow_mod(13, y, 27)).collect();
        assert_eq!(table.iter().position(|&v| v == 4), Some(7));
        assert!(lm_principal(Residue::new(2, 27), &c).is_err());
    }

    #[test]
    fn lm_full_examples() {
        let gp = find_generator(&ctx(3, 2)).unwrap();
        assert_eq!(lm_full(-1, &gp).unwrap(), Residue::new(3, 6));
        assert_eq!(pow_mod(5, 3, 9), 8);
        assert_eq!(lm_full(1, &gp).unwrap().rep(), 0);
        assert_eq!(lm_full(7, &gp).unwrap().rep(), 2);
        assert!(matches!(lm_full(3, &gp), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn composite_examples() {
        let q = Modulus::from_factors(vec![(3, 2), (5, 2)]).unwrap();
        let l = lm_composite(-1, &q).unwrap();
        assert_eq!(l.components[0].value, Residue::new(3, 6));
        assert_eq!(l.components[1].value, Residue::new(10, 20));
        let one = lm_composite(1, &q).unwrap();
        assert!(one.components.iter().all(|c| c.value.rep() == 0));
        // reconstruction
        for x in (1..225i128).filter(|x| x % 3 != 0 && x % 5 != 0) {
            let l = lm_composite(x, &q).unwrap();
            let parts: Vec<(i128, u64)> = l
                .components
                .iter()
                .map(|c| {
                    let n = c.p.pow(c.k);
                    (pow_mod(c.e, c.value.rep(), n) as i128, n)
                })
                .collect();
            assert_eq!(crt_combine(&parts).unwrap().rep() as i128, x);
        }
        assert!(lm_composite(6, &q).is_err());
        assert!(lm_composite(1, &Modulus::from_factors(vec![(2, 3), (3, 1)]).unwrap()).is_err());
    }

    #[test]
    fn plm_examples() {
        assert_eq!(plm(1, &ctx(3, 2)).unwrap().rep(), 0);
        assert_eq!(plm(2, &ctx(3, 1)).unwrap().rep(), 0);
        assert!(plm(3, &ctx(3, 2)).is_err());
        for (p, m) in [(3u64, 2u32), (3, 3), (5, 2), (7, 2)] {
            let c = ctx(p, m);
            for x in (1..c.modulus() as i128).filter(|x| x % p as i128 != 0) {
                assert_eq!(plm(x, &c).unwrap(), plm_series(x, &c).unwrap(), "p={p} m={m} x={x}");
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let gp = find_generator(&ctx(7, 1)).unwrap();
        assert_eq!(gp.e.rep(), 3);
        assert_eq!(sqrt_e(1, &gp).unwrap().value.rep(), 1);
        let s = sqrt_e(2, &gp).unwrap();
        assert_eq!(s.value.rep(), 3);
        assert!(s.is_residue);
        assert!(!sqrt_e(3, &gp).unwrap().is_residue);
        assert!(sqrt_e(7, &gp).is_err());
    }

    #[test]
    fn pth_roots() {
        let c = ctx(3, 2);
        assert_eq!(pth_root_unit(Residue::new(1, 27), &c).unwrap().rep(), 1);
        assert_eq!(pth_root_unit(Residue::new(10, 27), &c).unwrap().rep(), 4);
        assert!(pth_root_unit(Residue::new(4, 27), &c).is_err());
        // exhaustive cube scan: each valid w has exactly one root ≡ 1 mod 3
        for w in (1..27u64).filter(|w| w % 9 == 1) {
            let roots: Vec<u64> = (0..9).filter(|y| y % 3 == 1 && pow_mod(*y, 3, 27) == w).collect();
            assert_eq!(roots.len(), 1);
            assert_eq!(pth_root_unit(Residue::new(w as i128, 27), &c).unwrap().rep(), roots[0]);
        }
    }

    #[test]
    fn modulated_derivative_examples() {
        let c = ctx(3, 2);
        let d = modulated_derivative(&[0, 0, 1], &c).unwrap();
        assert_eq!(d, Poly::univariate(&[0, 2], 9));
        assert!(modulated_derivative(&[5], &c).unwrap().is_zero());
        let f = [3i128, -4, 7, 1, 2];
        let d = modulated_derivative(&f, &ctx(3, 3)).unwrap();
        assert_eq!(d, Poly::univariate(&f, 27).derivative(0));
    }

    #[test]
    fn truncation_is_stable() {
        for (p, m) in [(3u64, 4u32), (5, 3), (7, 2)] {
            let base = ctx(p, m);
            let more = PrecisionContext::with_terms(p, m, base.n_terms + 5).unwrap();
            assert_eq!(compute_e(&base).unwrap(), compute_e(&more).unwrap());
            for x in 0..20 {
                assert_eq!(pow_e(x, &base).unwrap(), pow_e(x, &more).unwrap());
            }
            for u in (1..base.modulus()).filter(|u| u % p == 1) {
                let u = Residue::from_u64(u, base.modulus());
                assert_eq!(lm_principal(u, &base).unwrap(), lm_principal(u, &more).unwrap());
            }
        }
    }

    #[test]
    fn even_variants() {
        let m = 6;
        let q = 64;
        for x in (0..64i128).step_by(2) {
            for y in (0..64i128).step_by(2) {
                let lhs = even_exp_series(x + y, m).unwrap();
                let rhs = even_exp_series(x, m).unwrap() * even_exp_series(y, m).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        for u in (1..q).step_by(4) {
            let l = even_log_series(u, m).unwrap();
            assert_eq!(l.rep() % 2, 0);
            assert_eq!(even_exp_series(l.rep() as i128, m).unwrap().rep() as i128, u);
        }
        assert!(even_exp_series(3, m).is_err());
    }

    #[test]
    fn log_roundtrip_exhaustive() {
        for p in [3u64, 5, 7, 11] {
            let mut m = 1;
            while p.pow(m) <= 100_000 {
                let gp = find_generator(&ctx(p, m)).unwrap();
                let q = p.pow(m);
                for x in (1..q).filter(|x| x % p != 0) {
                    let l = lm_full(x as i128, &gp).unwrap().rep();
                    assert_eq!(pow_mod(gp.e.rep(), l, q), x, "p={p} m={m} x={x}");
                }
                m += 1;
            }
        }
    }
}
