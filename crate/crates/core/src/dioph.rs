//! Exhaustive search for `a^p + b^p = c^q` and the exponent ratio test.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DiophInstance {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub p: u32,
    pub q: u32,
}

impl DiophInstance {
    /// Exact recheck of `a^p + b^p = c^q`.
    pub fn holds(&self) -> bool {
        BigUint::from(self.a).pow(self.p) + BigUint::from(self.b).pow(self.p) == BigUint::from(self.c).pow(self.q)
    }

    /// Pairwise coprime, `p` prime, `p, q >= 41`.
    pub fn is_strict(&self) -> bool {
        self.a.gcd(&self.b) == 1
            && self.b.gcd(&self.c) == 1
            && self.a.gcd(&self.c) == 1
            && arith::is_prime(self.p as u64)
            && self.p >= STRICT_MIN_EXPONENT
            && self.q >= STRICT_MIN_EXPONENT
    }
}

pub const STRICT_MIN_EXPONENT: u32 = 41;

/// Largest `max(b_max^p, c_max^q)` bit length the search accepts.
pub const MAX_BITS: u64 = 1 << 16;
/// Largest number of `(a, b, exponent pair)` combinations.
pub const MAX_COMBINATIONS: u64 = 2_000_000_000;

/// Small primes used by the residue pre-filter.
const FILTER_PRIMES: [u64; 6] = [7, 11, 13, 17, 19, 23];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub a_max: u64,
    pub b_max: u64,
    pub c_max: u64,
    pub ps: Vec<u32>,
    pub qs: Vec<u32>,
    pub strict: bool,
    /// Residue pre-filter; never changes the result set.
    pub prefilter: bool,
}

impl SearchSpec {
    pub fn new(a_max: u64, b_max: u64, c_max: u64, ps: Vec<u32>, qs: Vec<u32>) -> Self {
        SearchSpec { a_max, b_max, c_max, ps, qs, strict: false, prefilter: true }
    }

    fn validate(&self) -> Result<()> {
        if self.a_max == 0 || self.b_max == 0 || self.c_max == 0 {
            return Err(Error::InvalidArgument("search ranges must be positive".into()));
        }
        if self.ps.is_empty() || self.qs.is_empty() {
            return Err(Error::InvalidArgument("exponent sets must be nonempty".into()));
        }
        if self.ps.iter().chain(&self.qs).any(|&e| e == 0) {
            return Err(Error::InvalidArgument("exponents must be positive".into()));
        }
        let combos = (self.a_max as u128) * (self.b_max as u128) * (self.ps.len() * self.qs.len()) as u128;
        if combos > MAX_COMBINATIONS as u128 {
            return Err(Error::Overflow(format!("{combos} combinations exceed the budget {MAX_COMBINATIONS}")));
        }
        let bits = |base: u64, e: u32| (64 - base.leading_zeros()) as u64 * e as u64;
        let widest = self
            .ps
            .iter()
            .map(|&p| bits(self.b_max.max(self.a_max), p) + 1)
            .chain(self.qs.iter().map(|&q| bits(self.c_max, q)))
            .max()
            .unwrap_or(0);
        if widest > MAX_BITS {
            return Err(Error::Overflow(format!("operands of {widest} bits exceed {MAX_BITS}")));
        }
        Ok(())
    }

    /// Exponent pairs in lexicographic order, strict filtering applied.
    pub fn exponent_pairs(&self) -> Vec<(u32, u32)> {
        let mut ps = self.ps.clone();
        let mut qs = self.qs.clone();
        ps.sort_unstable();
        ps.dedup();
        qs.sort_unstable();
        qs.dedup();
        if self.strict {
            ps.retain(|&p| p >= STRICT_MIN_EXPONENT && arith::is_prime(p as u64));
            qs.retain(|&q| q >= STRICT_MIN_EXPONENT);
        }
        ps.iter().flat_map(|&p| qs.iter().map(move |&q| (p, q))).collect()
    }
}

/// Every `(a, b, c, p, q)` with `a < b` in range and `a^p + b^p = c^q`,
/// in lexicographic order.
pub fn dioph_search(spec: &SearchSpec) -> Result<Vec<DiophInstance>> {
    dioph_search_with_progress(spec, |_, _| {})
}

/// As [`dioph_search`], reporting `(done, total)` rows of `a` per exponent pair.
pub fn dioph_search_with_progress(spec: &SearchSpec, progress: impl Fn(u64, u64) + Sync) -> Result<Vec<DiophInstance>> {
    spec.validate()?;
    let pairs = spec.exponent_pairs();
    let total = pairs.len() as u64 * spec.a_max;
    let done = AtomicU64::new(0);
    let mut out = Vec::new();
    for (p, q) in pairs {
        let powers: Vec<BigUint> = (0..=spec.a_max.max(spec.b_max)).map(|x| BigUint::from(x).pow(p)).collect();
        let targets: HashMap<BigUint, u64> = (1..=spec.c_max).map(|c| (BigUint::from(c).pow(q), c)).collect();
        let top = BigUint::from(spec.c_max).pow(q);
        let residues: Vec<(u64, Vec<bool>)> = FILTER_PRIMES
            .iter()
            .map(|&r| {
                let mut ok = vec![false; r as usize];
                for c in 1..=spec.c_max.min(r * 4) {
                    ok[arith::pow_mod(c, q as u64, r) as usize] = true;
                }
                (r, ok)
            })
            .collect();
        let pow_res: Vec<Vec<u64>> = FILTER_PRIMES
            .iter()
            .map(|&r| (0..=spec.a_max.max(spec.b_max)).map(|x| arith::pow_mod(x % r, p as u64, r)).collect())
            .collect();
        let found: Vec<Vec<DiophInstance>> = (1..=spec.a_max)
            .into_par_iter()
            .map(|a| {
                let mut hits = Vec::new();
                for b in a + 1..=spec.b_max {
                    if spec.prefilter
                        && residues.iter().zip(&pow_res).any(|((r, ok), pr)| {
                            !ok[((pr[a as usize] + pr[b as usize]) % r) as usize]
                        })
                    {
                        continue;
                    }
                    let sum = &powers[a as usize] + &powers[b as usize];
                    if sum > top {
                        break;
                    }
                    if let Some(&c) = targets.get(&sum) {
                        let inst = DiophInstance { a, b, c, p, q };
                        if !spec.strict || inst.is_strict() {
                            hits.push(inst);
                        }
                    }
                }
                let d = done.fetch_add(1, Ordering::Relaxed) + 1;
                progress(d, total);
                hits
            })
            .collect();
        out.extend(found.into_iter().flatten());
    }
    out.sort();
    Ok(out)
}

/// `q/p <= 6·⌊(q-2)/39⌋`, exactly.
pub fn ratio_condition(p: u64, q: u64) -> bool {
    if p == 0 {
        return false;
    }
    let floor = (q as i128 - 2).div_euclid(39);
    (q as i128) <= 6 * (p as i128) * floor
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain triple loop without pre-filter, pruning or parallelism.
    fn brute(a_max: u64, b_max: u64, c_max: u64, ps: &[u32], qs: &[u32]) -> Vec<DiophInstance> {
        let mut out = Vec::new();
        for &p in ps {
            for &q in qs {
                for a in 1..=a_max {
                    for b in a + 1..=b_max {
                        for c in 1..=c_max {
                            let inst = DiophInstance { a, b, c, p, q };
                            if inst.holds() {
                                out.push(inst);
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn relaxed_example() {
        let r = dioph_search(&SearchSpec::new(10, 10, 10, vec![3], vec![2])).unwrap();
        assert_eq!(r, vec![DiophInstance { a: 1, b: 2, c: 3, p: 3, q: 2 }]);
    }

    #[test]
    fn matches_brute_force() {
        let ps = [1, 2, 3];
        let qs = [1, 2, 3];
        let fast = dioph_search(&SearchSpec::new(20, 20, 40, ps.to_vec(), qs.to_vec())).unwrap();
        assert_eq!(fast, brute(20, 20, 40, &ps, &qs));
        assert!(fast.contains(&DiophInstance { a: 3, b: 4, c: 5, p: 2, q: 2 }));
        assert!(fast.iter().all(DiophInstance::holds));
    }

    #[test]
    fn prefilter_is_sound() {
        for (ps, qs) in [(vec![2, 3], vec![2, 3]), (vec![1, 4], vec![2, 5])] {
            let mut spec = SearchSpec::new(40, 40, 60, ps, qs);
            let with = dioph_search(&spec).unwrap();
            spec.prefilter = false;
            assert_eq!(with, dioph_search(&spec).unwrap());
        }
    }

    #[test]
    fn strict_window_is_empty() {
        let mut spec = SearchSpec::new(30, 30, 30, vec![41, 43], (41..=50).collect());
        spec.strict = true;
        assert!(dioph_search(&spec).unwrap().is_empty());
    }

    #[test]
    fn strict_filters_non_coprime() {
        // 2^3 + 2^3 excluded by a < b; 3^3 + 6^3 = 243 = 3^5 is not coprime
        let relaxed = dioph_search(&SearchSpec::new(10, 10, 10, vec![3], vec![5])).unwrap();
        assert_eq!(relaxed, vec![DiophInstance { a: 3, b: 6, c: 3, p: 3, q: 5 }]);
        let mut spec = SearchSpec::new(10, 10, 10, vec![3], vec![5]);
        spec.strict = true;
        assert!(dioph_search(&spec).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(dioph_search(&SearchSpec::new(0, 10, 10, vec![3], vec![2])).is_err());
        assert!(dioph_search(&SearchSpec::new(5, 5, 5, vec![], vec![2])).is_err());
        assert!(dioph_search(&SearchSpec::new(5, 5, 1 << 40, vec![3], vec![100_000])).is_err());
    }

    #[test]
    fn ratio_examples() {
        assert!(ratio_condition(41, 41));
        assert!(!ratio_condition(41, 40));
        assert!(ratio_condition(43, 300));
        assert!(!ratio_condition(41, 1));
        // exact rational comparison against big rationals
        for p in 1..60u64 {
            for q in 1..400u64 {
                let f = ((q as f64 - 2.0) / 39.0).floor();
                assert_eq!(ratio_condition(p, q), (q as f64) / (p as f64) <= 6.0 * f, "p={p} q={q}");
            }
        }
    }
}
