//! Word-sized modular helpers shared by every layer.
//!
//! All moduli here are below 2^63 so that sums of two reduced values never
//! overflow and products fit in `u128`.

use num_integer::Integer;

pub const MAX_MODULUS: u64 = 1 << 63;

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, n: u64) -> u64 {
    let s = a + b;
    if s >= n {
        s - n
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, n: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + n - b
    }
}

#[inline]
pub fn neg_mod(a: u64, n: u64) -> u64 {
    if a == 0 {
        0
    } else {
        n - a
    }
}

/// Least nonnegative representative of a signed integer.
#[inline]
pub fn reduce_i128(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, n);
        }
        b = mul_mod(b, b, n);
        exp >>= 1;
    }
    acc
}

/// Modular inverse through the extended Euclidean algorithm.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let g = (a as i128).extended_gcd(&(n as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(reduce_i128(g.x, n))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Trial-division factorisation, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `p^k`, or `None` when it does not fit under [`MAX_MODULUS`].
pub fn checked_pow(p: u64, k: u32) -> Option<u64> {
    let v = p.checked_pow(k)?;
    (v < MAX_MODULUS).then_some(v)
}

/// Exponent of `p` in `x` (x != 0).
pub fn valuation(mut x: u128, p: u64) -> u32 {
    debug_assert!(x != 0);
    let p = p as u128;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Legendre's formula for the exponent of `p` in `n!`.
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut q = n;
    while q > 0 {
        q /= p;
        v += q;
    }
    v
}

/// Multiplicative order of a unit `a` given the factorisation of a multiple
/// `group_order` of it.
pub fn multiplicative_order(a: u64, n: u64, group_order: u64) -> u64 {
    let mut ord = group_order;
    for (q, _) in factorize(group_order) {
        while ord % q == 0 && pow_mod(a, ord / q, n) == 1 {
            ord /= q;
        }
    }
    ord
}

/// Exact binomial coefficient; panics on overflow past `u128`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Binomial coefficient reduced modulo `m`, exact for any `n` that fits the
/// running product (used for small polynomial degrees).
pub fn binomial_mod(n: u64, k: u64, m: u64) -> u64 {
    (binomial(n, k) % m as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_power() {
        assert_eq!(inv_mod(2, 9), Some(5));
        assert_eq!(inv_mod(3, 9), None);
        assert_eq!(pow_mod(13, 7, 27), 4);
        assert_eq!(pow_mod(5, 0, 1), 0);
    }

    #[test]
    fn factorisation() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert!(is_prime(97) && !is_prime(91) && !is_prime(1));
    }

    #[test]
    fn legendre() {
        assert_eq!(factorial_valuation(10, 3), 4);
        assert_eq!(factorial_valuation(27, 3), 13);
        assert_eq!(binomial(10, 3), 120);
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(2, 9, 6), 6);
        assert_eq!(multiplicative_order(4, 5, 4), 2);
    }
}
