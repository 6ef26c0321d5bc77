//! Dense linear algebra over `Z/p^n`.
//!
//! `Z/p^n` is a chain ring: every element is `unit · p^v`. Elimination with
//! full pivoting on minimal valuation therefore behaves like Smith form and
//! decides solvability exactly.

use crate::arith::{inv_mod, mul_mod, sub_mod};

fn val(x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    let mut y = x;
    while y % p == 0 {
        y /= p;
        v += 1;
    }
    v
}

/// Solves `A·x ≡ b (mod p^n)`. Returns the least-representative solution
/// with free variables set to zero, or `None` when inconsistent.
pub fn solve_prime_power(a: &[Vec<u64>], b: &[u64], p: u64, n: u32) -> Option<Vec<u64>> {
    let modulus = p.pow(n);
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|x| x % modulus).collect()).collect();
    let mut rhs: Vec<u64> = b.iter().map(|x| x % modulus).collect();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let mut pivots: Vec<u32> = Vec::new();

    let mut r = 0;
    while r < rows.min(cols) {
        // minimal valuation in the remaining block
        let mut best: Option<(u32, usize, usize)> = None;
        for i in r..rows {
            for j in r..cols {
                let v = val(m[i][j], p, n);
                if v < n && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break;
                    }
                }
            }
            if matches!(best, Some((0, _, _))) {
                break;
            }
        }
        let Some((v, pi, pj)) = best else { break };
        m.swap(r, pi);
        rhs.swap(r, pi);
        for row in m.iter_mut() {
            row.swap(r, pj);
        }
        col_perm.swap(r, pj);

        let pk = p.pow(v);
        let unit = m[r][r] / pk;
        let unit_inv = inv_mod(unit % modulus, modulus).expect("unit");
        for i in (r + 1)..rows {
            if m[i][r] == 0 {
                continue;
            }
            // m[i][r] is divisible by p^v
            let factor = mul_mod(m[i][r] / pk, unit_inv, modulus);
            for j in r..cols {
                let t = mul_mod(factor, m[r][j], modulus);
                m[i][j] = sub_mod(m[i][j], t, modulus);
            }
            let t = mul_mod(factor, rhs[r], modulus);
            rhs[i] = sub_mod(rhs[i], t, modulus);
        }
        pivots.push(v);
        r += 1;
    }
    let rank = r;
    if rhs[rank..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for r in (0..rank).rev() {
        let mut acc = rhs[r];
        for j in (r + 1)..cols {
            acc = sub_mod(acc, mul_mod(m[r][j], x[j], modulus), modulus);
        }
        let v = pivots[r];
        let pk = p.pow(v);
        if acc % pk != 0 {
            return None;
        }
        let reduced_mod = p.pow(n - v);
        let unit = (m[r][r] / pk) % reduced_mod;
        let inv = inv_mod(unit, reduced_mod).expect("unit");
        x[r] = mul_mod((acc / pk) % reduced_mod, inv, reduced_mod);
    }
    let mut out = vec![0u64; cols];
    for (k, &c) in col_perm.iter().enumerate() {
        out[c] = x[k];
    }
    // final check against the original system
    for (row, &bi) in a.iter().zip(b.iter()) {
        let mut s = 0u64;
        for (aij, xj) in row.iter().zip(out.iter()) {
            s = (s + mul_mod(*aij % modulus, *xj, modulus)) % modulus;
        }
        if s != bi % modulus {
            return None;
        }
    }
    Some(out)
}

/// Determinant modulo a prime by Gaussian elimination.
pub fn det_mod_prime(a: &[Vec<u64>], p: u64) -> u64 {
    let n = a.len();
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if piv != c {
            m.swap(piv, c);
            det = (p - det) % p;
        }
        det = mul_mod(det, m[c][c], p);
        let inv = inv_mod(m[c][c], p).expect("field");
        for r in (c + 1)..n {
            if m[r][c] == 0 {
                continue;
            }
            let f = mul_mod(m[r][c], inv, p);
            for j in c..n {
                let t = mul_mod(f, m[c][j], p);
                m[r][j] = sub_mod(m[r][j], t, p);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_with_non_unit_pivots() {
        // 3x ≡ 6 (mod 9): x = 2 (or 5, 8)
        let x = solve_prime_power(&[vec![3]], &[6], 3, 2).unwrap();
        assert_eq!(x, vec![2]);
        // 3x ≡ 1 (mod 9): none
        assert!(solve_prime_power(&[vec![3]], &[1], 3, 2).is_none());
    }

    #[test]
    fn solves_square_system() {
        let a = vec![vec![1, 2], vec![3, 4]];
        let b = vec![5, 6];
        let x = solve_prime_power(&a, &b, 5, 2).unwrap();
        assert_eq!((x[0] + 2 * x[1]) % 25, 5);
        assert_eq!((3 * x[0] + 4 * x[1]) % 25, 6);
    }

    #[test]
    fn determinant() {
        assert_eq!(det_mod_prime(&[vec![1, 2], vec![3, 4]], 7), 5);
        assert_eq!(det_mod_prime(&[vec![1, 2], vec![2, 4]], 7), 0);
        assert_eq!(det_mod_prime(&[vec![0, 1], vec![1, 0]], 7), 6);
    }
}
