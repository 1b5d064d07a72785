//! Fraction-free elimination over the integers.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Clears denominators row by row. Each row is scaled by the lcm of its
/// denominators, which leaves the rank unchanged.
pub fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect()
}

/// Rank of an integer matrix by Bareiss elimination.
///
/// Pivots are chosen per column with the smallest bit length; columns with
/// no pivot below the current row are skipped. Every division is exact.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].bits());
        let Some(p) = pivot else { continue };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let prow = &top[r];
        let pv = &prow[c];
        for row in rest.iter_mut() {
            let f = core::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let mut v = pv * &row[j];
                if !f.is_zero() && !prow[j].is_zero() {
                    v -= &f * &prow[j];
                }
                if !v.is_zero() && !prev.is_one() {
                    v /= &prev;
                }
                row[j] = v;
            }
        }
        prev = top[r][c].clone();
        r += 1;
    }
    r
}

/// Determinant of a square integer matrix (Bareiss with row swaps).
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n), "matrix must be square");
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| a[i][k].bits());
        let Some(p) = pivot else { return BigInt::zero() };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// The Mersenne prime 2^61 - 1.
pub const MODULUS: u64 = (1 << 61) - 1;

fn reduce(v: &BigInt, p: u64) -> u64 {
    let r = v % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.try_into().expect("residue fits in u64")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Rank of the matrix reduced modulo the prime `p`. Never exceeds the rank
/// over the integers, so a full result there is a proof of full rank.
pub fn modular_rank(rows: &[Vec<BigInt>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|v| reduce(v, p)).collect()).collect();
    let n = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(piv) = (r..n).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c], p);
        for v in a[r][c..].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let (top, rest) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in rest.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                if prow[j] != 0 {
                    row[j] = (row[j] + p - mul_mod(f, prow[j], p)) % p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Exact rank: a full-rank answer modulo [`MODULUS`] is accepted as is,
/// anything else is settled by Bareiss elimination.
pub fn exact_rank(rows: Vec<Vec<BigInt>>) -> usize {
    let full = rows.len().min(rows.first().map_or(0, |r| r.len()));
    if modular_rank(&rows, MODULUS) == full {
        return full;
    }
    bareiss_rank(rows)
}

/// Rank over the rationals (convenience wrapper).
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    exact_rank(integer_rows(rows))
}

/// Largest absolute entry's bit length; useful for reporting growth.
pub fn max_bits(rows: &[Vec<BigInt>]) -> u64 {
    rows.iter().flatten().map(|v| v.abs().bits()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use alloc::vec;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    /// Rank by plain rational Gaussian elimination.
    fn naive_rank(rows: &[Vec<Rational>]) -> usize {
        let mut a = rows.to_vec();
        let (n, cols) = (a.len(), a.first().map_or(0, |r| r.len()));
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            for i in 0..n {
                if i != r && !a[i][c].is_zero() {
                    let f = &a[i][c] / &a[r][c];
                    let pivot_row = a[r].clone();
                    for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                        *x -= &f * p;
                    }
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn small_ranks() {
        assert_eq!(bareiss_rank(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(bareiss_rank(m(&[&[0, 1], &[1, 0], &[1, 1]])), 2);
        assert_eq!(bareiss_rank(m(&[&[0, 0, 3], &[0, 0, 6]])), 1);
        assert_eq!(bareiss_rank(vec![]), 0);
    }

    #[test]
    fn determinants() {
        assert_eq!(bareiss_determinant(m(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(bareiss_determinant(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(bareiss_determinant(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), BigInt::from(-3));
    }

    #[test]
    fn modular_rank_can_only_drop() {
        // det = p, so the rank collapses modulo p but not over Z.
        let p = BigInt::from(MODULUS);
        let a = vec![vec![p.clone(), BigInt::zero()], vec![BigInt::zero(), BigInt::one()]];
        assert_eq!(modular_rank(&a, MODULUS), 1);
        assert_eq!(exact_rank(a), 2);
        assert_eq!(modular_rank(&m(&[&[1, 2], &[3, 4]]), 7), 2);
        assert_eq!(modular_rank(&m(&[&[1, 2], &[3, 6]]), 7), 1);
    }

    #[test]
    fn rational_rows_are_scaled() {
        let rows = vec![vec![rat(1, 2), rat(1, 3)], vec![int(3), int(2)]];
        assert_eq!(integer_rows(&rows), m(&[&[3, 2], &[3, 2]]));
        assert_eq!(rank(&rows), 1);
    }

    proptest! {
        #[test]
        fn matches_naive_rank(entries in proptest::collection::vec(-3i64..=3, 30), rows in 1usize..=6) {
            let cols = 30 / rows;
            let a: Vec<Vec<Rational>> = (0..rows)
                .map(|i| (0..cols).map(|j| int(entries[i * cols + j] * (j as i64 % 2))).collect())
                .collect();
            prop_assert_eq!(rank(&a), naive_rank(&a));
            prop_assert_eq!(bareiss_rank(integer_rows(&a)), naive_rank(&a));
        }
    }
}
