//! Exact linear algebra over the rationals: fraction-free rank, kernel
//! bases, and a modular fast path that certifies full rank.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Large primes for the modular rank certificate; squares fit in `u128`.
const PRIMES: [u64; 2] = [2_305_843_009_213_693_951, 9_223_372_036_854_775_783];

/// Clear denominators row by row; row scaling preserves rank.
fn integer_rows(rows: &[Vec<Rat>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let mut lcm = BigInt::one();
            for x in row {
                lcm = lcm.lcm(x.denom());
            }
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect()
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn exact_rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = integer_rows(rows);
    bareiss_rank(&mut m)
}

#[allow(clippy::needless_range_loop)]
fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let val = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = val;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

fn mod_reduce(x: &BigInt, p: u64) -> u64 {
    let r = (x % BigInt::from(p)).to_i128().expect("|r| < p < 2^63");
    let p = p as i128;
    (((r % p) + p) % p) as u64
}

fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}

/// Rank of the matrix reduced mod `p`; `None` if some denominator vanishes
/// mod `p`. Always a lower bound for the rational rank.
#[allow(clippy::needless_range_loop)]
fn rank_mod(rows: &[Vec<Rat>], p: u64) -> Option<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<u64>> = Vec::with_capacity(nrows);
    for row in rows {
        let mut out = Vec::with_capacity(ncols);
        for x in row {
            let den = mod_reduce(x.denom(), p);
            if den == 0 {
                return None;
            }
            let num = mod_reduce(x.numer(), p);
            let inv = mod_pow(den, p - 2, p);
            out.push(((num as u128 * inv as u128) % p as u128) as u64);
        }
        m.push(out);
    }
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = mod_pow(m[rank][col], p - 2, p);
        for r in rank + 1..nrows {
            if m[r][col] == 0 {
                continue;
            }
            let factor = (m[r][col] as u128 * inv as u128 % p as u128) as u64;
            for c in col..ncols {
                let sub = (factor as u128 * m[rank][c] as u128) % p as u128;
                let cur = m[r][c] as u128;
                m[r][c] = ((cur + p as u128 - sub) % p as u128) as u64;
            }
        }
        rank += 1;
    }
    Some(rank)
}

/// Exact rank with a fast path: a modular rank equal to `ceiling` certifies
/// the rational rank (modular rank never exceeds it and `ceiling` is a known
/// upper bound); otherwise fall back to fraction-free elimination.
pub fn rank_with_ceiling(rows: &[Vec<Rat>], ceiling: usize) -> usize {
    for &p in &PRIMES {
        if let Some(r) = rank_mod(rows, p) {
            if r >= ceiling {
                return ceiling;
            }
        }
    }
    exact_rank(rows)
}

/// Basis of the right kernel, exact, via rational Gauss-Jordan elimination.
#[allow(clippy::needless_range_loop)]
pub fn kernel_basis(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].clone();
        for c in col..ncols {
            let v = &m[r][c] / &inv;
            m[r][c] = v;
        }
        for i in 0..nrows {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for c in col..ncols {
                    let v = &m[i][c] - &f * &m[r][c];
                    m[i][c] = v;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    let mut basis = Vec::new();
    let pivot_set: std::collections::BTreeSet<usize> = pivot_cols.iter().copied().collect();
    for free in (0..ncols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// `rows · v`, exact.
pub fn mat_vec(rows: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    rows.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, _)| !a.is_zero())
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect()
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    assert!(d != 0);
    let mut r = Rat::new(BigInt::from(n), BigInt::from(d));
    if r.denom().is_negative() {
        r = -r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(exact_rank(&m(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]])), 0);
    }

    #[test]
    fn identity_has_full_rank() {
        assert_eq!(exact_rank(&m(&[&[1, 0], &[0, 1]])), 2);
    }

    #[test]
    fn dependent_rows_detected() {
        let rows = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(exact_rank(&rows), 2);
        assert_eq!(rank_with_ceiling(&rows, 3), 2);
        assert_eq!(rank_with_ceiling(&rows, 2), 2);
    }

    #[test]
    fn kernel_of_dependent_rows() {
        let rows = m(&[&[1, 0, -1], &[0, 1, -1]]);
        let k = kernel_basis(&rows);
        assert_eq!(k.len(), 1);
        for r in &rows {
            let prod: Rat = r.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(prod.is_zero());
        }
    }

    #[test]
    fn rank_with_rational_entries() {
        let singular = vec![
            vec![rat_frac(1, 2), rat_frac(1, 3)],
            vec![rat_frac(3, 2), rat(1)],
        ];
        assert_eq!(exact_rank(&singular), 1);
        let regular = vec![
            vec![rat_frac(1, 2), rat_frac(1, 3)],
            vec![rat_frac(3, 2), rat(2)],
        ];
        assert_eq!(exact_rank(&regular), 2);
    }

    #[test]
    fn kernel_plus_rank_is_dimension() {
        let rows = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[1, 1, 1, 1]]);
        let rank = exact_rank(&rows);
        let kernel = kernel_basis(&rows);
        assert_eq!(rank + kernel.len(), 4);
    }
}
