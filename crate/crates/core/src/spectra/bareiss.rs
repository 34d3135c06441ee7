//! Exact integer rank by fraction-free (Bareiss) elimination.
//!
//! The one-step recurrence a[r][c] <- (a[r][c] * pivot - a[r][col] * prow[c])
//! / prev keeps every intermediate entry an exact minor of the input, so the
//! division is always exact; entries are arbitrary-precision integers to
//! absorb the growth. Column pivot is the first nonzero below the current
//! row, which keeps runs deterministic.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntegerMatrix;

/// dim - rank(M - lambda I): the exact eigenvalue multiplicity of lambda.
pub(crate) fn eigen_nullity(matrix: &IntegerMatrix, lambda: i64) -> usize {
    let n = matrix.dim();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let shift = if i == j { lambda } else { 0 };
                    BigInt::from(matrix.get(i, j) - shift)
                })
                .collect()
        })
        .collect();
    n - rank(&mut a)
}

/// Rank of an integer matrix, consuming it.
pub(crate) fn rank(a: &mut [Vec<BigInt>]) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot_row = a[rank].clone();
        let pivot = &pivot_row[col];
        for r in rank + 1..rows {
            let factor = std::mem::take(&mut a[r][col]);
            for c in col + 1..cols {
                let num = &a[r][c] * pivot - &factor * &pivot_row[c];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                a[r][c] = num / &prev;
            }
        }
        prev = pivot.clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    /// Independent oracle: Gaussian elimination over exact rationals.
    fn rank_rational(m: &[Vec<i64>]) -> usize {
        let rows = m.len();
        if rows == 0 {
            return 0;
        }
        let cols = m[0].len();
        let mut a: Vec<Vec<BigRational>> = m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| BigRational::from_integer(v.into()))
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero() ) else {
                continue;
            };
            a.swap(rank, p);
            let pivot = a[rank][col].clone();
            for r in rank + 1..rows {
                let factor = a[r][col].clone() / pivot.clone();
                for c in col..cols {
                    let delta = factor.clone() * a[rank][c].clone();
                    a[r][c] -= delta;
                }
            }
            rank += 1;
        }
        rank
    }

    fn to_bigint(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        m.iter()
            .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn fixed_ranks() {
        let mut id = to_bigint(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(rank(&mut id), 2);
        let mut zero = to_bigint(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(rank(&mut zero), 0);
        // Rank 1: proportional rows.
        let mut m = to_bigint(&[vec![2, 4, -6], vec![1, 2, -3], vec![-3, -6, 9]]);
        assert_eq!(rank(&mut m), 1);
        // A zero column must be skipped, not counted.
        let mut m = to_bigint(&[vec![0, 1, 2], vec![0, 2, 4], vec![0, 0, 1]]);
        assert_eq!(rank(&mut m), 2);
    }

    #[test]
    fn matches_rational_elimination_on_random_matrices() {
        let mut state = 0x6c078965u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 33
        };
        for trial in 0..80 {
            let n = 1 + (next() % 8) as usize;
            let m: Vec<Vec<i64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| (next() % 11) as i64 - 5)
                        .collect()
                })
                .collect();
            // Half the trials get an engineered rank deficiency.
            let m = if trial % 2 == 0 && n >= 2 {
                let mut m = m;
                let src = m[0].clone();
                for (a, b) in m[n - 1].iter_mut().zip(src) {
                    *a = 2 * b;
                }
                m
            } else {
                m
            };
            let mut big = to_bigint(&m);
            assert_eq!(rank(&mut big), rank_rational(&m), "matrix {m:?}");
        }
    }
}
