//! Exact rank of integer matrices by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rank over the rationals of an integer matrix, computed without fractions:
/// every intermediate entry is an exact minor of the input.
pub fn rank_bareiss(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    debug_assert!(m.iter().all(|r| r.len() == cols));
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for r in (row + 1)..rows {
            for c in (col + 1)..cols {
                let val = (&m[row][col] * &m[r][c] - &m[r][col] * &m[row][c]) / &prev;
                m[r][c] = val;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        rank += 1;
        row += 1;
    }
    rank
}
