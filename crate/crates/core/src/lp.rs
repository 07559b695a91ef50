//! Exact rational linear programming: phase-1 simplex with Bland's rule.
//!
//! Solves the feasibility problem `find mu >= 0 with A mu = b` over the
//! rationals. Bland's anti-cycling rule guarantees termination, and the
//! deterministic pivot order makes certificates reproducible. On
//! infeasibility the final simplex multipliers give a Farkas vector `y` with
//! `y^T A <= 0` componentwise and `y^T b > 0`; both outcomes are re-verified
//! exactly before being returned.

use crate::{Error, Rat, Result};
use num_traits::{One, Zero};

/// Outcome of the nonnegative feasibility problem.
#[derive(Clone, Debug)]
pub enum LpOutcome {
    /// Coefficients `mu >= 0` with `sum mu_j col_j = b`.
    Feasible(Vec<Rat>),
    /// Farkas vector `y` with `y . col_j <= 0` for all `j` and `y . b > 0`.
    Infeasible(Vec<Rat>),
}

/// Finds `mu >= 0` with `sum_j mu_j * columns[j] = rhs`, or an exact
/// certificate that none exists.
pub fn solve_nonneg(columns: &[Vec<Rat>], rhs: &[Rat]) -> Result<LpOutcome> {
    let m = rhs.len();
    let n = columns.len();
    for (j, col) in columns.iter().enumerate() {
        if col.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "column {j} has length {}, expected {m}",
                col.len()
            )));
        }
    }

    // Normalize row signs so the right-hand side is nonnegative.
    let mut sign = vec![1i8; m];
    let mut b: Vec<Rat> = rhs.to_vec();
    for i in 0..m {
        if b[i] < Rat::zero() {
            sign[i] = -1;
            b[i] = -b[i].clone();
        }
    }

    // Tableau over the structural columns and an artificial identity block;
    // the artificial variables start basic with cost 1.
    let total = n + m;
    let mut t: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rat> = (0..n)
                .map(|j| {
                    if sign[i] < 0 {
                        -columns[j][i].clone()
                    } else {
                        columns[j][i].clone()
                    }
                })
                .collect();
            row.extend((0..m).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..total).collect();

    // Reduced costs r_j = c_j - sum_i c_{basis_i} t[i][j] with c = (0..0,1..1).
    let mut reduced: Vec<Rat> = (0..total)
        .map(|j| {
            let mut acc = if j >= n { Rat::one() } else { Rat::zero() };
            for row in t.iter() {
                acc -= &row[j];
            }
            acc
        })
        .collect();

    loop {
        // Bland: smallest index with negative reduced cost enters.
        let Some(entering) = (0..total).find(|&j| reduced[j] < Rat::zero()) else {
            break;
        };
        // Ratio test; ties resolved by the smallest basic variable index.
        let mut leaving: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[i][entering] > Rat::zero() {
                let ratio = &b[i] / &t[i][entering];
                let better = match &best {
                    None => true,
                    Some(current) => {
                        ratio < *current
                            || (ratio == *current
                                && basis[i] < basis[leaving.expect("best implies leaving")])
                    }
                };
                if better {
                    best = Some(ratio);
                    leaving = Some(i);
                }
            }
        }
        let Some(pivot_row) = leaving else {
            // The phase-1 objective is bounded below by zero, so an
            // unbounded ray cannot occur.
            return Err(Error::Unsupported(
                "phase-1 simplex found an unbounded direction".into(),
            ));
        };

        // Pivot.
        let pivot = t[pivot_row][entering].clone();
        for v in t[pivot_row].iter_mut() {
            *v /= &pivot;
        }
        b[pivot_row] /= &pivot;
        for i in 0..m {
            if i != pivot_row && !t[i][entering].is_zero() {
                let factor = t[i][entering].clone();
                for j in 0..total {
                    let delta = &factor * &t[pivot_row][j];
                    t[i][j] -= delta;
                }
                let delta = &factor * &b[pivot_row];
                b[i] -= delta;
            }
        }
        if !reduced[entering].is_zero() {
            let factor = reduced[entering].clone();
            for j in 0..total {
                let delta = &factor * &t[pivot_row][j];
                reduced[j] -= delta;
            }
        }
        basis[pivot_row] = entering;
    }

    // Objective value: total artificial mass left in the basis.
    let objective: Rat = (0..m)
        .filter(|&i| basis[i] >= n)
        .map(|i| b[i].clone())
        .sum();

    if objective.is_zero() {
        let mut mu = vec![Rat::zero(); n];
        for i in 0..m {
            if basis[i] < n {
                mu[basis[i]] = b[i].clone();
            }
        }
        // Exact re-verification, independent of the pivot path.
        for i in 0..m {
            let mut acc = Rat::zero();
            for (j, col) in columns.iter().enumerate() {
                if !mu[j].is_zero() {
                    acc += &mu[j] * &col[i];
                }
            }
            if acc != rhs[i] {
                return Err(Error::IdentityViolation {
                    identity: "simplex solution re-multiplication".into(),
                    witness: format!("row {i}: {acc} != {}", rhs[i]),
                });
            }
        }
        debug_assert!(mu.iter().all(|v| *v >= Rat::zero()));
        Ok(LpOutcome::Feasible(mu))
    } else {
        // Simplex multipliers: pi_i = 1 - reduced[artificial_i]; flip the
        // row signs back.
        let mut y: Vec<Rat> = (0..m).map(|i| Rat::one() - &reduced[n + i]).collect();
        for i in 0..m {
            if sign[i] < 0 {
                y[i] = -y[i].clone();
            }
        }
        // Exact separation check.
        for (j, col) in columns.iter().enumerate() {
            let dot: Rat = y.iter().zip(col).map(|(a, b)| a * b).sum();
            if dot > Rat::zero() {
                return Err(Error::IdentityViolation {
                    identity: "Farkas separation".into(),
                    witness: format!("column {j}: y.col = {dot} > 0"),
                });
            }
        }
        let dot: Rat = y.iter().zip(rhs).map(|(a, b)| a * b).sum();
        if dot <= Rat::zero() {
            return Err(Error::IdentityViolation {
                identity: "Farkas separation".into(),
                witness: format!("y.b = {dot} <= 0"),
            });
        }
        Ok(LpOutcome::Infeasible(y))
    }
}
