//! Exact feasibility oracle for strict separation systems.
//!
//! [`feasible_margin_system`] decides whether a system `A y >= 1` (y free)
//! has a solution, entirely in arbitrary-precision rational arithmetic, and
//! returns a solution when one exists. Separability questions about
//! threshold functions reduce to exactly this shape, and the instances that
//! matter are the nearly-degenerate ones, so no floating-point shortcut is
//! ever allowed to decide the answer.
//!
//! The implementation is a phase-1 primal simplex on the standard form
//! `A(u - v) - s + t = 1`, `u, v, s, t >= 0`, minimizing the artificial
//! total `sum(t)` with Bland's anti-cycling rule. The objective is bounded
//! below by zero and the artificial basis is feasible, so the method always
//! terminates; the system is feasible iff the optimum is zero.

use num_traits::{One, Signed, Zero};

use crate::rational::Rat;

/// Decides `exists y: rows[i] . y >= 1 for all i` and returns a witness.
///
/// Every row must have the same length (the dimension of `y`). An empty row
/// set is trivially feasible with `y = 0`.
pub fn feasible_margin_system(rows: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    let m = rows.len();
    if m == 0 {
        return Some(Vec::new());
    }
    let dim = rows[0].len();
    debug_assert!(rows.iter().all(|r| r.len() == dim));

    // Columns: u (dim), v (dim), surplus (m), artificial (m); plus rhs.
    let n_cols = 2 * dim + 2 * m;
    let rhs_col = n_cols;
    let mut tableau: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        let mut t = vec![Rat::zero(); n_cols + 1];
        for (j, a) in row.iter().enumerate() {
            t[j] = a.clone();
            t[dim + j] = -a.clone();
        }
        t[2 * dim + i] = -Rat::one();
        t[2 * dim + m + i] = Rat::one();
        t[rhs_col] = Rat::one();
        tableau.push(t);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * dim + m + i).collect();

    // Reduced-cost row for minimizing the artificial sum: with the
    // artificials basic, cost[j] = -sum_i tableau[i][j] over non-artificial
    // columns and 0 on artificial ones; the running objective value is
    // tracked in cost[rhs].
    let mut cost = vec![Rat::zero(); n_cols + 1];
    for t in &tableau {
        for (j, c) in cost.iter_mut().enumerate() {
            if j < 2 * dim + m || j == rhs_col {
                *c -= &t[j];
            }
        }
    }

    // Bland: entering column = lowest index with negative reduced cost.
    while let Some(pivot_col) = (0..n_cols).find(|&j| cost[j].is_negative()) {
        // Ratio test; Bland ties broken by smallest basis variable index.
        let mut pivot_row: Option<usize> = None;
        let mut best_ratio: Option<Rat> = None;
        for i in 0..m {
            if tableau[i][pivot_col].is_positive() {
                let ratio = &tableau[i][rhs_col] / &tableau[i][pivot_col];
                let better = match &best_ratio {
                    None => true,
                    Some(best) => {
                        ratio < *best
                            || (ratio == *best
                                && basis[i] < basis[pivot_row.expect("row set with ratio")])
                    }
                };
                if better {
                    best_ratio = Some(ratio);
                    pivot_row = Some(i);
                }
            }
        }
        // Phase-1 objective is bounded, so a negative-cost column always
        // admits a pivot row.
        let pivot_row = pivot_row.expect("phase-1 simplex cannot be unbounded");

        let pivot_value = tableau[pivot_row][pivot_col].clone();
        for entry in tableau[pivot_row].iter_mut() {
            *entry /= &pivot_value;
        }
        for i in 0..m {
            if i != pivot_row && !tableau[i][pivot_col].is_zero() {
                let factor = tableau[i][pivot_col].clone();
                for j in 0..=n_cols {
                    let delta = &factor * &tableau[pivot_row][j];
                    tableau[i][j] -= delta;
                }
            }
        }
        if !cost[pivot_col].is_zero() {
            let factor = cost[pivot_col].clone();
            for j in 0..=n_cols {
                let delta = &factor * &tableau[pivot_row][j];
                cost[j] -= delta;
            }
        }
        basis[pivot_row] = pivot_col;
    }

    // cost[rhs] holds -(artificial total) at optimum.
    if !cost[rhs_col].is_zero() {
        return None;
    }

    let mut u = vec![Rat::zero(); dim];
    let mut v = vec![Rat::zero(); dim];
    for (i, &b) in basis.iter().enumerate() {
        if b < dim {
            u[b] = tableau[i][rhs_col].clone();
        } else if b < 2 * dim {
            v[b - dim] = tableau[i][rhs_col].clone();
        }
    }
    let y: Vec<Rat> = u.into_iter().zip(v).map(|(a, b)| a - b).collect();
    debug_assert!(rows.iter().all(|row| {
        row.iter()
            .zip(&y)
            .map(|(a, x)| a * x)
            .fold(Rat::zero(), |acc, t| acc + t)
            >= Rat::one()
    }));
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn rows(data: &[&[i64]]) -> Vec<Vec<Rat>> {
        data.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    fn check_witness(rows: &[Vec<Rat>], y: &[Rat]) {
        for row in rows {
            let dot = row
                .iter()
                .zip(y)
                .map(|(a, x)| a * x)
                .fold(Rat::zero(), |acc, t| acc + t);
            assert!(dot >= rat(1), "margin violated: {dot}");
        }
    }

    #[test]
    fn trivially_feasible_single_constraint() {
        let system = rows(&[&[1, 0]]);
        let y = feasible_margin_system(&system).expect("feasible");
        check_witness(&system, &y);
    }

    #[test]
    fn opposing_constraints_are_infeasible() {
        // y1 >= 1 and -y1 >= 1 cannot both hold.
        let system = rows(&[&[1], &[-1]]);
        assert!(feasible_margin_system(&system).is_none());
    }

    #[test]
    fn xor_pattern_is_infeasible_in_affine_coordinates() {
        // Rows are s * (1, x1, x2) for the 2-variable parity labels: the
        // classic non-separable pattern.
        let system = rows(&[&[-1, 0, 0], &[1, 1, 0], &[1, 0, 1], &[-1, -1, -1]]);
        assert!(feasible_margin_system(&system).is_none());
    }

    #[test]
    fn or_pattern_is_feasible_in_affine_coordinates() {
        let system = rows(&[&[-1, 0, 0], &[1, 1, 0], &[1, 0, 1], &[1, 1, 1]]);
        let y = feasible_margin_system(&system).expect("feasible");
        check_witness(&system, &y);
    }

    #[test]
    fn empty_system_is_feasible() {
        assert_eq!(feasible_margin_system(&[]), Some(Vec::new()));
    }

    #[test]
    fn fractional_witnesses_are_exact() {
        // 3 y1 >= 1 forces a fractional witness.
        let system = rows(&[&[3]]);
        let y = feasible_margin_system(&system).expect("feasible");
        check_witness(&system, &y);
    }
}
