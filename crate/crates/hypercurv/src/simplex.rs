//! Dense two-phase simplex with Bland's rule.
//!
//! Instances here are tiny (at most a few hundred variables), so a dense
//! tableau is fine. Bland's rule keeps pivoting deterministic and cycle-free,
//! which makes every LP-backed output bit-reproducible.

use crate::error::SolverError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
}

#[derive(Debug, Clone)]
pub struct LpRow {
    /// Sparse coefficients (variable index, coefficient).
    pub coeffs: Vec<(usize, f64)>,
    pub cmp: Cmp,
    pub rhs: f64,
}

/// Maximize `objective · x` subject to the rows, with `x >= 0`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub objective: f64,
    pub x: Vec<f64>,
}

const PIVOT_TOL: f64 = 1e-9;

pub fn solve(p: &LpProblem) -> Result<LpSolution, SolverError> {
    let n = p.num_vars;
    let m = p.rows.len();

    // Row sense after normalizing every rhs to be nonnegative.
    #[derive(Clone, Copy, PartialEq)]
    enum Sense {
        Le,
        Ge,
        Eq,
    }
    let mut dense_rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut senses = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for row in &p.rows {
        let mut r = vec![0.0; n];
        for &(j, c) in &row.coeffs {
            assert!(j < n, "coefficient index out of range");
            r[j] += c;
        }
        let mut b = row.rhs;
        let mut sense = match row.cmp {
            Cmp::Le => Sense::Le,
            Cmp::Eq => Sense::Eq,
        };
        if b < 0.0 {
            for c in &mut r {
                *c = -*c;
            }
            b = -b;
            sense = match sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
        dense_rows.push(r);
        senses.push(sense);
        rhs.push(b);
    }

    // Column layout: structural, then slack/surplus, then artificials.
    let mut num_cols = n;
    let mut slack_col = vec![usize::MAX; m];
    for (i, s) in senses.iter().enumerate() {
        if matches!(s, Sense::Le | Sense::Ge) {
            slack_col[i] = num_cols;
            num_cols += 1;
        }
    }
    let art_start = num_cols;
    let mut art_col = vec![usize::MAX; m];
    for (i, s) in senses.iter().enumerate() {
        if matches!(s, Sense::Ge | Sense::Eq) {
            art_col[i] = num_cols;
            num_cols += 1;
        }
    }

    let mut tab = vec![vec![0.0; num_cols + 1]; m];
    let mut basis = vec![0usize; m];
    for i in 0..m {
        tab[i][..n].copy_from_slice(&dense_rows[i]);
        tab[i][num_cols] = rhs[i];
        match senses[i] {
            Sense::Le => {
                tab[i][slack_col[i]] = 1.0;
                basis[i] = slack_col[i];
            }
            Sense::Ge => {
                tab[i][slack_col[i]] = -1.0;
                tab[i][art_col[i]] = 1.0;
                basis[i] = art_col[i];
            }
            Sense::Eq => {
                tab[i][art_col[i]] = 1.0;
                basis[i] = art_col[i];
            }
        }
    }

    let run = |tab: &mut Vec<Vec<f64>>,
               basis: &mut Vec<usize>,
               cost: &[f64],
               banned_from: usize|
     -> Result<(), SolverError> {
        // Reduced-cost row r_j = c_j - c_B B^-1 A_j for the current basis.
        let m = tab.len();
        let width = tab[0].len();
        let mut red = vec![0.0; width];
        red[..cost.len()].copy_from_slice(cost);
        for i in 0..m {
            let cb = cost.get(basis[i]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for j in 0..width {
                    red[j] -= cb * tab[i][j];
                }
            }
        }
        loop {
            // Bland: entering = lowest-index improving column.
            let mut enter = None;
            for (j, &rj) in red.iter().enumerate().take(width - 1) {
                if j >= banned_from {
                    break;
                }
                if rj > PIVOT_TOL {
                    enter = Some(j);
                    break;
                }
            }
            let Some(enter) = enter else {
                return Ok(());
            };
            // Ratio test; ties resolved by smallest basis variable index.
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = tab[i][enter];
                if a > PIVOT_TOL {
                    let ratio = tab[i][width - 1] / a;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-12
                                || (ratio < lr + 1e-12 && basis[i] < basis[li])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((leave, _)) = leave else {
                return Err(SolverError::Lp("unbounded linear program".into()));
            };
            // Pivot.
            let piv = tab[leave][enter];
            for v in &mut tab[leave] {
                *v /= piv;
            }
            let pivot_row = tab[leave].clone();
            for (i, row) in tab.iter_mut().enumerate() {
                if i != leave {
                    let factor = row[enter];
                    if factor != 0.0 {
                        for (rv, pv) in row.iter_mut().zip(&pivot_row) {
                            *rv -= factor * pv;
                        }
                    }
                }
            }
            let factor = red[enter];
            if factor != 0.0 {
                for (rv, pv) in red.iter_mut().zip(&pivot_row) {
                    *rv -= factor * pv;
                }
            }
            basis[leave] = enter;
        }
    };

    // Phase 1: maximize -sum(artificials).
    if art_start < num_cols {
        let mut cost1 = vec![0.0; num_cols];
        for c in cost1.iter_mut().skip(art_start) {
            *c = -1.0;
        }
        run(&mut tab, &mut basis, &cost1, num_cols)?;
        let infeas: f64 = (0..m)
            .filter(|&i| basis[i] >= art_start)
            .map(|i| tab[i][num_cols])
            .sum();
        if infeas > 1e-7 {
            return Err(SolverError::Lp("infeasible linear program".into()));
        }
        // Drive remaining zero-level artificials out of the basis when possible.
        for i in 0..m {
            if basis[i] >= art_start {
                if let Some(j) = (0..art_start).find(|&j| tab[i][j].abs() > PIVOT_TOL) {
                    let piv = tab[i][j];
                    for v in &mut tab[i] {
                        *v /= piv;
                    }
                    let pivot_row = tab[i].clone();
                    for (k, row) in tab.iter_mut().enumerate() {
                        if k != i {
                            let factor = row[j];
                            if factor != 0.0 {
                                for (rv, pv) in row.iter_mut().zip(&pivot_row) {
                                    *rv -= factor * pv;
                                }
                            }
                        }
                    }
                    basis[i] = j;
                }
            }
        }
    }

    // Phase 2 with the real objective; artificial columns may not re-enter.
    let mut cost2 = vec![0.0; num_cols];
    cost2[..n].copy_from_slice(&p.objective);
    run(&mut tab, &mut basis, &cost2, art_start)?;

    let mut x = vec![0.0; n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = tab[i][num_cols];
        }
    }
    let objective = p.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution { objective, x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn box_constraints() {
        // max x + y, x <= 1, y <= 2
        let p = LpProblem {
            num_vars: 2,
            objective: vec![1.0, 1.0],
            rows: vec![
                LpRow { coeffs: vec![(0, 1.0)], cmp: Cmp::Le, rhs: 1.0 },
                LpRow { coeffs: vec![(1, 1.0)], cmp: Cmp::Le, rhs: 2.0 },
            ],
        };
        let s = solve(&p).unwrap();
        assert_relative_eq!(s.objective, 3.0, epsilon = 1e-9);
    }

    #[test]
    fn equality_rows() {
        // max 2x + 3y with x + y = 4, x - y <= 2
        let p = LpProblem {
            num_vars: 2,
            objective: vec![2.0, 3.0],
            rows: vec![
                LpRow { coeffs: vec![(0, 1.0), (1, 1.0)], cmp: Cmp::Eq, rhs: 4.0 },
                LpRow { coeffs: vec![(0, 1.0), (1, -1.0)], cmp: Cmp::Le, rhs: 2.0 },
            ],
        };
        let s = solve(&p).unwrap();
        assert_relative_eq!(s.objective, 12.0, epsilon = 1e-9);
        assert_relative_eq!(s.x[1], 4.0, epsilon = 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        let p = LpProblem {
            num_vars: 1,
            objective: vec![1.0],
            rows: vec![
                LpRow { coeffs: vec![(0, 1.0)], cmp: Cmp::Le, rhs: 1.0 },
                LpRow { coeffs: vec![(0, 1.0)], cmp: Cmp::Eq, rhs: 3.0 },
            ],
        };
        assert!(solve(&p).is_err());
    }

    #[test]
    fn unbounded_detected() {
        let p = LpProblem {
            num_vars: 2,
            objective: vec![1.0, 0.0],
            rows: vec![LpRow { coeffs: vec![(1, 1.0)], cmp: Cmp::Le, rhs: 1.0 }],
        };
        assert!(solve(&p).is_err());
    }

    #[test]
    fn tiny_transport() {
        // Two sources (0.5, 0.5), two sinks (0.25, 0.75), costs [[0,1],[1,0]].
        // Optimal: ship diagonally, move 0.25 across -> cost 0.25.
        let cost = [[0.0, 1.0], [1.0, 0.0]];
        let var = |i: usize, j: usize| i * 2 + j;
        let mut rows = Vec::new();
        for i in 0..2 {
            rows.push(LpRow {
                coeffs: (0..2).map(|j| (var(i, j), 1.0)).collect(),
                cmp: Cmp::Eq,
                rhs: 0.5,
            });
        }
        for (j, b) in [0.25, 0.75].into_iter().enumerate() {
            rows.push(LpRow {
                coeffs: (0..2).map(|i| (var(i, j), 1.0)).collect(),
                cmp: Cmp::Eq,
                rhs: b,
            });
        }
        let p = LpProblem {
            num_vars: 4,
            objective: (0..4).map(|k| -cost[k / 2][k % 2]).collect(),
            rows,
        };
        let s = solve(&p).unwrap();
        assert_relative_eq!(-s.objective, 0.25, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_rhs() {
        // max x + y with x <= 0, x + y <= 1: degenerate vertex at x = 0.
        let p = LpProblem {
            num_vars: 2,
            objective: vec![1.0, 1.0],
            rows: vec![
                LpRow { coeffs: vec![(0, 1.0)], cmp: Cmp::Le, rhs: 0.0 },
                LpRow { coeffs: vec![(0, 1.0), (1, 1.0)], cmp: Cmp::Le, rhs: 1.0 },
            ],
        };
        let s = solve(&p).unwrap();
        assert_relative_eq!(s.objective, 1.0, epsilon = 1e-9);
    }
}
