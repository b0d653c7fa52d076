//! Self-contained dense linear-program solver.
//!
//! Two-phase full-tableau simplex for desk-scale problems. Pivoting uses a
//! bounded Dantzig phase and then switches to Bland's rule, which makes every
//! solve deterministic and cycle-free. All tolerances live in [`LpConfig`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarBound {
    NonNegative,
    Free,
}

#[derive(Debug, Clone)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `maximize . rows . bounds`: maximize `objective . x` subject to the rows
/// and per-variable sign bounds.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub bounds: Vec<VarBound>,
}

impl LinearProgram {
    /// Maximization problem over non-negative variables.
    pub fn maximize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            rows: Vec::new(),
            bounds: vec![VarBound::NonNegative; n],
        }
    }

    pub fn with_row(mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        self.rows.push(LpRow {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn free_var(mut self, j: usize) -> Self {
        self.bounds[j] = VarBound::Free;
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if self.bounds.len() != n {
            return Err(Error::dim("lp bounds", n, self.bounds.len()));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::Precondition {
                what: "lp objective has non-finite coefficient".into(),
            });
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != n {
                return Err(Error::dim(format!("lp row {i}"), n, row.coeffs.len()));
            }
            if row.coeffs.iter().any(|c| !c.is_finite()) || !row.rhs.is_finite() {
                return Err(Error::Precondition {
                    what: format!("lp row {i} has a non-finite coefficient"),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub x: Vec<f64>,
    pub iterations: usize,
}

/// Centralized numerical tolerances for the simplex.
#[derive(Debug, Clone, Copy)]
pub struct LpConfig {
    /// Rhs / residual threshold for feasibility decisions.
    pub feas_tol: f64,
    /// Minimum magnitude of a usable pivot element.
    pub pivot_tol: f64,
    /// Reduced-cost threshold for entering candidates.
    pub cost_tol: f64,
    /// Pivots performed under Dantzig pricing before switching to Bland.
    pub dantzig_pivots: usize,
    /// Hard pivot budget; exceeding it is reported as numerical breakdown.
    pub max_pivots: usize,
}

impl Default for LpConfig {
    fn default() -> Self {
        LpConfig {
            feas_tol: 1e-8,
            pivot_tol: 1e-10,
            cost_tol: 1e-9,
            dantzig_pivots: 5_000,
            max_pivots: 50_000,
        }
    }
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    solve_lp_with(lp, &LpConfig::default())
}

pub fn solve_lp_with(lp: &LinearProgram, config: &LpConfig) -> Result<LpSolution> {
    lp.validate()?;

    // Split free variables into positive and negative parts.
    let n_orig = lp.objective.len();
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n_orig);
    let mut n_struct = 0;
    for bound in &lp.bounds {
        match bound {
            VarBound::NonNegative => {
                col_of.push((n_struct, None));
                n_struct += 1;
            }
            VarBound::Free => {
                col_of.push((n_struct, Some(n_struct + 1)));
                n_struct += 2;
            }
        }
    }
    let expand = |coeffs: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n_struct];
        for (j, &c) in coeffs.iter().enumerate() {
            let (pos, neg) = col_of[j];
            out[pos] = c;
            if let Some(neg) = neg {
                out[neg] = -c;
            }
        }
        out
    };

    let m = lp.rows.len();
    let n_slack = lp
        .rows
        .iter()
        .filter(|r| r.relation != Relation::Eq)
        .count();
    let total = n_struct + n_slack + m; // artificial slots allocated per row, used as needed
    let width = total + 1; // + rhs

    let mut tab = vec![vec![0.0; width]; m];
    let mut basis = vec![usize::MAX; m];
    let mut slack_idx = 0;
    let mut artificials: Vec<usize> = Vec::new();

    for (i, row) in lp.rows.iter().enumerate() {
        let mut coeffs = expand(&row.coeffs);
        let mut rhs = row.rhs;
        let mut slack_sign = match row.relation {
            Relation::Le => 1.0,
            Relation::Ge => -1.0,
            Relation::Eq => 0.0,
        };
        if rhs < 0.0 {
            for c in &mut coeffs {
                *c = -*c;
            }
            rhs = -rhs;
            slack_sign = -slack_sign;
        }
        tab[i][..n_struct].copy_from_slice(&coeffs);
        let mut basic_col = None;
        if row.relation != Relation::Eq {
            let col = n_struct + slack_idx;
            slack_idx += 1;
            tab[i][col] = slack_sign;
            if slack_sign > 0.0 {
                basic_col = Some(col);
            }
        }
        if basic_col.is_none() {
            let col = n_struct + n_slack + i;
            tab[i][col] = 1.0;
            artificials.push(col);
            basic_col = Some(col);
        }
        tab[i][total] = rhs;
        basis[i] = basic_col.unwrap();
    }

    let is_artificial = {
        let lo = n_struct + n_slack;
        move |col: usize| col >= lo
    };

    let mut iterations = 0usize;

    // Phase 1: drive artificials to zero.
    if !artificials.is_empty() {
        let mut obj = vec![0.0; width];
        // Maximize -(sum of artificials): reduced costs priced out over basis.
        for &col in &artificials {
            obj[col] = 1.0;
        }
        for (i, &b) in basis.iter().enumerate() {
            if is_artificial(b) {
                for j in 0..width {
                    obj[j] -= tab[i][j];
                }
            }
        }
        let status = run_simplex(
            &mut tab,
            &mut basis,
            &mut obj,
            total,
            config,
            &mut iterations,
            &|_| true,
        )?;
        if status == LpStatus::Unbounded {
            return Err(Error::LpFailure {
                what: "phase 1 reported unbounded".into(),
            });
        }
        let infeas = -obj[total];
        if infeas > config.feas_tol {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                objective: 0.0,
                x: vec![0.0; n_orig],
                iterations,
            });
        }
        // Pivot remaining zero-level artificials out of the basis when a
        // non-artificial pivot exists; otherwise the row is redundant.
        for i in 0..m {
            if is_artificial(basis[i]) {
                let pivot_col = (0..n_struct + n_slack)
                    .find(|&j| tab[i][j].abs() > config.pivot_tol);
                match pivot_col {
                    Some(j) => pivot(&mut tab, &mut basis, &mut vec![0.0; width], i, j, total),
                    None => {
                        for j in 0..total {
                            tab[i][j] = 0.0;
                        }
                        tab[i][total] = 0.0;
                    }
                }
            }
        }
    }

    // Phase 2: the real objective over non-artificial columns.
    let mut obj = vec![0.0; width];
    let expanded_c = expand(&lp.objective);
    for (j, &c) in expanded_c.iter().enumerate() {
        obj[j] = -c;
    }
    for (i, &b) in basis.iter().enumerate() {
        if obj[b].abs() > 0.0 {
            let factor = obj[b];
            for j in 0..width {
                obj[j] -= factor * tab[i][j];
            }
        }
    }
    let allowed = |col: usize| !is_artificial(col);
    let status = run_simplex(
        &mut tab,
        &mut basis,
        &mut obj,
        total,
        config,
        &mut iterations,
        &allowed,
    )?;
    if status == LpStatus::Unbounded {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            objective: f64::INFINITY,
            x: vec![0.0; n_orig],
            iterations,
        });
    }

    let mut internal = vec![0.0; n_struct];
    for (i, &b) in basis.iter().enumerate() {
        if b < n_struct {
            internal[b] = tab[i][total];
        }
    }
    let mut x = vec![0.0; n_orig];
    for (j, &(pos, neg)) in col_of.iter().enumerate() {
        x[j] = internal[pos] - neg.map_or(0.0, |n| internal[n]);
    }
    let objective = lp
        .objective
        .iter()
        .zip(&x)
        .map(|(c, v)| c * v)
        .sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective,
        x,
        iterations,
    })
}

/// Simplex inner loop on an (m x width) tableau with reduced-cost row `obj`.
/// Entering candidates are restricted by `allowed`; returns Optimal or
/// Unbounded.
fn run_simplex(
    tab: &mut [Vec<f64>],
    basis: &mut [usize],
    obj: &mut Vec<f64>,
    total: usize,
    config: &LpConfig,
    iterations: &mut usize,
    allowed: &dyn Fn(usize) -> bool,
) -> Result<LpStatus> {
    let m = tab.len();
    loop {
        if *iterations >= config.max_pivots {
            return Err(Error::LpFailure {
                what: format!("pivot budget {} exhausted", config.max_pivots),
            });
        }
        let bland = *iterations >= config.dantzig_pivots;
        let mut entering: Option<usize> = None;
        if bland {
            for j in 0..total {
                if allowed(j) && obj[j] < -config.cost_tol {
                    entering = Some(j);
                    break;
                }
            }
        } else {
            let mut best = -config.cost_tol;
            for j in 0..total {
                if allowed(j) && obj[j] < best {
                    best = obj[j];
                    entering = Some(j);
                }
            }
        }
        let Some(col) = entering else {
            return Ok(LpStatus::Optimal);
        };

        let mut leaving: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = tab[i][col];
            if a > config.pivot_tol {
                let ratio = tab[i][total] / a;
                let better = match leaving {
                    None => true,
                    Some((bi, br)) => {
                        ratio < br - 1e-12 || (ratio < br + 1e-12 && basis[i] < basis[bi])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leaving else {
            return Ok(LpStatus::Unbounded);
        };

        pivot(tab, basis, obj, row, col, total);
        *iterations += 1;
    }
}

fn pivot(
    tab: &mut [Vec<f64>],
    basis: &mut [usize],
    obj: &mut [f64],
    row: usize,
    col: usize,
    total: usize,
) {
    let m = tab.len();
    let p = tab[row][col];
    for j in 0..=total {
        tab[row][j] /= p;
    }
    tab[row][col] = 1.0;
    for i in 0..m {
        if i != row {
            let f = tab[i][col];
            if f != 0.0 {
                for j in 0..=total {
                    tab[i][j] -= f * tab[row][j];
                }
                tab[i][col] = 0.0;
            }
        }
    }
    let f = obj[col];
    if f != 0.0 {
        for j in 0..=total {
            obj[j] -= f * tab[row][j];
        }
        obj[col] = 0.0;
    }
    basis[row] = col;
}
