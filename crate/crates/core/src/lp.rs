//! Dense two-phase primal simplex for `min cᵀx  s.t.  Ax = b, x ≥ 0`.
//!
//! Entering and leaving variables are chosen by Bland's rule (smallest
//! index), which rules out cycling and makes the result a deterministic
//! function of the input. Intended for the few-hundred-variable programs
//! that arise from transport on small graphs.

use thiserror::Error;

const PIVOT_TOL: f64 = 1e-10;
const OPTIMALITY_TOL: f64 = 1e-9;
const FEASIBILITY_TOL: f64 = 1e-9;
const CERTIFY_TOL: f64 = 1e-8;
const RATIO_TIE_TOL: f64 = 1e-12;
const ROUND_TO_ZERO: f64 = 1e-14;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite coefficient in {0}")]
    NonFinite(&'static str),
    #[error("no convergence after {0} pivots")]
    IterationLimit(usize),
    #[error("solution failed certification: {0}")]
    Certification(String),
    #[error("program is {0}")]
    NotOptimal(LpStatus),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl std::fmt::Display for LpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        })
    }
}

/// `min cᵀx` subject to `Ax = b`, `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    constraints: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

/// `x` and `objective_value` are meaningful only when `status` is optimal;
/// otherwise `x` is empty and the value is `+∞` (infeasible) or `-∞`
/// (unbounded).
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective_value: f64,
}

impl LpSolution {
    /// The solution if optimal, an error otherwise.
    pub fn optimal(self) -> Result<Self, LpError> {
        match self.status {
            LpStatus::Optimal => Ok(self),
            status => Err(LpError::NotOptimal(status)),
        }
    }
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, constraints: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self, LpError> {
        let n = objective.len();
        if n == 0 {
            return Err(LpError::Dimension("no variables".into()));
        }
        if constraints.len() != rhs.len() {
            return Err(LpError::Dimension(format!(
                "{} constraint rows but {} right-hand sides",
                constraints.len(),
                rhs.len()
            )));
        }
        if let Some((i, row)) = constraints.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(LpError::Dimension(format!(
                "constraint row {i} has {} coefficients, expected {n}",
                row.len()
            )));
        }
        if objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        if constraints.iter().flatten().any(|a| !a.is_finite()) {
            return Err(LpError::NonFinite("constraints"));
        }
        if rhs.iter().any(|b| !b.is_finite()) {
            return Err(LpError::NonFinite("right-hand side"));
        }
        Ok(LinearProgram {
            objective,
            constraints,
            rhs,
        })
    }

    pub fn num_variables(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rhs.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Vec<f64>] {
        &self.constraints
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        solve_lp(self)
    }

    /// Largest `|Ax - b|` over the rows.
    pub fn max_residual(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| (row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - b).abs())
            .fold(0.0, f64::max)
    }
}

struct Tableau {
    width: usize,
    rows: usize,
    // `rows` constraint rows followed by the reduced-cost row; last column is the rhs
    data: Vec<f64>,
    basis: Vec<usize>,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width - 1)
    }

    fn cost_row(&self) -> usize {
        self.rows
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.data[r * w + c];
        for j in 0..w {
            self.data[r * w + j] /= p;
        }
        self.data[r * w + c] = 1.0;
        let pivot_row: Vec<f64> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..=self.rows {
            if i == r {
                continue;
            }
            let factor = self.data[i * w + c];
            if factor == 0.0 {
                continue;
            }
            let row = &mut self.data[i * w..(i + 1) * w];
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
                if v.abs() < ROUND_TO_ZERO {
                    *v = 0.0;
                }
            }
            row[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Bland's rule over columns `0..active`.
    fn run(&mut self, active: usize, pivots: &mut usize) -> Result<Outcome, LpError> {
        let z = self.cost_row();
        loop {
            let Some(entering) = (0..active).find(|&j| self.at(z, j) < -OPTIMALITY_TOL) else {
                return Ok(Outcome::Optimal);
            };
            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, entering);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - RATIO_TIE_TOL
                            || (ratio <= br + RATIO_TIE_TOL && self.basis[i] < self.basis[bi])
                        {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = leaving else {
                return Ok(Outcome::Unbounded);
            };
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(LpError::IterationLimit(MAX_PIVOTS));
            }
            self.pivot(r, entering);
        }
    }
}

/// Solves `lp` and certifies the answer against the original data.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let n = lp.num_variables();
    let m = lp.num_constraints();
    let mut pivots = 0;

    // Phase 1: one artificial per row, rows flipped so that b ≥ 0.
    let width = n + m + 1;
    let mut data = vec![0.0; (m + 1) * width];
    for i in 0..m {
        let sign = if lp.rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            data[i * width + j] = sign * lp.constraints[i][j];
        }
        data[i * width + n + i] = 1.0;
        data[i * width + width - 1] = sign * lp.rhs[i];
    }
    for j in 0..n {
        data[m * width + j] = -(0..m).map(|i| data[i * width + j]).sum::<f64>();
    }
    data[m * width + width - 1] = -(0..m).map(|i| data[i * width + width - 1]).sum::<f64>();
    let mut tab = Tableau {
        width,
        rows: m,
        data,
        basis: (n..n + m).collect(),
    };
    tab.run(n + m, &mut pivots)?;

    let infeasibility = -tab.rhs(m);
    let scale = 1.0 + lp.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if infeasibility > FEASIBILITY_TOL * scale {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: Vec::new(),
            objective_value: f64::INFINITY,
        });
    }

    // Pivot remaining artificials out of the basis; rows where that is
    // impossible are linear combinations of the others.
    let mut redundant = vec![false; m];
    for (i, dropped) in redundant.iter_mut().enumerate() {
        if tab.basis[i] < n {
            continue;
        }
        match (0..n).find(|&j| tab.at(i, j).abs() > PIVOT_TOL) {
            Some(j) => tab.pivot(i, j),
            None => *dropped = true,
        }
    }

    // Phase 2 tableau: drop artificial columns and redundant rows.
    let kept: Vec<usize> = (0..m).filter(|&i| !redundant[i]).collect();
    let rows = kept.len();
    let w2 = n + 1;
    let mut data = vec![0.0; (rows + 1) * w2];
    let mut basis = Vec::with_capacity(rows);
    for (new_i, &i) in kept.iter().enumerate() {
        for j in 0..n {
            data[new_i * w2 + j] = tab.at(i, j);
        }
        data[new_i * w2 + n] = tab.rhs(i).max(0.0);
        basis.push(tab.basis[i]);
    }
    for j in 0..n {
        let basic_cost: f64 = (0..rows).map(|i| lp.objective[basis[i]] * data[i * w2 + j]).sum();
        data[rows * w2 + j] = lp.objective[j] - basic_cost;
    }
    data[rows * w2 + n] = -(0..rows).map(|i| lp.objective[basis[i]] * data[i * w2 + n]).sum::<f64>();
    let mut tab = Tableau {
        width: w2,
        rows,
        data,
        basis,
    };
    if let Outcome::Unbounded = tab.run(n, &mut pivots)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            x: Vec::new(),
            objective_value: f64::NEG_INFINITY,
        });
    }

    let mut x = vec![0.0; n];
    for i in 0..rows {
        x[tab.basis[i]] = tab.rhs(i);
    }
    certify(lp, &mut x)?;
    let objective_value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective_value,
    })
}

// Feasibility is rechecked from the original rows, independent of the
// pivot sequence that produced `x`.
fn certify(lp: &LinearProgram, x: &mut [f64]) -> Result<(), LpError> {
    for (j, v) in x.iter_mut().enumerate() {
        if *v < -FEASIBILITY_TOL {
            return Err(LpError::Certification(format!("x[{j}] = {v} is negative")));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let residual = lp.max_residual(x);
    if residual > CERTIFY_TOL {
        return Err(LpError::Certification(format!(
            "equality residual {residual:e} exceeds {CERTIFY_TOL:e}"
        )));
    }
    Ok(())
}
