//! Small dense linear programs solved by a two-phase tableau simplex that
//! also reports dual multipliers.
//!
//! Duals follow one convention for both senses. With `s = +1` for
//! maximization and `s = -1` for minimization, an optimal solution satisfies
//!
//! ```text
//! s * c = G^T lambda + A^T mu + z
//! ```
//!
//! where `lambda >= 0` prices the `G x <= h` rows, `mu` is free and prices
//! `A x = d`, and `z` holds the bound multipliers (`reduced_costs`). In a
//! maximization `lambda_i` is the rate at which the optimum grows when `h_i`
//! grows.

mod tableau;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    fn sign(self) -> f64 {
        match self {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        }
    }
}

/// `optimize c . x` subject to `G x <= h`, `A x = d`, `lower <= x <= upper`.
///
/// Variables are free by default.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub ineq_matrix: Vec<Vec<f64>>,
    pub ineq_rhs: Vec<f64>,
    pub eq_matrix: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LpProblem {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            ineq_matrix: Vec::new(),
            ineq_rhs: Vec::new(),
            eq_matrix: Vec::new(),
            eq_rhs: Vec::new(),
            lower: vec![f64::NEG_INFINITY; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_inequalities(&self) -> usize {
        self.ineq_rhs.len()
    }

    pub fn num_equalities(&self) -> usize {
        self.eq_rhs.len()
    }

    pub fn add_le(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.ineq_matrix.push(row);
        self.ineq_rhs.push(rhs);
        self
    }

    pub fn add_ge(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.add_le(row.into_iter().map(|v| -v).collect(), -rhs)
    }

    pub fn add_eq(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.eq_matrix.push(row);
        self.eq_rhs.push(rhs);
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        let bad = |msg: String| Err(Error::MalformedLp(msg));
        if self.ineq_matrix.len() != self.ineq_rhs.len()
            || self.eq_matrix.len() != self.eq_rhs.len()
        {
            return bad("row count does not match right-hand side length".into());
        }
        if self.lower.len() != n || self.upper.len() != n {
            return bad("bound vectors do not match the number of variables".into());
        }
        for (i, row) in self.ineq_matrix.iter().chain(&self.eq_matrix).enumerate() {
            if row.len() != n {
                return bad(format!("row {i} has {} entries, expected {n}", row.len()));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return bad(format!("row {i} has a non-finite entry"));
            }
        }
        if self
            .objective
            .iter()
            .chain(&self.ineq_rhs)
            .chain(&self.eq_rhs)
            .any(|v| !v.is_finite())
        {
            return bad("objective or right-hand side has a non-finite entry".into());
        }
        for j in 0..n {
            let (lo, hi) = (self.lower[j], self.upper[j]);
            if lo.is_nan()
                || hi.is_nan()
                || lo > hi
                || lo == f64::INFINITY
                || hi == f64::NEG_INFINITY
            {
                return bad(format!("variable {j} has invalid bounds [{lo}, {hi}]"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Primal/dual solution. Vectors are empty unless the status is `Optimal`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    pub objective: f64,
    pub ineq_duals: Vec<f64>,
    pub eq_duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
}

impl LpSolution {
    fn without_point(status: LpStatus, objective: f64) -> Self {
        Self {
            status,
            primal: Vec::new(),
            objective,
            ineq_duals: Vec::new(),
            eq_duals: Vec::new(),
            reduced_costs: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Objective of the dual problem built from the returned multipliers.
    /// Equals `objective` at an optimum, up to round-off.
    pub fn dual_objective(&self, lp: &LpProblem) -> f64 {
        let s = lp.sense.sign();
        let rows: f64 = self
            .ineq_duals
            .iter()
            .zip(&lp.ineq_rhs)
            .chain(self.eq_duals.iter().zip(&lp.eq_rhs))
            .map(|(y, b)| y * b)
            .sum();
        let bounds: f64 = self
            .reduced_costs
            .iter()
            .enumerate()
            .map(|(j, &z)| {
                if z > 0.0 {
                    z * lp.upper[j]
                } else if z < 0.0 {
                    z * lp.lower[j]
                } else {
                    0.0
                }
            })
            .sum();
        s * (rows + bounds)
    }
}

/// Pivot magnitude below which an entry is treated as zero.
pub const PIVOT_TOL: f64 = 1e-10;
/// Primal feasibility tolerance (scaled by the right-hand side magnitude).
pub const FEAS_TOL: f64 = 1e-8;

/// Solves `lp`. Infeasible and unbounded problems are reported through
/// [`LpSolution::status`]; `Err` is reserved for malformed input and
/// numerical breakdown.
pub fn solve(lp: &LpProblem) -> Result<LpSolution> {
    lp.validate()?;
    let form = tableau::StandardForm::from_problem(lp);
    let outcome = form.solve()?;
    let sol = match outcome {
        tableau::Outcome::Infeasible => LpSolution::without_point(LpStatus::Infeasible, f64::NAN),
        tableau::Outcome::Unbounded => {
            LpSolution::without_point(LpStatus::Unbounded, lp.sense.sign() * f64::INFINITY)
        }
        tableau::Outcome::Optimal { x, row_duals } => {
            let primal = form.recover_primal(&x);
            let m_i = lp.num_inequalities();
            // Internal duals belong to `min s' c' y`; flip into the public convention.
            let ineq_duals: Vec<f64> = row_duals[..m_i].iter().map(|y| (-y).max(0.0)).collect();
            let eq_duals: Vec<f64> = row_duals[m_i..m_i + lp.num_equalities()]
                .iter()
                .map(|y| -y)
                .collect();
            let s = lp.sense.sign();
            let reduced_costs = (0..lp.num_vars())
                .map(|j| {
                    let priced: f64 = lp
                        .ineq_matrix
                        .iter()
                        .zip(&ineq_duals)
                        .chain(lp.eq_matrix.iter().zip(&eq_duals))
                        .map(|(row, y)| row[j] * y)
                        .sum();
                    s * lp.objective[j] - priced
                })
                .collect();
            let objective = lp.objective.iter().zip(&primal).map(|(c, x)| c * x).sum();
            let sol = LpSolution {
                status: LpStatus::Optimal,
                primal,
                objective,
                ineq_duals,
                eq_duals,
                reduced_costs,
            };
            check_primal(lp, &sol.primal)?;
            sol
        }
    };
    Ok(sol)
}

fn check_primal(lp: &LpProblem, x: &[f64]) -> Result<()> {
    let scale = 1.0
        + lp.ineq_rhs
            .iter()
            .chain(&lp.eq_rhs)
            .fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-6 * scale;
    let dot = |row: &[f64]| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    for (row, &h) in lp.ineq_matrix.iter().zip(&lp.ineq_rhs) {
        if dot(row) - h > tol {
            return Err(Error::NumericalFailure(format!(
                "inequality residual {} exceeds tolerance",
                dot(row) - h
            )));
        }
    }
    for (row, &d) in lp.eq_matrix.iter().zip(&lp.eq_rhs) {
        if (dot(row) - d).abs() > tol {
            return Err(Error::NumericalFailure(format!(
                "equality residual {} exceeds tolerance",
                dot(row) - d
            )));
        }
    }
    for (j, &xj) in x.iter().enumerate() {
        if xj < lp.lower[j] - tol || xj > lp.upper[j] + tol {
            return Err(Error::NumericalFailure(format!(
                "variable {j} violates its bounds"
            )));
        }
    }
    Ok(())
}
