//! Blossom LP relaxation of `min p(x)` over a rectangle intersected with
//! linear constraints.
//!
//! The reduced relaxation has one row per Bernstein vertex class:
//!
//! ```text
//! max t
//! s.t. t <= q(v) + sum_i lambda_i (a_i' . v - b_i) + sum_j mu_j (c_j' . v - d_j)
//!      lambda >= 0
//! ```
//!
//! and its optimum `d*` is a certified lower bound on the polynomial minimum.

use crate::error::{check_dim, Error, Result};
use crate::lpsolve::{self, LpProblem, LpStatus, Sense};
use crate::polynomial::{bernstein_coefficients, MultiIndexIter, MultiPoly, Rectangle};

/// A single linear constraint `normal . x (<= or =) rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub normal: Vec<f64>,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn new(normal: Vec<f64>, rhs: f64) -> Self {
        Self { normal, rhs }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// Inequalities `a_i . x <= b_i` and equalities `c_j . x = d_j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConstraintSet {
    pub inequalities: Vec<LinearConstraint>,
    pub equalities: Vec<LinearConstraint>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_le(mut self, normal: Vec<f64>, rhs: f64) -> Self {
        self.inequalities.push(LinearConstraint::new(normal, rhs));
        self
    }

    /// `normal . x >= rhs`, stored negated as a `<=` row.
    pub fn with_ge(self, normal: Vec<f64>, rhs: f64) -> Self {
        self.with_le(normal.into_iter().map(|v| -v).collect(), -rhs)
    }

    pub fn with_eq(mut self, normal: Vec<f64>, rhs: f64) -> Self {
        self.equalities.push(LinearConstraint::new(normal, rhs));
        self
    }

    pub fn num_inequalities(&self) -> usize {
        self.inequalities.len()
    }

    pub fn num_equalities(&self) -> usize {
        self.equalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inequalities.is_empty() && self.equalities.is_empty()
    }

    fn all(&self) -> impl Iterator<Item = &LinearConstraint> {
        self.inequalities.iter().chain(&self.equalities)
    }

    /// Checks that every normal has `n` entries.
    pub fn check_dims(&self, n: usize) -> Result<()> {
        self.all().try_for_each(|c| check_dim(n, c.normal.len()))
    }

    /// Whether `x` satisfies every row to within `tol`.
    pub fn satisfied_by(&self, x: &[f64], tol: f64) -> bool {
        self.inequalities.iter().all(|c| c.eval(x) <= c.rhs + tol)
            && self
                .equalities
                .iter()
                .all(|c| (c.eval(x) - c.rhs).abs() <= tol)
    }

    /// Some point of `rect` satisfying the constraints, found by a phase-one LP.
    pub fn feasible_point(&self, rect: &Rectangle) -> Result<Option<Vec<f64>>> {
        let n = rect.dim();
        self.check_dims(n)?;
        let mut lp = LpProblem::new(Sense::Minimize, vec![0.0; n]);
        for k in 0..n {
            lp.set_bounds(k, rect.lower()[k], rect.upper()[k]);
        }
        for c in &self.inequalities {
            lp.add_le(c.normal.clone(), c.rhs);
        }
        for c in &self.equalities {
            lp.add_eq(c.normal.clone(), c.rhs);
        }
        let sol = lpsolve::solve(&lp)?;
        Ok(sol.is_optimal().then_some(sol.primal))
    }
}

/// All vertex classes for the degree vector, in lexicographic order.
pub fn enumerate_classes(degrees: &[u32]) -> Vec<Vec<u32>> {
    MultiIndexIter::new(degrees.to_vec()).collect()
}

/// `a' . v` for the lifted constraint vector `a'` and any lifted vertex in
/// class `l`: `sum_k (a_k / d_k) (l_k upper_k + (d_k - l_k) lower_k)`.
pub fn lifted_dot(a: &[f64], rect: &Rectangle, degrees: &[u32], class: &[u32]) -> Result<f64> {
    check_dim(rect.dim(), a.len())?;
    check_dim(rect.dim(), degrees.len())?;
    check_dim(rect.dim(), class.len())?;
    let mut sum = 0.0;
    for (k, &ak) in a.iter().enumerate() {
        if ak == 0.0 {
            continue;
        }
        let d = degrees[k];
        if d == 0 {
            return Err(Error::DegreeZeroConflict { var: k });
        }
        let l = f64::from(class[k]);
        let d = f64::from(d);
        sum += ak / d * (l * rect.upper()[k] + (d - l) * rect.lower()[k]);
    }
    Ok(sum)
}

/// Degree vector of `p`, raised to one for every variable that appears in a
/// constraint.
pub fn lift_degrees(p: &MultiPoly, cs: &ConstraintSet) -> Vec<u32> {
    let mut degrees = p.degrees().to_vec();
    for c in cs.all() {
        for (d, &a) in degrees.iter_mut().zip(&c.normal) {
            if a != 0.0 && *d == 0 {
                *d = 1;
            }
        }
    }
    degrees
}

fn check_inputs(p: &MultiPoly, rect: &Rectangle, cs: &ConstraintSet) -> Result<()> {
    check_dim(rect.dim(), p.n_vars())?;
    cs.check_dims(rect.dim())
}

/// Appends `-lambda_i <= 0` rows for the multiplier block starting at column 1.
fn add_multiplier_sign_rows(lp: &mut LpProblem, m_i: usize) {
    let n = lp.num_vars();
    for i in 0..m_i {
        let mut row = vec![0.0; n];
        row[1 + i] = -1.0;
        lp.add_le(row, 0.0);
    }
}

/// Reduced relaxation over the vertex classes.
///
/// Variables are `(t, lambda_1..lambda_mI, mu_1..mu_mJ)`; the rows are one per
/// class followed by the `m_I` sign rows `-lambda_i <= 0`.
pub fn build_reduced_lp(p: &MultiPoly, rect: &Rectangle, cs: &ConstraintSet) -> Result<LpProblem> {
    check_inputs(p, rect, cs)?;
    let degrees = lift_degrees(p, cs);
    let lifted = p.with_degrees(&degrees)?;
    let bernstein = bernstein_coefficients(&lifted, rect)?;
    let (m_i, m_j) = (cs.num_inequalities(), cs.num_equalities());
    let n_vars = 1 + m_i + m_j;

    let mut objective = vec![0.0; n_vars];
    objective[0] = 1.0;
    let mut lp = LpProblem::new(Sense::Maximize, objective);
    for (class, q) in bernstein.iter() {
        let mut row = vec![0.0; n_vars];
        row[0] = 1.0;
        for (col, c) in cs.all().enumerate() {
            row[1 + col] = -(lifted_dot(&c.normal, rect, &degrees, &class)? - c.rhs);
        }
        lp.add_le(row, q);
    }
    add_multiplier_sign_rows(&mut lp, m_i);
    Ok(lp)
}

/// Largest lifted vertex count accepted by [`build_full_lp`].
pub const FULL_LP_MAX_EXPONENT: u32 = 20;

/// Unreduced relaxation with one row per vertex of the lifted rectangle and
/// the symmetry multipliers `alpha_{k,l}` for `z_{k,l} - z_{k,l+1} = 0`.
///
/// Variables are `(t, lambda, mu, alpha)`, with `alpha` ordered by variable
/// then position. Only meant as a cross-check of [`build_reduced_lp`].
pub fn build_full_lp(p: &MultiPoly, rect: &Rectangle, cs: &ConstraintSet) -> Result<LpProblem> {
    check_inputs(p, rect, cs)?;
    let degrees = lift_degrees(p, cs);
    let lifted = p.with_degrees(&degrees)?;
    let arity: u32 = degrees.iter().sum();
    if arity > FULL_LP_MAX_EXPONENT {
        return Err(Error::SizeGuard { exponent: arity });
    }
    let (m_i, m_j) = (cs.num_inequalities(), cs.num_equalities());
    let n_alpha: usize = degrees.iter().map(|&d| d.saturating_sub(1) as usize).sum();
    let n_vars = 1 + m_i + m_j + n_alpha;

    // Owner variable of each lifted coordinate.
    let owners: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(k, &d)| std::iter::repeat_n(k, d as usize))
        .collect();
    let arity = arity as usize;

    let mut objective = vec![0.0; n_vars];
    objective[0] = 1.0;
    let mut lp = LpProblem::new(Sense::Maximize, objective);
    let mut v = vec![0.0; arity];
    for mask in 0..1usize << arity {
        for (pos, vp) in v.iter_mut().enumerate() {
            let k = owners[pos];
            *vp = if mask >> (arity - 1 - pos) & 1 == 1 {
                rect.upper()[k]
            } else {
                rect.lower()[k]
            };
        }
        let q = lifted.blossom_eval(&v)?;
        let mut row = vec![0.0; n_vars];
        row[0] = 1.0;
        for (col, c) in cs.all().enumerate() {
            let dot: f64 = v
                .iter()
                .zip(&owners)
                .map(|(vp, &k)| c.normal[k] / f64::from(degrees[k]) * vp)
                .sum();
            row[1 + col] = -(dot - c.rhs);
        }
        let mut col = 1 + m_i + m_j;
        let mut start = 0;
        for &d in &degrees {
            for l in 1..d as usize {
                row[col] = -(v[start + l - 1] - v[start + l]);
                col += 1;
            }
            start += d as usize;
        }
        lp.add_le(row, q);
    }
    add_multiplier_sign_rows(&mut lp, m_i);
    Ok(lp)
}

/// Certified lower bound with the optimal multipliers of the reduced LP.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub d_star: f64,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub status: LpStatus,
}

/// Solves the reduced relaxation. The constrained region must be nonempty.
pub fn lower_bound(p: &MultiPoly, rect: &Rectangle, cs: &ConstraintSet) -> Result<BoundResult> {
    check_inputs(p, rect, cs)?;
    if !cs.is_empty() && cs.feasible_point(rect)?.is_none() {
        return Err(Error::InfeasiblePolytope);
    }
    let lp = build_reduced_lp(p, rect, cs)?;
    let sol = lpsolve::solve(&lp)?;
    match sol.status {
        LpStatus::Optimal => {
            let m_i = cs.num_inequalities();
            Ok(BoundResult {
                d_star: sol.primal[0],
                lambda: sol.primal[1..1 + m_i].iter().map(|l| l.max(0.0)).collect(),
                mu: sol.primal[1 + m_i..].to_vec(),
                status: LpStatus::Optimal,
            })
        }
        // The region was checked nonempty, so the relaxation is bounded.
        status => Err(Error::NumericalFailure(format!(
            "relaxation LP ended with status {status:?} on a feasible region"
        ))),
    }
}

/// `d* - lambda* . alpha - mu* . beta`: a lower bound on the relaxation of
/// the problem with offsets `b + alpha` and `d + beta`, whenever that problem
/// is feasible.
///
/// # Panics
///
/// Panics if `alpha` or `beta` do not match the multiplier lengths.
pub fn sensitivity_bound(res: &BoundResult, alpha: &[f64], beta: &[f64]) -> f64 {
    assert_eq!(res.lambda.len(), alpha.len(), "alpha length");
    assert_eq!(res.mu.len(), beta.len(), "beta length");
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    res.d_star - dot(&res.lambda, alpha) - dot(&res.mu, beta)
}
