//! Polytopic invariants of polynomial vector fields.
//!
//! A polytope `P = {x : a_k . x <= b_k}` inside a rectangle `R` is invariant
//! for `x' = f(x)` when `-a_k . f >= 0` on every facet. Each facet gets its
//! own relaxation LP; nonnegative bounds on all facets certify invariance.

mod synthesis;

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::lpsolve::{self, LpProblem, LpStatus, Sense};
use crate::polynomial::{facet_objective, MultiPoly, Rectangle};
use crate::relaxation::{lower_bound, ConstraintSet};

pub use synthesis::{
    default_offsets, improve_offsets, repair_offsets, support_offsets, synthesize, Improvement,
    IterationRecord, SynthesisParams, SynthesisStatus, SynthesisTrace,
};

/// Polynomial vector field with one component per state variable.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    components: Vec<MultiPoly>,
}

impl VectorField {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::InvalidParameter(
                "vector field has no components".into(),
            ));
        }
        for c in &components {
            check_dim(n, c.n_vars())?;
        }
        Ok(Self { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    /// Componentwise maximum of the degree vectors.
    pub fn unified_degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.dim()];
        for c in &self.components {
            for (u, &e) in d.iter_mut().zip(c.degrees()) {
                *u = (*u).max(e);
            }
        }
        d
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        Ok(self
            .components
            .iter()
            .map(|c| c.eval_unchecked(x))
            .collect())
    }
}

/// Fixed facet normals with adjustable offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeTemplate {
    normals: Vec<Vec<f64>>,
    offsets: Vec<f64>,
}

impl PolytopeTemplate {
    pub fn new(normals: Vec<Vec<f64>>, offsets: Vec<f64>) -> Result<Self> {
        if normals.is_empty() {
            return Err(Error::InvalidTemplate("template has no facets".into()));
        }
        check_dim(normals.len(), offsets.len())?;
        let n = normals[0].len();
        for (k, a) in normals.iter().enumerate() {
            check_dim(n, a.len())?;
            if a.iter().any(|v| !v.is_finite()) || a.iter().all(|&v| v == 0.0) {
                return Err(Error::InvalidTemplate(format!(
                    "normal {k} must be finite and nonzero"
                )));
            }
        }
        if offsets.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidTemplate("offsets must be finite".into()));
        }
        Ok(Self { normals, offsets })
    }

    /// `m` planar normals at angles `2 pi k / m`.
    pub fn uniform_normals_2d(m: usize) -> Vec<Vec<f64>> {
        let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
        (0..m)
            .map(|k| {
                let theta = 2.0 * PI * k as f64 / m as f64;
                vec![snap(theta.cos()), snap(theta.sin())]
            })
            .collect()
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn num_facets(&self) -> usize {
        self.normals.len()
    }

    pub fn dim(&self) -> usize {
        self.normals[0].len()
    }

    /// Same normals, new offsets.
    pub fn with_offsets(&self, offsets: Vec<f64>) -> Result<Self> {
        Self::new(self.normals.clone(), offsets)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.normals
            .iter()
            .zip(&self.offsets)
            .all(|(a, &b)| dot(a, x) <= b + tol)
    }

    /// All halfspaces as `<=` rows.
    pub fn constraints(&self) -> ConstraintSet {
        self.normals
            .iter()
            .zip(&self.offsets)
            .fold(ConstraintSet::new(), |cs, (a, &b)| cs.with_le(a.clone(), b))
    }

    /// Facet `k` as an equality with every other halfspace as an inequality.
    pub fn facet_constraints(&self, k: usize) -> ConstraintSet {
        let mut cs = ConstraintSet::new();
        for (i, (a, &b)) in self.normals.iter().zip(&self.offsets).enumerate() {
            if i != k {
                cs = cs.with_le(a.clone(), b);
            }
        }
        cs.with_eq(self.normals[k].clone(), self.offsets[k])
    }

    /// Whether the polytope lies in `rect`, by maximizing each coordinate
    /// over the polytope. An empty polytope counts as contained.
    pub fn is_within(&self, rect: &Rectangle) -> Result<bool> {
        let n = self.dim();
        check_dim(n, rect.dim())?;
        let tol = 1e-9
            * (1.0
                + rect
                    .lower()
                    .iter()
                    .chain(rect.upper())
                    .fold(0.0f64, |m, v| m.max(v.abs())));
        for k in 0..n {
            for sign in [1.0, -1.0] {
                let mut c = vec![0.0; n];
                c[k] = sign;
                let mut lp = LpProblem::new(Sense::Maximize, c);
                for (a, &b) in self.normals.iter().zip(&self.offsets) {
                    lp.add_le(a.clone(), b);
                }
                let sol = lpsolve::solve(&lp)?;
                match sol.status {
                    LpStatus::Infeasible => return Ok(true),
                    LpStatus::Unbounded => return Ok(false),
                    LpStatus::Optimal => {
                        let limit = if sign > 0.0 {
                            rect.upper()[k]
                        } else {
                            -rect.lower()[k]
                        };
                        if sol.objective > limit + tol {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Whether facet `k` meets the rectangle, decided by a phase-one LP.
pub fn facet_nonempty(tpl: &PolytopeTemplate, rect: &Rectangle, k: usize) -> Result<bool> {
    if k >= tpl.num_facets() {
        return Err(Error::InvalidParameter(format!(
            "facet index {k} out of range for {} facets",
            tpl.num_facets()
        )));
    }
    Ok(tpl.facet_constraints(k).feasible_point(rect)?.is_some())
}

#[derive(Debug, Clone, PartialEq)]
pub enum FacetStatus {
    Bounded,
    /// The facet does not meet the rectangle.
    Empty,
    /// The facet LP broke down; the message is the solver error.
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FacetReport {
    pub status: FacetStatus,
    /// Lower bound on `min -a_k . f` over the facet.
    pub d_star: Option<f64>,
    /// Multipliers for all `m_K` template rows; entry `k` belongs to the
    /// facet equality and may have either sign.
    pub lambda: Vec<f64>,
}

impl FacetReport {
    pub fn feasible(&self) -> bool {
        self.status != FacetStatus::Empty
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub facets: Vec<FacetReport>,
}

impl VerificationReport {
    /// Certified invariant: every facet nonempty with a nonnegative bound.
    pub fn is_invariant(&self) -> bool {
        self.facets
            .iter()
            .all(|f| f.status == FacetStatus::Bounded && f.d_star.is_some_and(|d| d >= 0.0))
    }

    pub fn min_bound(&self) -> Option<f64> {
        self.facets
            .iter()
            .filter_map(|f| f.d_star)
            .fold(None, |m, d| Some(m.map_or(d, |m: f64| m.min(d))))
    }
}

fn verify_facet(
    field: &VectorField,
    rect: &Rectangle,
    tpl: &PolytopeTemplate,
    k: usize,
) -> FacetReport {
    let failed = |e: Error| FacetReport {
        status: FacetStatus::Failed(e.to_string()),
        d_star: None,
        lambda: Vec::new(),
    };
    let q = match facet_objective(field.components(), &tpl.normals()[k]) {
        Ok(q) => q,
        Err(e) => return failed(e),
    };
    match lower_bound(&q, rect, &tpl.facet_constraints(k)) {
        Ok(res) => {
            let mut lambda = res.lambda;
            lambda.insert(k, res.mu[0]);
            FacetReport {
                status: FacetStatus::Bounded,
                d_star: Some(res.d_star),
                lambda,
            }
        }
        Err(Error::InfeasiblePolytope) => FacetReport {
            status: FacetStatus::Empty,
            d_star: None,
            lambda: Vec::new(),
        },
        Err(e) => failed(e),
    }
}

/// Solves one relaxation per facet (in parallel) and collects the bounds.
///
/// Fails only on malformed input or when the polytope is not contained in
/// `rect`; per-facet solver trouble is recorded in the report.
pub fn verify(
    field: &VectorField,
    rect: &Rectangle,
    tpl: &PolytopeTemplate,
) -> Result<VerificationReport> {
    check_dim(field.dim(), rect.dim())?;
    check_dim(field.dim(), tpl.dim())?;
    if !tpl.is_within(rect)? {
        return Err(Error::InvalidTemplate(
            "polytope is not contained in the rectangle".into(),
        ));
    }
    let facets = (0..tpl.num_facets())
        .into_par_iter()
        .map(|k| verify_facet(field, rect, tpl, k))
        .collect();
    Ok(VerificationReport { facets })
}
