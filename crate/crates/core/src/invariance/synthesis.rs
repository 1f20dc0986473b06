use super::{verify, FacetStatus, PolytopeTemplate, VectorField, VerificationReport};
use crate::error::{check_dim, Error, Result};
use crate::lpsolve::{self, LpProblem, LpStatus, Sense};
use crate::polynomial::Rectangle;

/// Offset-update limits for [`synthesize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisParams {
    /// Maximal change of any offset per iteration.
    pub epsilon: f64,
    /// Offsets never drop below these (keeps a reference point inside).
    pub b_lo: Vec<f64>,
    /// Offsets never exceed these (keeps the polytope inside the rectangle).
    pub b_hi: Vec<f64>,
    pub max_iter: usize,
    pub stall_tol: f64,
}

impl SynthesisParams {
    /// `epsilon` is 5% of the shortest side of `rect`, `b_hi` the support of
    /// `rect`, and `b_lo` the offsets through `reference`.
    pub fn with_defaults(normals: &[Vec<f64>], rect: &Rectangle, reference: &[f64]) -> Self {
        Self {
            epsilon: 0.05 * rect.shortest_side(),
            b_lo: normals.iter().map(|a| dot(a, reference)).collect(),
            b_hi: support_offsets(normals, rect),
            max_iter: 50,
            stall_tol: 1e-9,
        }
    }

    fn validate(&self, m: usize) -> Result<()> {
        check_dim(m, self.b_lo.len())?;
        check_dim(m, self.b_hi.len())?;
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        if self.stall_tol.is_nan() || self.stall_tol < 0.0 {
            return Err(Error::InvalidParameter(
                "stall_tol must be nonnegative".into(),
            ));
        }
        if self.b_lo.iter().zip(&self.b_hi).any(|(lo, hi)| lo > hi) {
            return Err(Error::InvalidParameter("b_lo exceeds b_hi".into()));
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `max_{x in rect} a_k . x` for every normal.
pub fn support_offsets(normals: &[Vec<f64>], rect: &Rectangle) -> Vec<f64> {
    normals.iter().map(|a| rect.support(a)).collect()
}

/// Starting offsets a quarter of the way from `reference` to the rectangle
/// support in each normal direction.
pub fn default_offsets(normals: &[Vec<f64>], rect: &Rectangle, reference: &[f64]) -> Vec<f64> {
    normals
        .iter()
        .map(|a| {
            let at_ref = dot(a, reference);
            at_ref + 0.25 * (rect.support(a) - at_ref)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Improvement {
    /// Guaranteed lower bound on the smallest facet bound after the update.
    pub t: f64,
    pub alpha: Vec<f64>,
}

/// Chooses the offset change `alpha` maximizing the worst first-order facet
/// bound `d_k - lambda_k . alpha`, with each `alpha_k` confined to
/// `[max(-eps, b_lo_k - b_k), min(eps, b_hi_k - b_k)]`.
///
/// Empty facets impose no row. A facet whose LP failed makes the report
/// unusable.
pub fn improve_offsets(
    report: &VerificationReport,
    tpl: &PolytopeTemplate,
    epsilon: f64,
    b_lo: &[f64],
    b_hi: &[f64],
) -> Result<Improvement> {
    let m = tpl.num_facets();
    check_dim(m, report.facets.len())?;
    check_dim(m, b_lo.len())?;
    check_dim(m, b_hi.len())?;

    let mut objective = vec![0.0; m + 1];
    objective[0] = 1.0;
    let mut lp = LpProblem::new(Sense::Maximize, objective);
    for (k, &b) in tpl.offsets().iter().enumerate() {
        let mut lo = (-epsilon).max(b_lo[k] - b);
        let mut hi = epsilon.min(b_hi[k] - b);
        if lo > hi {
            // Offsets drifted past a limit by round-off; pin the step.
            let mid = 0.5 * (lo + hi);
            lo = mid;
            hi = mid;
        }
        lp.set_bounds(k + 1, lo, hi);
    }
    let mut rows = 0;
    for (k, facet) in report.facets.iter().enumerate() {
        match (&facet.status, facet.d_star) {
            (FacetStatus::Bounded, Some(d)) => {
                let mut row = Vec::with_capacity(m + 1);
                row.push(1.0);
                row.extend_from_slice(&facet.lambda);
                lp.add_le(row, d);
                rows += 1;
            }
            (FacetStatus::Empty, _) => {}
            _ => return Err(Error::IncompleteReport { facet: k }),
        }
    }
    if rows == 0 {
        return Err(Error::IncompleteReport { facet: 0 });
    }
    let sol = lpsolve::solve(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(Improvement {
            t: sol.primal[0],
            alpha: sol.primal[1..].to_vec(),
        }),
        status => Err(Error::NumericalFailure(format!(
            "offset improvement LP ended with status {status:?}"
        ))),
    }
}

/// Tightens every offset to the support of the polytope (clipped to `rect`)
/// in its normal direction. The set is unchanged and no facet is left empty.
pub fn repair_offsets(tpl: &PolytopeTemplate, rect: &Rectangle) -> Result<Vec<f64>> {
    let n = tpl.dim();
    check_dim(n, rect.dim())?;
    let cs = tpl.constraints();
    if cs.feasible_point(rect)?.is_none() {
        return Err(Error::EmptyPolytope);
    }
    tpl.normals()
        .iter()
        .map(|a| {
            let mut lp = LpProblem::new(Sense::Maximize, a.clone());
            for k in 0..n {
                lp.set_bounds(k, rect.lower()[k], rect.upper()[k]);
            }
            for c in &cs.inequalities {
                lp.add_le(c.normal.clone(), c.rhs);
            }
            let sol = lpsolve::solve(&lp)?;
            match sol.status {
                LpStatus::Optimal => Ok(sol.objective),
                LpStatus::Infeasible => Err(Error::EmptyPolytope),
                LpStatus::Unbounded => Err(Error::NumericalFailure(
                    "support LP over a bounded region is unbounded".into(),
                )),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthesisStatus {
    InvariantFound,
    IterationLimit,
    Stalled,
}

/// One verification round and the update that followed it.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// Offsets that were verified.
    pub offsets: Vec<f64>,
    pub bounds: Vec<Option<f64>>,
    /// Optimal value of the improvement LP, when one was solved.
    pub improvement: Option<f64>,
    pub alpha: Option<Vec<f64>>,
    /// Whether repair moved any offset after applying `alpha`.
    pub repaired: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisTrace {
    pub iterations: Vec<IterationRecord>,
    pub status: SynthesisStatus,
    pub final_offsets: Vec<f64>,
    pub final_report: VerificationReport,
}

/// Alternates verification and sensitivity-driven offset updates until the
/// polytope is certified, the iteration budget runs out, or the improvement
/// bound stops increasing for three consecutive rounds.
///
/// The initial offsets are repaired before the first round.
pub fn synthesize(
    field: &VectorField,
    rect: &Rectangle,
    tpl0: &PolytopeTemplate,
    params: &SynthesisParams,
) -> Result<SynthesisTrace> {
    let m = tpl0.num_facets();
    check_dim(field.dim(), tpl0.dim())?;
    params.validate(m)?;

    let mut tpl = tpl0.with_offsets(repair_offsets(tpl0, rect)?)?;
    let mut iterations = Vec::new();
    let mut best_t = f64::NEG_INFINITY;
    let mut stale = 0;

    for iter in 1..=params.max_iter {
        let report = verify(field, rect, &tpl)?;
        let bounds = report.facets.iter().map(|f| f.d_star).collect();
        let finish = |status, iterations, tpl: &PolytopeTemplate, report| SynthesisTrace {
            iterations,
            status,
            final_offsets: tpl.offsets().to_vec(),
            final_report: report,
        };
        if report.is_invariant() || iter == params.max_iter {
            iterations.push(IterationRecord {
                offsets: tpl.offsets().to_vec(),
                bounds,
                improvement: None,
                alpha: None,
                repaired: false,
            });
            let status = if report.is_invariant() {
                SynthesisStatus::InvariantFound
            } else {
                SynthesisStatus::IterationLimit
            };
            return Ok(finish(status, iterations, &tpl, report));
        }

        let step = improve_offsets(&report, &tpl, params.epsilon, &params.b_lo, &params.b_hi)?;
        let moved: Vec<f64> = tpl
            .offsets()
            .iter()
            .zip(&step.alpha)
            .map(|(b, a)| b + a)
            .collect();
        let moved_tpl = tpl.with_offsets(moved.clone())?;
        let repaired = repair_offsets(&moved_tpl, rect)?;
        let changed = repaired
            .iter()
            .zip(&moved)
            .any(|(r, b)| (r - b).abs() > 1e-12 * (1.0 + b.abs()));
        iterations.push(IterationRecord {
            offsets: tpl.offsets().to_vec(),
            bounds,
            improvement: Some(step.t),
            alpha: Some(step.alpha),
            repaired: changed,
        });

        if step.t > best_t + params.stall_tol {
            best_t = step.t;
            stale = 0;
        } else {
            stale += 1;
        }
        tpl = moved_tpl.with_offsets(repaired)?;
        if stale >= 3 {
            let report = verify(field, rect, &tpl)?;
            return Ok(finish(SynthesisStatus::Stalled, iterations, &tpl, report));
        }
    }
    unreachable!("the final iteration always returns")
}
