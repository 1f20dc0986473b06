//! Brute-force references: dense grid sampling and rectangle-vertex
//! minimization. They share no code with the relaxation and serve as
//! independent checks on it.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::invariance::PolytopeTemplate;
use crate::lpsolve::{self, LpProblem, LpStatus, Sense};
use crate::polynomial::{MultiPoly, Rectangle};
use crate::relaxation::ConstraintSet;

const EQ_TOL: f64 = 1e-6;
const INEQ_TOL: f64 = 1e-9;

/// Minimum of `p` over a regular grid with `steps_per_axis` points per axis
/// (endpoints included), restricted to points that satisfy the constraints.
///
/// Grid points are first projected onto the affine subspace of the equality
/// constraints. Ties keep the earliest grid point in lexicographic order.
pub fn grid_min(
    p: &MultiPoly,
    rect: &Rectangle,
    cs: &ConstraintSet,
    steps_per_axis: usize,
) -> Result<(f64, Vec<f64>)> {
    let n = rect.dim();
    check_dim(n, p.n_vars())?;
    cs.check_dims(n)?;
    if steps_per_axis < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least 2 steps per axis, got {steps_per_axis}"
        )));
    }
    let total = steps_per_axis
        .checked_pow(n as u32)
        .ok_or_else(|| Error::InvalidParameter("grid too large".into()))?;
    let projector = EqualityProjector::new(cs, n);

    let best = (0..total)
        .into_par_iter()
        .filter_map(|flat| {
            let mut x = grid_point(rect, steps_per_axis, flat);
            if let Some(proj) = &projector {
                x = proj.project(&x);
                if !rect.contains(&x, INEQ_TOL) {
                    return None;
                }
            }
            let feasible = cs
                .inequalities
                .iter()
                .all(|c| dot(&c.normal, &x) <= c.rhs + INEQ_TOL)
                && cs
                    .equalities
                    .iter()
                    .all(|c| (dot(&c.normal, &x) - c.rhs).abs() <= EQ_TOL);
            feasible.then(|| (p.eval_unchecked(&x), flat, x))
        })
        .reduce_with(|a, b| {
            if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        });
    best.map(|(v, _, x)| (v, x)).ok_or(Error::NoFeasibleSample)
}

fn grid_point(rect: &Rectangle, steps: usize, mut flat: usize) -> Vec<f64> {
    let n = rect.dim();
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let i = flat % steps;
        flat /= steps;
        let frac = i as f64 / (steps - 1) as f64;
        x[k] = if i == steps - 1 {
            rect.upper()[k]
        } else {
            rect.lower()[k] + frac * rect.width(k)
        };
    }
    x
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonal projection onto `{x : C x = d}` through the pseudo-inverse.
struct EqualityProjector {
    c: DMatrix<f64>,
    d: DVector<f64>,
    correction: DMatrix<f64>,
}

impl EqualityProjector {
    fn new(cs: &ConstraintSet, n: usize) -> Option<Self> {
        if cs.equalities.is_empty() {
            return None;
        }
        let m = cs.equalities.len();
        let c = DMatrix::from_fn(m, n, |i, j| cs.equalities[i].normal[j]);
        let d = DVector::from_iterator(m, cs.equalities.iter().map(|e| e.rhs));
        let gram = &c * c.transpose();
        let pinv = gram
            .pseudo_inverse(1e-12)
            .expect("pseudo-inverse with nonnegative epsilon");
        let correction = c.transpose() * pinv;
        Some(Self { c, d, correction })
    }

    fn project(&self, x: &[f64]) -> Vec<f64> {
        let xv = DVector::from_column_slice(x);
        let residual = &self.c * &xv - &self.d;
        (xv - &self.correction * residual).iter().copied().collect()
    }
}

/// Largest dimension accepted by [`vertex_min`].
pub const VERTEX_MIN_MAX_DIM: usize = 24;

/// Minimum of a multi-affine `p` over the `2^n` vertices of `rect`, which is
/// also its minimum over the whole rectangle. Ties keep the lexicographically
/// smallest vertex.
pub fn vertex_min(p: &MultiPoly, rect: &Rectangle) -> Result<(f64, Vec<f64>)> {
    check_dim(rect.dim(), p.n_vars())?;
    if let Some((var, &degree)) = p.natural_degrees().iter().enumerate().find(|(_, &d)| d > 1) {
        return Err(Error::NotMultiAffine { var, degree });
    }
    if rect.dim() > VERTEX_MIN_MAX_DIM {
        return Err(Error::TooManyVertices { n: rect.dim() });
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for v in rect.vertices() {
        let value = p.eval_unchecked(&v);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, v));
        }
    }
    Ok(best.expect("a rectangle has at least one vertex"))
}

/// Up to `count` random points of facet `k` of `tpl` within `rect`.
///
/// Points are drawn uniformly from the bounding box of the facet, projected
/// onto its hyperplane and kept when they satisfy every other halfspace and
/// the rectangle to within `1e-9`. Returns fewer points only when
/// `1000 * count` draws were not enough, and none for an empty facet.
pub fn sample_facet<R: Rng + ?Sized>(
    tpl: &PolytopeTemplate,
    rect: &Rectangle,
    k: usize,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    let n = tpl.dim();
    check_dim(n, rect.dim())?;
    if k >= tpl.num_facets() {
        return Err(Error::InvalidParameter(format!("no facet {k}")));
    }
    let cs = tpl.facet_constraints(k);
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    for j in 0..n {
        for (sign, slot) in [(1.0, &mut hi), (-1.0, &mut lo)] {
            let mut c = vec![0.0; n];
            c[j] = sign;
            let mut lp = LpProblem::new(Sense::Maximize, c);
            for i in 0..n {
                lp.set_bounds(i, rect.lower()[i], rect.upper()[i]);
            }
            for r in &cs.inequalities {
                lp.add_le(r.normal.clone(), r.rhs);
            }
            for r in &cs.equalities {
                lp.add_eq(r.normal.clone(), r.rhs);
            }
            let sol = lpsolve::solve(&lp)?;
            match sol.status {
                LpStatus::Optimal => slot[j] = sign * sol.objective,
                _ => return Ok(Vec::new()),
            }
        }
    }

    let a = &tpl.normals()[k];
    let b = tpl.offsets()[k];
    let norm2 = dot(a, a);
    let mut points = Vec::with_capacity(count);
    for _ in 0..count.saturating_mul(1000) {
        if points.len() == count {
            break;
        }
        let mut x: Vec<f64> = (0..n)
            .map(|j| {
                if hi[j] > lo[j] {
                    rng.gen_range(lo[j]..=hi[j])
                } else {
                    lo[j]
                }
            })
            .collect();
        let shift = (dot(a, &x) - b) / norm2;
        x.iter_mut().zip(a).for_each(|(xi, ai)| *xi -= shift * ai);
        if rect.contains(&x, 1e-9) && cs.satisfied_by(&x, 1e-9) {
            points.push(x);
        }
    }
    Ok(points)
}
