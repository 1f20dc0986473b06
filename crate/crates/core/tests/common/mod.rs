#![allow(dead_code)]

use polyvar_core::invariance::{PolytopeTemplate, SynthesisParams, VectorField};
use polyvar_core::{ConstraintSet, MultiPoly, Rectangle};
use proptest::prelude::*;

pub fn var(n: usize, k: usize) -> MultiPoly {
    MultiPoly::variable(n, k)
}

pub fn fitzhugh_nagumo() -> (VectorField, Rectangle, PolytopeTemplate, SynthesisParams) {
    let (x1, x2) = (var(2, 0), var(2, 1));
    let cube = &(&(&x1 * &x1) * &x1) * (1.0 / 3.0);
    let f1 = &(&(&x1 - &cube) - &x2) + &MultiPoly::constant(2, 0.875);
    let f2 = &(&(&x1 * 0.08) + &MultiPoly::constant(2, 0.056)) - &(&x2 * 0.064);
    let field = VectorField::new(vec![f1, f2]).unwrap();
    let rect = Rectangle::new(vec![-2.5, -1.5], vec![2.5, 3.5]).unwrap();
    let normals = PolytopeTemplate::uniform_normals_2d(8);
    let c = [0.0, 0.875];
    let tpl =
        PolytopeTemplate::new(normals.clone(), start_offsets(&normals, &rect, &c, 0.5)).unwrap();
    let params = SynthesisParams::with_defaults(&normals, &rect, &c);
    (field, rect, tpl, params)
}

/// Axis normals followed by the normalized pairwise diagonals.
pub fn eighteen_normals() -> Vec<Vec<f64>> {
    let mut normals = Vec::new();
    for i in 0..3 {
        for s in [1.0, -1.0] {
            let mut a = vec![0.0; 3];
            a[i] = s;
            normals.push(a);
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..3 {
        for j in i + 1..3 {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut a = vec![0.0; 3];
                a[i] = si * h;
                a[j] = sj * h;
                normals.push(a);
            }
        }
    }
    normals
}

pub fn phytoplankton() -> (VectorField, Rectangle, PolytopeTemplate, SynthesisParams) {
    let (x1, x2, x3) = (var(3, 0), var(3, 1), var(3, 2));
    let one = MultiPoly::constant(3, 1.0);
    let f1 = &(&one - &x1) - &(&(&x1 * &x2) * 0.25);
    let f2 = &(&(&x3 * &x2) * 2.0) - &x2;
    let f3 = &(&x1 * 0.25) - &(&(&x3 * &x3) * 2.0);
    let field = VectorField::new(vec![f1, f2, f3]).unwrap();
    let rect = Rectangle::new(vec![0.0, -0.1, 0.0], vec![3.0, 2.0, 0.6]).unwrap();
    let normals = eighteen_normals();
    let c = [1.0, 0.0, 0.125f64.sqrt()];
    let tpl =
        PolytopeTemplate::new(normals.clone(), start_offsets(&normals, &rect, &c, 0.75)).unwrap();
    let params = SynthesisParams::with_defaults(&normals, &rect, &c);
    (field, rect, tpl, params)
}

/// Offsets `a . c + frac (support - a . c)`; `frac = 0.25` is the library default.
pub fn start_offsets(normals: &[Vec<f64>], rect: &Rectangle, c: &[f64], frac: f64) -> Vec<f64> {
    normals
        .iter()
        .map(|a| {
            let at_c: f64 = a.iter().zip(c).map(|(x, y)| x * y).sum();
            at_c + frac * (rect.support(a) - at_c)
        })
        .collect()
}

pub fn constrained_cubic() -> (MultiPoly, Rectangle, ConstraintSet) {
    let p = MultiPoly::from_terms(
        3,
        [
            (vec![1, 1, 1], 1.0),
            (vec![2, 0, 0], 1.0),
            (vec![1, 1, 0], -2.0),
            (vec![1, 0, 1], -3.0),
            (vec![0, 1, 1], 5.0),
            (vec![0, 0, 2], -1.0),
            (vec![0, 1, 0], 5.0),
            (vec![0, 0, 1], 1.0),
        ],
    )
    .unwrap();
    let r = Rectangle::new(vec![2.0, 0.0, 4.0], vec![5.0, 10.0, 8.0]).unwrap();
    let cs = ConstraintSet::new()
        .with_le(vec![4.0, 3.0, 1.0], 20.0)
        .with_ge(vec![1.0, 2.0, 1.0], 1.0);
    (p, r, cs)
}

pub fn quartic() -> (MultiPoly, Rectangle) {
    let p = MultiPoly::from_terms(
        1,
        [
            (vec![4], 1.0),
            (vec![3], -3.0),
            (vec![2], -1.5),
            (vec![1], 10.0),
        ],
    )
    .unwrap();
    (p, Rectangle::new(vec![-5.0], vec![5.0]).unwrap())
}

/// Random polynomial in `n` variables with per-variable degree at most `max_deg`.
pub fn poly(n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, n), -5.0f64..5.0),
        1..=max_terms,
    )
    .prop_map(move |terms| MultiPoly::from_terms(n, terms).unwrap())
}

pub fn multi_affine(n: usize) -> impl Strategy<Value = MultiPoly> {
    poly(n, 1, 1 << n)
}

pub fn rect(n: usize) -> impl Strategy<Value = Rectangle> {
    prop::collection::vec((-3.0f64..3.0, 0.5f64..4.0), n).prop_map(|sides| {
        let lower = sides.iter().map(|s| s.0).collect();
        let upper = sides.iter().map(|s| s.0 + s.1).collect();
        Rectangle::new(lower, upper).unwrap()
    })
}

/// Point with coordinates given as fractions of the rectangle widths.
pub fn at_fraction(r: &Rectangle, t: &[f64]) -> Vec<f64> {
    (0..r.dim())
        .map(|k| r.lower()[k] + t[k] * r.width(k))
        .collect()
}

/// Anchor fractions, `(normal, slack)` inequalities and equality normals.
pub type RawConstraints = (Vec<f64>, Vec<(Vec<f64>, f64)>, Vec<Vec<f64>>);

/// Halfspaces through interior points of `r`, so the region always contains
/// the point at fractions `anchor`; an optional equality through the same
/// point.
pub fn constraints(
    n: usize,
    max_ineq: usize,
    max_eq: usize,
) -> impl Strategy<Value = RawConstraints> {
    (
        prop::collection::vec(0.2f64..0.8, n),
        prop::collection::vec(
            (prop::collection::vec(-2.0f64..2.0, n), 0.0f64..1.0),
            0..=max_ineq,
        ),
        prop::collection::vec(prop::collection::vec(-2.0f64..2.0, n), 0..=max_eq),
    )
}

pub fn build_constraints(
    r: &Rectangle,
    anchor: &[f64],
    ineqs: &[(Vec<f64>, f64)],
    eqs: &[Vec<f64>],
) -> ConstraintSet {
    let x = at_fraction(r, anchor);
    let dot = |a: &[f64]| a.iter().zip(&x).map(|(u, v)| u * v).sum::<f64>();
    let mut cs = ConstraintSet::new();
    for (a, slack) in ineqs {
        if a.iter().any(|v| v.abs() > 1e-3) {
            cs = cs.with_le(a.clone(), dot(a) + slack);
        }
    }
    for a in eqs {
        if a.iter().any(|v| v.abs() > 1e-3) {
            cs = cs.with_eq(a.clone(), dot(a));
        }
    }
    cs
}

/// Fixed case count without on-disk regression files.
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        max_global_rejects: 10_000,
        ..ProptestConfig::default()
    }
}
