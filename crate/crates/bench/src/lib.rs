//! Fixtures shared by the benchmarks.

use polyvar_core::invariance::default_offsets;
use polyvar_core::{
    ConstraintSet, MultiPoly, PolytopeTemplate, Rectangle, SynthesisParams, VectorField,
};

pub struct Problem {
    pub p: MultiPoly,
    pub rect: Rectangle,
    pub constraints: ConstraintSet,
}

pub struct Model {
    pub field: VectorField,
    pub rect: Rectangle,
    pub template: PolytopeTemplate,
    pub params: SynthesisParams,
}

/// Cubic in three variables over a box cut by one `<=` and one `>=`.
pub fn constrained_cubic() -> Problem {
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
    Problem {
        p,
        rect: Rectangle::new(vec![2.0, 0.0, 4.0], vec![5.0, 10.0, 8.0]).unwrap(),
        constraints: ConstraintSet::new()
            .with_le(vec![4.0, 3.0, 1.0], 20.0)
            .with_ge(vec![1.0, 2.0, 1.0], 1.0),
    }
}

/// Univariate quartic on `[-5, 5]`.
pub fn quartic() -> Problem {
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
    Problem {
        p,
        rect: Rectangle::new(vec![-5.0], vec![5.0]).unwrap(),
        constraints: ConstraintSet::new(),
    }
}

/// Offsets a fraction `frac` of the way from `a . c` to the support of `rect`.
fn offsets_at(normals: &[Vec<f64>], rect: &Rectangle, c: &[f64], frac: f64) -> Vec<f64> {
    normals
        .iter()
        .map(|a| {
            let at_c: f64 = a.iter().zip(c).map(|(x, y)| x * y).sum();
            at_c + frac * (rect.support(a) - at_c)
        })
        .collect()
}

fn model(
    field: VectorField,
    rect: Rectangle,
    normals: Vec<Vec<f64>>,
    c: &[f64],
    frac: f64,
) -> Model {
    let offsets = offsets_at(&normals, &rect, c, frac);
    let params = SynthesisParams::with_defaults(&normals, &rect, c);
    Model {
        field,
        rect,
        template: PolytopeTemplate::new(normals, offsets).unwrap(),
        params,
    }
}

pub fn fitzhugh_nagumo() -> Model {
    let x1 = MultiPoly::variable(2, 0);
    let x2 = MultiPoly::variable(2, 1);
    let cube = &(&(&x1 * &x1) * &x1) * (1.0 / 3.0);
    let f1 = &(&(&x1 - &cube) - &x2) + &MultiPoly::constant(2, 0.875);
    let f2 = &(&(&x1 * 0.08) + &MultiPoly::constant(2, 0.056)) - &(&x2 * 0.064);
    model(
        VectorField::new(vec![f1, f2]).unwrap(),
        Rectangle::new(vec![-2.5, -1.5], vec![2.5, 3.5]).unwrap(),
        PolytopeTemplate::uniform_normals_2d(8),
        &[0.0, 0.875],
        0.5,
    )
}

/// Axis directions and normalized pairwise diagonals in three dimensions.
pub fn eighteen_normals() -> Vec<Vec<f64>> {
    let mut normals = Vec::with_capacity(18);
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

pub fn phytoplankton() -> Model {
    let x1 = MultiPoly::variable(3, 0);
    let x2 = MultiPoly::variable(3, 1);
    let x3 = MultiPoly::variable(3, 2);
    let one = MultiPoly::constant(3, 1.0);
    let f1 = &(&one - &x1) - &(&(&x1 * &x2) * 0.25);
    let f2 = &(&(&x3 * &x2) * 2.0) - &x2;
    let f3 = &(&x1 * 0.25) - &(&(&x3 * &x3) * 2.0);
    model(
        VectorField::new(vec![f1, f2, f3]).unwrap(),
        Rectangle::new(vec![0.0, -0.1, 0.0], vec![3.0, 2.0, 0.6]).unwrap(),
        eighteen_normals(),
        &[1.0, 0.0, 0.125f64.sqrt()],
        0.75,
    )
}

/// The library's default starting template for `m`, for comparison runs.
pub fn with_default_start(m: &Model, reference: &[f64]) -> PolytopeTemplate {
    let normals = m.template.normals().to_vec();
    let offsets = default_offsets(&normals, &m.rect, reference);
    PolytopeTemplate::new(normals, offsets).unwrap()
}
