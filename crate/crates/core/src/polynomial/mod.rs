//! Sparse multivariate polynomials, their blossoms and Bernstein coordinates
//! over axis-aligned rectangles.

mod bernstein;
mod blossom;
mod rectangle;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{check_dim, Error, Result};

pub use bernstein::{bernstein_coefficients, BernsteinTensor};
pub use rectangle::Rectangle;

/// A multivariate polynomial stored as a sparse map from exponent tuples to
/// coefficients.
///
/// Every polynomial carries a degree vector. It normally equals the maximal
/// exponent of each variable, but it can be padded upward with
/// [`MultiPoly::with_degrees`] so that several polynomials share the same
/// blossom arity and the same Bernstein index set.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    n_vars: usize,
    terms: BTreeMap<Vec<u32>, f64>,
    degrees: Vec<u32>,
}

impl MultiPoly {
    pub fn zero(n_vars: usize) -> Self {
        Self {
            n_vars,
            terms: BTreeMap::new(),
            degrees: vec![0; n_vars],
        }
    }

    pub fn constant(n_vars: usize, c: f64) -> Self {
        let mut p = Self::zero(n_vars);
        if c != 0.0 {
            p.terms.insert(vec![0; n_vars], c);
        }
        p
    }

    /// The coordinate function `x_k`.
    pub fn variable(n_vars: usize, k: usize) -> Self {
        let mut exps = vec![0; n_vars];
        exps[k] = 1;
        Self::from_terms(n_vars, [(exps, 1.0)]).expect("exponent length matches")
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs. Repeated
    /// exponent tuples are summed and zero coefficients are dropped.
    pub fn from_terms<I>(n_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut map: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (exps, coef) in terms {
            check_dim(n_vars, exps.len())?;
            if !coef.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "coefficient of {exps:?} is not finite"
                )));
            }
            *map.entry(exps).or_insert(0.0) += coef;
        }
        map.retain(|_, c| *c != 0.0);
        let degrees = natural_degrees(n_vars, &map);
        Ok(Self {
            n_vars,
            terms: map,
            degrees,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Degree vector, possibly padded above the natural degrees.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// The unpadded degree vector: max exponent of each variable over the terms.
    pub fn natural_degrees(&self) -> Vec<u32> {
        natural_degrees(self.n_vars, &self.terms)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> f64 {
        self.terms.get(exponents).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree at most one in every variable (judged on the natural degrees).
    pub fn is_multi_affine(&self) -> bool {
        self.natural_degrees().iter().all(|&d| d <= 1)
    }

    /// Returns a copy whose degree vector is raised to `degrees`.
    pub fn with_degrees(&self, degrees: &[u32]) -> Result<Self> {
        check_dim(self.n_vars, degrees.len())?;
        let natural = self.natural_degrees();
        for (var, (&requested, &actual)) in degrees.iter().zip(&natural).enumerate() {
            if requested < actual {
                return Err(Error::DegreeTooLow {
                    var,
                    requested,
                    actual,
                });
            }
        }
        let mut p = self.clone();
        p.degrees = degrees.to_vec();
        Ok(p)
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.n_vars, x.len())?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(exps, c)| {
                exps.iter()
                    .zip(x)
                    .fold(*c, |acc, (&e, &xi)| acc * xi.powi(e as i32))
            })
            .sum()
    }

    /// Evaluates the blossom (polar form) at `z`, grouped per variable:
    /// `degrees()[0]` entries for `x_1`, then `degrees()[1]` for `x_2`, and so on.
    pub fn blossom_eval(&self, z: &[f64]) -> Result<f64> {
        blossom::blossom_eval(self, z)
    }

    /// Substitutes `x_k = lower_k + (upper_k - lower_k) * y_k`, returning the
    /// polynomial in `y` over the unit box. Degrees are preserved.
    pub fn to_unit_box(&self, rect: &Rectangle) -> Result<MultiPoly> {
        check_dim(self.n_vars, rect.dim())?;
        let dense = self.unit_box_dense(rect);
        let shape = Shape::new(&self.degrees);
        let terms = shape
            .indices()
            .zip(dense)
            .filter(|(_, c)| *c != 0.0)
            .collect::<BTreeMap<_, _>>();
        Ok(MultiPoly {
            n_vars: self.n_vars,
            terms,
            degrees: self.degrees.clone(),
        })
    }

    /// Dense coefficient tensor (lexicographic layout) of the polynomial after
    /// the affine change of variables onto the unit box.
    pub(crate) fn unit_box_dense(&self, rect: &Rectangle) -> Vec<f64> {
        let shape = Shape::new(&self.degrees);
        let mut dense = vec![0.0; shape.len()];
        // Per variable and exponent l: coefficients of (lower + w y)^l in y.
        let expansions: Vec<Vec<Vec<f64>>> = (0..self.n_vars)
            .map(|k| {
                let (lo, w) = (rect.lower()[k], rect.width(k));
                (0..=self.degrees[k])
                    .map(|l| {
                        (0..=l)
                            .map(|i| binomial(l, i) * lo.powi((l - i) as i32) * w.powi(i as i32))
                            .collect()
                    })
                    .collect()
            })
            .collect();

        for (exps, &c) in &self.terms {
            let factors: Vec<&Vec<f64>> = exps
                .iter()
                .enumerate()
                .map(|(k, &l)| &expansions[k][l as usize])
                .collect();
            let sub = Shape::new(exps);
            for idx in sub.indices() {
                let weight = idx
                    .iter()
                    .zip(&factors)
                    .fold(c, |acc, (&i, f)| acc * f[i as usize]);
                dense[shape.flat(&idx)] += weight;
            }
        }
        dense
    }
}

fn natural_degrees(n_vars: usize, terms: &BTreeMap<Vec<u32>, f64>) -> Vec<u32> {
    let mut deg = vec![0; n_vars];
    for exps in terms.keys() {
        for (d, &e) in deg.iter_mut().zip(exps) {
            *d = (*d).max(e);
        }
    }
    deg
}

fn combine(a: &MultiPoly, b: &MultiPoly, sign: f64) -> MultiPoly {
    assert_eq!(
        a.n_vars, b.n_vars,
        "polynomials live in different dimensions"
    );
    let mut terms = a.terms.clone();
    for (exps, c) in &b.terms {
        *terms.entry(exps.clone()).or_insert(0.0) += sign * c;
    }
    terms.retain(|_, c| *c != 0.0);
    let degrees = a
        .degrees
        .iter()
        .zip(&b.degrees)
        .map(|(x, y)| *x.max(y))
        .collect();
    MultiPoly {
        n_vars: a.n_vars,
        terms,
        degrees,
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        combine(self, rhs, 1.0)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        combine(self, rhs, -1.0)
    }
}

impl Mul<f64> for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: f64) -> MultiPoly {
        let mut p = self.clone();
        p.terms.values_mut().for_each(|c| *c *= rhs);
        p.terms.retain(|_, c| *c != 0.0);
        p
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    /// Product; the degree vector is the sum of the operands' degree vectors.
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(
            self.n_vars, rhs.n_vars,
            "polynomials live in different dimensions"
        );
        let mut terms: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *terms.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        terms.retain(|_, c| *c != 0.0);
        let degrees = self
            .degrees
            .iter()
            .zip(&rhs.degrees)
            .map(|(x, y)| x + y)
            .collect();
        MultiPoly {
            n_vars: self.n_vars,
            terms,
            degrees,
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self * -1.0
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (k, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", k + 1)?,
                    _ => write!(f, "*x{}^{e}", k + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// Returns `-a . f` as a polynomial padded to the unified degree vector of the
/// field (componentwise maximum over all components), so every facet of a
/// template shares the same lifted index set.
pub fn facet_objective(field: &[MultiPoly], a: &[f64]) -> Result<MultiPoly> {
    let n = a.len();
    check_dim(n, field.len())?;
    let mut unified = vec![0u32; n];
    let mut acc = MultiPoly::zero(n);
    for (fj, &aj) in field.iter().zip(a) {
        check_dim(n, fj.n_vars())?;
        for (u, &d) in unified.iter_mut().zip(fj.degrees()) {
            *u = (*u).max(d);
        }
        if aj != 0.0 {
            acc = &acc - &(fj * aj);
        }
    }
    acc.with_degrees(&unified)
}

/// Binomial coefficient as a float; exact for the small degrees used here.
pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Row-major multi-index box `{0..=d_1} x ... x {0..=d_n}` with the last axis
/// varying fastest, so flat order is lexicographic order.
#[derive(Debug, Clone)]
pub(crate) struct Shape {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl Shape {
    pub(crate) fn new(degrees: &[u32]) -> Self {
        let dims: Vec<usize> = degrees.iter().map(|&d| d as usize + 1).collect();
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        Self { dims, strides }
    }

    pub(crate) fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub(crate) fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub(crate) fn flat(&self, idx: &[u32]) -> usize {
        idx.iter()
            .zip(&self.strides)
            .map(|(&i, &s)| i as usize * s)
            .sum()
    }

    pub(crate) fn indices(&self) -> MultiIndexIter {
        MultiIndexIter::new(self.dims.iter().map(|&d| d as u32 - 1).collect())
    }
}

/// Lexicographic iterator over all `l` with `0 <= l_k <= bound_k`.
#[derive(Debug, Clone)]
pub struct MultiIndexIter {
    bounds: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl MultiIndexIter {
    pub fn new(bounds: Vec<u32>) -> Self {
        let next = Some(vec![0; bounds.len()]);
        Self { bounds, next }
    }
}

impl Iterator for MultiIndexIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut k = succ.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            if succ[k] < self.bounds[k] {
                succ[k] += 1;
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(current)
    }
}
