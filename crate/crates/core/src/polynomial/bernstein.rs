use super::{binomial, MultiIndexIter, MultiPoly, Rectangle, Shape};
use crate::error::{check_dim, Result};

/// Bernstein coordinates of a polynomial over a rectangle, indexed by the
/// vertex classes `l = (l_1, ..., l_n)`, `0 <= l_k <= degrees[k]`.
///
/// The entry for `l` is the blossom evaluated at any lifted vertex carrying
/// `l_k` copies of `upper_k` and `degrees[k] - l_k` copies of `lower_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinTensor {
    rectangle: Rectangle,
    degrees: Vec<u32>,
    values: Vec<f64>,
}

impl BernsteinTensor {
    pub fn rectangle(&self) -> &Rectangle {
        &self.rectangle
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Values in lexicographic class order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, class: &[u32]) -> Option<f64> {
        if class.len() != self.degrees.len() || class.iter().zip(&self.degrees).any(|(l, d)| l > d)
        {
            return None;
        }
        Some(self.values[Shape::new(&self.degrees).flat(class)])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<u32>, f64)> + '_ {
        MultiIndexIter::new(self.degrees.clone()).zip(self.values.iter().copied())
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Evaluates the Bernstein expansion at `x`, which reproduces the
    /// original polynomial.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.degrees.len(), x.len())?;
        let basis: Vec<Vec<f64>> = self
            .degrees
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                let y = (x[k] - self.rectangle.lower()[k]) / self.rectangle.width(k);
                (0..=d)
                    .map(|l| binomial(d, l) * y.powi(l as i32) * (1.0 - y).powi((d - l) as i32))
                    .collect()
            })
            .collect();
        Ok(self
            .iter()
            .map(|(class, q)| {
                class
                    .iter()
                    .zip(&basis)
                    .fold(q, |acc, (&l, b)| acc * b[l as usize])
            })
            .sum())
    }

    /// Lifted vertex representing `class`: per variable, `l_k` copies of the
    /// upper bound followed by the remaining copies of the lower bound.
    pub fn representative(&self, class: &[u32]) -> Vec<f64> {
        class_representative(&self.rectangle, &self.degrees, class)
    }
}

pub(crate) fn class_representative(rect: &Rectangle, degrees: &[u32], class: &[u32]) -> Vec<f64> {
    let mut z = Vec::with_capacity(degrees.iter().map(|&d| d as usize).sum());
    for (k, (&d, &l)) in degrees.iter().zip(class).enumerate() {
        z.extend(std::iter::repeat_n(rect.upper()[k], l as usize));
        z.extend(std::iter::repeat_n(rect.lower()[k], (d - l) as usize));
    }
    z
}

/// Computes the Bernstein coordinates of `p` over `rect` using the degree
/// vector carried by `p`.
///
/// The polynomial is first rescaled to the unit box, then each axis is
/// converted from the monomial to the Bernstein basis with
/// `b_l = sum_{i <= l} C(l, i) / C(d, i) c_i`, one axis at a time.
pub fn bernstein_coefficients(p: &MultiPoly, rect: &Rectangle) -> Result<BernsteinTensor> {
    check_dim(p.n_vars(), rect.dim())?;
    let degrees = p.degrees().to_vec();
    let shape = Shape::new(&degrees);
    let mut values = p.unit_box_dense(rect);

    let mut fiber = Vec::new();
    for (axis, &d) in degrees.iter().enumerate() {
        if d == 0 {
            continue;
        }
        let len = shape.dims()[axis];
        let stride = shape.strides()[axis];
        let weights: Vec<Vec<f64>> = (0..=d)
            .map(|l| (0..=l).map(|i| binomial(l, i) / binomial(d, i)).collect())
            .collect();
        // Fiber starts are flat indices whose coordinate on `axis` is zero.
        for start in (0..values.len()).filter(|i| (i / stride).is_multiple_of(len)) {
            fiber.clear();
            fiber.extend((0..len).map(|j| values[start + j * stride]));
            for (l, w) in weights.iter().enumerate() {
                values[start + l * stride] = w.iter().zip(&fiber).map(|(w, c)| w * c).sum();
            }
        }
    }

    Ok(BernsteinTensor {
        rectangle: rect.clone(),
        degrees,
        values,
    })
}
