use super::{binomial, MultiPoly};
use crate::error::{check_dim, Result};

/// Elementary symmetric polynomials `e_0..=e_m` of `z` (with `m = z.len()`).
fn elementary_symmetric(z: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; z.len() + 1];
    e[0] = 1.0;
    for (i, &zi) in z.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            e[j] += zi * e[j - 1];
        }
    }
    e
}

/// `q(z) = sum_l p_l prod_k e_{l_k}(z_k) / C(delta_k, l_k)`.
///
/// The normalized symmetric sums are computed by recurrence, so the cost is
/// quadratic in the degrees instead of enumerating every combination.
pub(super) fn blossom_eval(p: &MultiPoly, z: &[f64]) -> Result<f64> {
    let degrees = p.degrees();
    let arity: usize = degrees.iter().map(|&d| d as usize).sum();
    check_dim(arity, z.len())?;

    let mut offset = 0;
    let normalized: Vec<Vec<f64>> = degrees
        .iter()
        .map(|&d| {
            let group = &z[offset..offset + d as usize];
            offset += d as usize;
            elementary_symmetric(group)
                .into_iter()
                .enumerate()
                .map(|(l, e)| e / binomial(d, l as u32))
                .collect()
        })
        .collect();

    Ok(p.terms()
        .map(|(exps, c)| {
            exps.iter()
                .zip(&normalized)
                .fold(c, |acc, (&l, b)| acc * b[l as usize])
        })
        .sum())
}
