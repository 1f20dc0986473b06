//! Vertex enumeration for planar polytopes given as halfspaces.

use crate::error::{Error, Result};

/// Vertices of `{x in R^2 : a_k . x <= b_k}` in counterclockwise order.
///
/// Every pair of non-parallel boundary lines is intersected and the
/// intersection kept if it satisfies all halfspaces; coincident points are
/// merged. Returns an empty list for an empty polygon. An unbounded region
/// yields only its finite corners, so callers should check boundedness first.
pub fn polygon_vertices(normals: &[Vec<f64>], offsets: &[f64]) -> Result<Vec<[f64; 2]>> {
    if normals.len() != offsets.len() {
        return Err(Error::DimensionMismatch {
            expected: normals.len(),
            found: offsets.len(),
        });
    }
    if let Some(a) = normals.iter().find(|a| a.len() != 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: a.len(),
        });
    }
    let scale = 1.0 + offsets.iter().fold(0.0f64, |m, b| m.max(b.abs()));
    let tol = 1e-9 * scale;

    let mut points: Vec<[f64; 2]> = Vec::new();
    for i in 0..normals.len() {
        for j in i + 1..normals.len() {
            let (a, b) = (&normals[i], &normals[j]);
            let det = a[0] * b[1] - a[1] * b[0];
            let norm = (a[0].hypot(a[1])) * (b[0].hypot(b[1]));
            if det.abs() <= 1e-12 * norm {
                continue;
            }
            let x = (offsets[i] * b[1] - offsets[j] * a[1]) / det;
            let y = (a[0] * offsets[j] - b[0] * offsets[i]) / det;
            let inside = normals
                .iter()
                .zip(offsets)
                .all(|(n, &o)| n[0] * x + n[1] * y <= o + tol);
            if inside && !points.iter().any(|p| (p[0] - x).hypot(p[1] - y) <= tol) {
                points.push([x, y]);
            }
        }
    }
    if points.len() < 3 {
        return Ok(points);
    }
    let cx = points.iter().map(|p| p[0]).sum::<f64>() / points.len() as f64;
    let cy = points.iter().map(|p| p[1]).sum::<f64>() / points.len() as f64;
    points.sort_by(|p, q| {
        let ap = (p[1] - cy).atan2(p[0] - cx);
        let aq = (q[1] - cy).atan2(q[0] - cx);
        ap.total_cmp(&aq)
    });
    Ok(points)
}

/// Twice the signed area; positive for counterclockwise order.
pub fn signed_area2(points: &[[f64; 2]]) -> f64 {
    (0..points.len())
        .map(|i| {
            let p = points[i];
            let q = points[(i + 1) % points.len()];
            p[0] * q[1] - p[1] * q[0]
        })
        .sum()
}
