use super::{LpProblem, FEAS_TOL, PIVOT_TOL};
use crate::error::{Error, Result};

/// How a user variable is expressed through nonnegative internal columns.
#[derive(Debug, Clone, Copy)]
enum ColumnMap {
    /// `x = offset + y`
    Shift { col: usize, offset: f64 },
    /// `x = offset - y`
    Mirror { col: usize, offset: f64 },
    /// `x = y_pos - y_neg`
    Split { pos: usize, neg: usize },
}

/// `min cost . y` over `y >= 0` with `<=` or `=` rows.
///
/// Rows are ordered: user inequalities, user equalities, then upper-bound
/// rows for doubly bounded variables.
#[derive(Debug)]
pub(super) struct StandardForm {
    cost: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    is_eq: Vec<bool>,
    maps: Vec<ColumnMap>,
}

pub(super) enum Outcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<f64>, row_duals: Vec<f64> },
}

impl StandardForm {
    pub(super) fn from_problem(lp: &LpProblem) -> Self {
        let mut maps = Vec::with_capacity(lp.num_vars());
        let mut n_cols = 0;
        let mut bound_rows = Vec::new();
        for j in 0..lp.num_vars() {
            let (lo, hi) = (lp.lower[j], lp.upper[j]);
            let map = if lo.is_finite() {
                if hi.is_finite() {
                    bound_rows.push((n_cols, hi - lo));
                }
                ColumnMap::Shift {
                    col: n_cols,
                    offset: lo,
                }
            } else if hi.is_finite() {
                ColumnMap::Mirror {
                    col: n_cols,
                    offset: hi,
                }
            } else {
                n_cols += 1;
                ColumnMap::Split {
                    pos: n_cols - 1,
                    neg: n_cols,
                }
            };
            n_cols += 1;
            maps.push(map);
        }

        // Internal objective is always a minimization of -s * c.
        let s = lp.sense.sign();
        let constant_shift = |row: &[f64]| -> (Vec<f64>, f64) {
            let mut out = vec![0.0; n_cols];
            let mut shift = 0.0;
            for (j, map) in maps.iter().enumerate() {
                let a = row[j];
                match *map {
                    ColumnMap::Shift { col, offset } => {
                        out[col] += a;
                        shift += a * offset;
                    }
                    ColumnMap::Mirror { col, offset } => {
                        out[col] -= a;
                        shift += a * offset;
                    }
                    ColumnMap::Split { pos, neg } => {
                        out[pos] += a;
                        out[neg] -= a;
                    }
                }
            }
            (out, shift)
        };
        let scaled: Vec<f64> = lp.objective.iter().map(|c| -s * c).collect();
        let (cost, _) = constant_shift(&scaled);

        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut is_eq = Vec::new();
        for (row, &h) in lp.ineq_matrix.iter().zip(&lp.ineq_rhs) {
            let (r, shift) = constant_shift(row);
            rows.push(r);
            rhs.push(h - shift);
            is_eq.push(false);
        }
        for (row, &d) in lp.eq_matrix.iter().zip(&lp.eq_rhs) {
            let (r, shift) = constant_shift(row);
            rows.push(r);
            rhs.push(d - shift);
            is_eq.push(true);
        }
        for (col, width) in bound_rows {
            let mut r = vec![0.0; n_cols];
            r[col] = 1.0;
            rows.push(r);
            rhs.push(width);
            is_eq.push(false);
        }

        Self {
            cost,
            rows,
            rhs,
            is_eq,
            maps,
        }
    }

    pub(super) fn recover_primal(&self, y: &[f64]) -> Vec<f64> {
        self.maps
            .iter()
            .map(|map| match *map {
                ColumnMap::Shift { col, offset } => offset + y[col],
                ColumnMap::Mirror { col, offset } => offset - y[col],
                ColumnMap::Split { pos, neg } => y[pos] - y[neg],
            })
            .collect()
    }

    pub(super) fn solve(&self) -> Result<Outcome> {
        let m = self.rows.len();
        let n = self.cost.len();

        // Column layout: structural | one slack per inequality | artificials.
        let n_slack = self.is_eq.iter().filter(|e| !**e).count();
        let flip: Vec<f64> = self
            .rhs
            .iter()
            .map(|&b| if b < 0.0 { -1.0 } else { 1.0 })
            .collect();
        let needs_artificial: Vec<bool> = (0..m).map(|i| self.is_eq[i] || flip[i] < 0.0).collect();
        let n_art = needs_artificial.iter().filter(|a| **a).count();
        let total = n + n_slack + n_art;

        let mut t = Tableau::new(m, total);
        let mut unit_col = vec![0; m];
        let mut next_slack = n;
        let mut next_art = n + n_slack;
        for i in 0..m {
            for j in 0..n {
                t.set(i, j, flip[i] * self.rows[i][j]);
            }
            t.set(i, total, flip[i] * self.rhs[i]);
            if !self.is_eq[i] {
                t.set(i, next_slack, flip[i]);
                if !needs_artificial[i] {
                    unit_col[i] = next_slack;
                }
                next_slack += 1;
            }
            if needs_artificial[i] {
                t.set(i, next_art, 1.0);
                unit_col[i] = next_art;
                next_art += 1;
            }
            t.basis[i] = unit_col[i];
        }
        let artificial = |j: usize| j >= n + n_slack;
        let rhs_scale = 1.0 + self.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));

        if n_art > 0 {
            let phase1: Vec<f64> = (0..total)
                .map(|j| if artificial(j) { 1.0 } else { 0.0 })
                .collect();
            match t.run(&phase1, &vec![false; total])? {
                PhaseEnd::Optimal => {}
                PhaseEnd::Unbounded => {
                    return Err(Error::NumericalFailure(
                        "phase one reported unbounded".into(),
                    ))
                }
            }
            if -t.obj[total] > FEAS_TOL * rhs_scale {
                return Ok(Outcome::Infeasible);
            }
            // Drive zero-level artificials out of the basis where possible.
            for i in 0..m {
                if artificial(t.basis[i]) {
                    let best = (0..n + n_slack)
                        .map(|j| (j, t.get(i, j).abs()))
                        .filter(|&(_, v)| v > 1e-9)
                        .max_by(|a, b| a.1.total_cmp(&b.1));
                    if let Some((j, _)) = best {
                        t.pivot(i, j);
                    }
                }
            }
        }

        let barred: Vec<bool> = (0..total).map(artificial).collect();
        let mut phase2 = vec![0.0; total];
        phase2[..n].copy_from_slice(&self.cost);
        if let PhaseEnd::Unbounded = t.run(&phase2, &barred)? {
            return Ok(Outcome::Unbounded);
        }

        let mut x = vec![0.0; n];
        for i in 0..m {
            let b = t.basis[i];
            if b < n {
                x[b] = t.get(i, total).max(0.0);
            }
        }
        let reduced = t.reduced_costs(&phase2);
        let row_duals = (0..m).map(|i| -flip[i] * reduced[unit_col[i]]).collect();
        Ok(Outcome::Optimal { x, row_duals })
    }
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

/// Dense tableau `B^-1 [A | b]` with the reduced-cost row kept separately.
struct Tableau {
    m: usize,
    width: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
    obj: Vec<f64>,
}

impl Tableau {
    fn new(m: usize, cols: usize) -> Self {
        Self {
            m,
            width: cols + 1,
            data: vec![0.0; m * (cols + 1)],
            basis: vec![0; m],
            obj: vec![0.0; cols + 1],
        }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.width + j] = v;
    }

    fn rhs_col(&self) -> usize {
        self.width - 1
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut r: Vec<f64> = cost.iter().copied().chain([0.0]).collect();
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.data[i * self.width..(i + 1) * self.width];
                r.iter_mut().zip(row).for_each(|(r, a)| *r -= cb * a);
            }
        }
        r
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.get(r, c);
        for v in &mut self.data[r * w..(r + 1) * w] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.get(i, c);
            if f != 0.0 {
                for (v, pr) in self.data[i * w..(i + 1) * w].iter_mut().zip(&pivot_row) {
                    *v -= f * pr;
                }
                self.set(i, c, 0.0);
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (v, pr) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Dantzig pricing, switching to Bland's rule after `5 (m + n)`
    /// degenerate pivots.
    fn run(&mut self, cost: &[f64], barred: &[bool]) -> Result<PhaseEnd> {
        self.obj = self.reduced_costs(cost);
        let cols = self.width - 1;
        let rhs = self.rhs_col();
        let opt_tol = 1e-9 * cost.iter().fold(1.0f64, |a, b| a.max(b.abs()));
        let bland_after = 5 * (self.m + cols);
        let max_iter = 50 * (self.m + cols) + 1000;
        let mut degenerate = 0;

        for _ in 0..max_iter {
            let bland = degenerate > bland_after;
            let candidates = (0..cols).filter(|&j| !barred[j] && self.obj[j] < -opt_tol);
            let entering = if bland {
                candidates.min()
            } else {
                candidates.min_by(|&a, &b| self.obj[a].total_cmp(&self.obj[b]))
            };
            let Some(c) = entering else {
                return Ok(PhaseEnd::Optimal);
            };

            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.get(i, c);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.get(i, rhs).max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((r, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                        let better = if tie {
                            if bland {
                                self.basis[i] < self.basis[r]
                            } else {
                                a > self.get(r, c)
                            }
                        } else {
                            ratio < best
                        };
                        if better {
                            Some((i, ratio))
                        } else {
                            Some((r, best))
                        }
                    }
                };
            }
            let Some((r, ratio)) = leave else {
                return Ok(PhaseEnd::Unbounded);
            };
            if ratio <= 1e-12 {
                degenerate += 1;
            }
            self.pivot(r, c);
        }
        Err(Error::NumericalFailure(format!(
            "simplex did not terminate within {max_iter} pivots"
        )))
    }
}
