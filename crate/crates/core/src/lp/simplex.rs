//! Dense two-phase revised simplex on standard-form programs
//! `min cᵀx  s.t.  A x = b, x ≥ 0`.
//!
//! The basis inverse is kept explicitly and updated by elementary row
//! operations, with a full refactorization every [`REFACTOR_EVERY`] pivots.
//! Pricing is Dantzig's rule; after [`DEGENERATE_STALL`] consecutive
//! degenerate pivots the solver switches to Bland's smallest-index rule until
//! the objective moves again.

use crate::error::{Error, Result};
use crate::numerics::{dot, Matrix, Vector};

const REFACTOR_EVERY: usize = 50;
const DEGENERATE_STALL: usize = 20;
const PIVOT_TOL: f64 = 1e-9;
/// Pivots smaller than this fraction of the column's largest entry are refused.
const REL_PIVOT_TOL: f64 = 1e-6;
const OPT_TOL: f64 = 1e-10;
const HARRIS_TOL: f64 = 1e-11;

#[derive(Clone, Debug)]
pub(crate) struct StandardLp {
    /// Constraint columns, each of length `m`.
    pub cols: Vec<Vector>,
    pub b: Vector,
    pub c: Vector,
}

#[derive(Clone, Debug)]
pub(crate) enum StdOutcome {
    Optimal {
        x: Vector,
        /// Simplex multipliers: `c − Aᵀy ≥ 0` at optimum.
        y: Vector,
        value: f64,
    },
    /// `w` with `wᵀA ≤ 0` columnwise and `wᵀb > 0`.
    Infeasible { w: Vector },
    /// Feasible `x` and a ray `r ≥ 0`, `A r = 0`, `cᵀr < 0`.
    Unbounded { x: Vector, ray: Vector },
}

struct Tableau<'a> {
    cols: &'a [Vector],
    art_cols: Vec<usize>, // row index of each artificial column
    m: usize,
    n: usize,
    b: Vector,
    basis: Vec<usize>,
    binv: Matrix,
    xb: Vector,
    pivots: usize,
    degenerate_total: usize,
}

impl<'a> Tableau<'a> {
    fn ncols(&self) -> usize {
        self.n + self.art_cols.len()
    }

    fn column(&self, j: usize) -> Vector {
        if j < self.n {
            self.cols[j].clone()
        } else {
            let mut e = vec![0.0; self.m];
            e[self.art_cols[j - self.n]] = 1.0;
            e
        }
    }

    fn binv_times(&self, col: &[f64]) -> Vector {
        let mut out = vec![0.0; self.m];
        for (k, &ck) in col.iter().enumerate() {
            if ck == 0.0 {
                continue;
            }
            for i in 0..self.m {
                out[i] += self.binv[(i, k)] * ck;
            }
        }
        out
    }

    fn duals(&self, cost: &[f64]) -> Vector {
        let mut y = vec![0.0; self.m];
        for (r, &j) in self.basis.iter().enumerate() {
            let cj = cost[j];
            if cj == 0.0 {
                continue;
            }
            for i in 0..self.m {
                y[i] += cj * self.binv[(r, i)];
            }
        }
        y
    }

    fn refactor(&mut self) -> Result<()> {
        let bcols: Vec<Vector> = self.basis.iter().map(|&j| self.column(j)).collect();
        let bmat = Matrix::from_cols(&bcols)?;
        self.binv = bmat.inverse()?;
        self.xb = self.binv.mul_vec(&self.b);
        Ok(())
    }

    fn pivot(&mut self, r: usize, j: usize, u: &[f64]) {
        let ur = u[r];
        let m = self.m;
        for k in 0..m {
            self.binv[(r, k)] /= ur;
        }
        self.xb[r] /= ur;
        for i in 0..m {
            if i == r || u[i] == 0.0 {
                continue;
            }
            let f = u[i];
            for k in 0..m {
                let v = self.binv[(r, k)];
                if v != 0.0 {
                    self.binv[(i, k)] -= f * v;
                }
            }
            self.xb[i] -= f * self.xb[r];
        }
        self.basis[r] = j;
        self.pivots += 1;
    }

    /// Runs simplex iterations for `cost` over the columns allowed by
    /// `allowed`. Returns `Ok(None)` at optimality, `Ok(Some(j))` if column
    /// `j` is an unbounded direction.
    fn optimize(
        &mut self,
        cost: &[f64],
        allowed: &dyn Fn(usize) -> bool,
        cap: usize,
    ) -> Result<Option<(usize, Vector)>> {
        let mut stall = 0usize;
        let mut since_refactor = 0usize;
        let mut in_basis = vec![false; self.ncols()];
        let mut skip = vec![false; self.ncols()];
        for &j in &self.basis {
            in_basis[j] = true;
        }
        loop {
            if self.pivots >= cap {
                let obj: f64 = self.basis.iter().zip(&self.xb).map(|(&j, x)| cost[j] * x).sum();
                return Err(Error::LpIterationLimit {
                    iterations: self.pivots,
                    degenerate: self.degenerate_total,
                    objective: obj,
                });
            }
            let y = self.duals(cost);
            let bland = stall >= DEGENERATE_STALL;
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.ncols() {
                if in_basis[j] || !allowed(j) || skip[j] {
                    continue;
                }
                let col = self.column(j);
                let yc = dot(&y, &col);
                let d = cost[j] - yc;
                if d < -OPT_TOL * (1.0 + cost[j].abs() + yc.abs()) {
                    if bland {
                        entering = Some((j, d));
                        break;
                    }
                    // scale-aware Dantzig
                    let score = d / (1.0 + col.iter().map(|x| x * x).sum::<f64>()).sqrt();
                    if entering.is_none_or(|(_, s)| score < s) {
                        entering = Some((j, score));
                    }
                }
            }
            let Some((j, _)) = entering else {
                return Ok(None);
            };
            let u = self.binv_times(&self.column(j));
            // reduced cost from u, with entries below the pivot tolerance read as zero
            let cb_u: f64 = self
                .basis
                .iter()
                .zip(&u)
                .filter(|(_, ui)| ui.abs() > PIVOT_TOL)
                .map(|(&b, ui)| cost[b] * ui)
                .sum();
            if cost[j] - cb_u >= -OPT_TOL * (1.0 + cost[j].abs() + cb_u.abs()) {
                skip[j] = true;
                continue;
            }
            // ratio test
            let leave = if bland { bland_ratio(&u, &self.xb, &self.basis) } else { harris_ratio(&u, &self.xb) };
            let Some((r, theta)) = leave else {
                if u.iter().any(|&v| v > PIVOT_TOL) {
                    // only unstable pivots: try another entering column
                    skip[j] = true;
                    continue;
                }
                // confirm with a fresh factorization before reporting a ray
                if since_refactor > 0 {
                    self.refactor()?;
                    since_refactor = 0;
                    continue;
                }
                return Ok(Some((j, u)));
            };
            if theta <= 1e-12 {
                stall += 1;
                self.degenerate_total += 1;
            } else {
                stall = 0;
            }
            in_basis[self.basis[r]] = false;
            in_basis[j] = true;
            skip.iter_mut().for_each(|x| *x = false);
            self.pivot(r, j, &u);
            since_refactor += 1;
            if since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
                since_refactor = 0;
            }
        }
    }
}

/// Minimum-ratio row, ties broken by smallest basic index.
fn bland_ratio(u: &[f64], xb: &[f64], basis: &[usize]) -> Option<(usize, f64)> {
    let umax = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let ptol = PIVOT_TOL.max(REL_PIVOT_TOL * umax);
    let mut leave: Option<(usize, f64)> = None;
    for i in 0..u.len() {
        if u[i] > ptol {
            let ratio = xb[i].max(0.0) / u[i];
            let better = match leave {
                None => true,
                Some((l, best)) => {
                    if (ratio - best).abs() <= 1e-12 * (1.0 + best.abs()) {
                        basis[i] < basis[l]
                    } else {
                        ratio < best
                    }
                }
            };
            if better {
                leave = Some((i, ratio));
            }
        }
    }
    leave
}

/// Two-pass Harris ratio test: bound the step with rows relaxed by
/// `HARRIS_TOL`, then take the largest pivot among rows within that bound.
fn harris_ratio(u: &[f64], xb: &[f64]) -> Option<(usize, f64)> {
    let umax = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let ptol = PIVOT_TOL * umax.max(1.0);
    let mut bound = f64::INFINITY;
    for i in 0..u.len() {
        if u[i] > ptol {
            bound = bound.min((xb[i].max(0.0) + HARRIS_TOL) / u[i]);
        }
    }
    if !bound.is_finite() {
        return None;
    }
    let mut leave: Option<(usize, f64)> = None;
    for i in 0..u.len() {
        if u[i] > ptol {
            let ratio = xb[i].max(0.0) / u[i];
            if ratio <= bound && leave.is_none_or(|(l, _)| u[i] > u[l]) {
                leave = Some((i, ratio));
            }
        }
    }
    leave
}

/// Solves a standard-form program. `feastol` bounds the phase-one residual
/// (sum of artificial values) accepted as feasible.
pub(crate) fn solve_standard(lp: &StandardLp, feastol: f64) -> Result<StdOutcome> {
    let m = lp.b.len();
    let n = lp.cols.len();
    debug_assert_eq!(lp.c.len(), n);
    // flip rows so that b ≥ 0
    let sign: Vec<f64> = lp.b.iter().map(|&bi| if bi < 0.0 { -1.0 } else { 1.0 }).collect();
    let flipped: Vec<Vector> = lp
        .cols
        .iter()
        .map(|c| c.iter().zip(&sign).map(|(a, s)| a * s).collect())
        .collect();
    let b: Vector = lp.b.iter().zip(&sign).map(|(a, s)| a * s).collect();

    if m == 0 {
        // no constraints: optimal at 0 unless some cost is negative
        if let Some(j) = lp.c.iter().position(|&cj| cj < -OPT_TOL) {
            let mut ray = vec![0.0; n];
            ray[j] = 1.0;
            return Ok(StdOutcome::Unbounded {
                x: vec![0.0; n],
                ray,
            });
        }
        return Ok(StdOutcome::Optimal {
            x: vec![0.0; n],
            y: vec![],
            value: 0.0,
        });
    }

    // reuse existing unit columns as the initial basis where possible
    let mut basis = vec![usize::MAX; m];
    for (j, col) in flipped.iter().enumerate() {
        let mut hit = None;
        let mut ok = true;
        for (i, &v) in col.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            if v == 1.0 && hit.is_none() {
                hit = Some(i);
            } else {
                ok = false;
                break;
            }
        }
        if let (true, Some(i)) = (ok, hit) {
            if basis[i] == usize::MAX {
                basis[i] = j;
            }
        }
    }
    let mut art_cols = Vec::new();
    for i in 0..m {
        if basis[i] == usize::MAX {
            basis[i] = n + art_cols.len();
            art_cols.push(i);
        }
    }
    let total = n + art_cols.len();
    let cap = 50 * (m + total) + 2000;

    let mut tab = Tableau {
        cols: &flipped,
        art_cols,
        m,
        n,
        b: b.clone(),
        basis,
        binv: Matrix::identity(m),
        xb: b.clone(),
        pivots: 0,
        degenerate_total: 0,
    };

    // phase one
    if !tab.art_cols.is_empty() {
        let mut cost1 = vec![0.0; total];
        for c in cost1.iter_mut().skip(n) {
            *c = 1.0;
        }
        // phase one is bounded below, so a reported ray is numerical noise
        tab.optimize(&cost1, &|_| true, cap)?;
        tab.refactor()?;
        let infeas: f64 = tab
            .basis
            .iter()
            .zip(&tab.xb)
            .filter(|(&j, _)| j >= n)
            .map(|(_, &x)| x.max(0.0))
            .sum();
        if infeas > feastol {
            let y = tab.duals(&cost1);
            let w: Vector = y.iter().zip(&sign).map(|(a, s)| a * s).collect();
            return Ok(StdOutcome::Infeasible { w });
        }
        // drive remaining artificials out of the basis
        for r in 0..m {
            if tab.basis[r] < n {
                continue;
            }
            let in_basis: Vec<bool> = {
                let mut v = vec![false; total];
                for &j in &tab.basis {
                    v[j] = true;
                }
                v
            };
            let mut best: Option<(usize, Vector)> = None;
            for j in 0..n {
                if in_basis[j] {
                    continue;
                }
                let u = tab.binv_times(&flipped[j]);
                if u[r].abs() > 1e-7 && best.as_ref().is_none_or(|(_, bu)| u[r].abs() > bu[r].abs()) {
                    best = Some((j, u));
                }
            }
            if let Some((j, u)) = best {
                tab.pivot(r, j, &u);
            }
        }
        tab.refactor()?;
    }

    // phase two
    let mut cost2 = lp.c.clone();
    cost2.resize(total, 0.0);
    let outcome = tab.optimize(&cost2, &|j| j < n, cap)?;
    let mut x = vec![0.0; n];
    for (r, &j) in tab.basis.iter().enumerate() {
        if j < n {
            x[j] = tab.xb[r].max(0.0);
        }
    }
    match outcome {
        None => {
            let y = tab.duals(&cost2);
            let y: Vector = y.iter().zip(&sign).map(|(a, s)| a * s).collect();
            let value = dot(&lp.c, &x);
            Ok(StdOutcome::Optimal { x, y, value })
        }
        Some((j, u)) => {
            let mut ray = vec![0.0; n];
            ray[j] = 1.0;
            for (r, &bj) in tab.basis.iter().enumerate() {
                if bj < n {
                    ray[bj] = -u[r];
                }
            }
            Ok(StdOutcome::Unbounded { x, ray })
        }
    }
}
