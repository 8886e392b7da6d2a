//! Linear programming: optimization, feasibility with Farkas certificates,
//! and the membership tests built on them.
//!
//! All membership answers have "within `feastol`" semantics: a point is
//! accepted when the phase-one residual of the defining system is at most
//! `feastol` in the L1 sense.

mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::numerics::{dot, Matrix, Vector};
pub(crate) use simplex::{solve_standard, StandardLp, StdOutcome};

pub const DEFAULT_FEASTOL: f64 = 1e-9;

/// `maximize objective·x` subject to `row·x ≤ rhs` and `row·x = rhs`.
///
/// Variables are free unless listed in `nonnegative`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LinearProgram {
    pub objective: Vector,
    pub ineq: Vec<(Vector, f64)>,
    pub eq: Vec<(Vector, f64)>,
    #[serde(default)]
    pub nonnegative: Vec<usize>,
}

impl LinearProgram {
    pub fn new(objective: Vector) -> Self {
        LinearProgram {
            objective,
            ..Default::default()
        }
    }

    pub fn dim(&self) -> usize {
        self.objective.len()
    }

    pub fn le(mut self, row: Vector, rhs: f64) -> Self {
        self.ineq.push((row, rhs));
        self
    }

    pub fn eq(mut self, row: Vector, rhs: f64) -> Self {
        self.eq.push((row, rhs));
        self
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        for (row, rhs) in self.ineq.iter().chain(&self.eq) {
            check_dim("constraint row", d, row.len())?;
            if !rhs.is_finite() || row.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("non-finite LP data".into()));
            }
        }
        if let Some(&j) = self.nonnegative.iter().find(|&&j| j >= d) {
            return Err(Error::InvalidInput(format!("nonnegative index {j} out of range")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Certificate {
    /// Nonnegative multipliers on `ineq` followed by free multipliers on
    /// `eq`; they combine the rows into the objective.
    Dual(Vector),
    /// `z` with `z_ineq ≥ 0`, `zᵀA = 0` on free variables (`≥ 0` on
    /// nonnegative ones) and `zᵀb < 0`. Rows ordered as for `Dual`.
    Farkas(Vector),
    /// A direction of unbounded improvement.
    Ray(Vector),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: f64,
    pub point: Vector,
    pub certificate: Certificate,
}

/// Solves `p` with the dense revised simplex method.
///
/// Fails with [`Error::LpIterationLimit`] if the pivot cap is exceeded
/// (Bland's rule is engaged on degenerate stalls before that happens).
pub fn lp_solve(p: &LinearProgram, feastol: f64) -> Result<LpResult> {
    p.validate()?;
    let d = p.dim();
    let mi = p.ineq.len();
    let m = mi + p.eq.len();
    let mut nonneg = vec![false; d];
    for &j in &p.nonnegative {
        nonneg[j] = true;
    }

    // column layout: per variable one (x ≥ 0) or two (x⁺, x⁻) columns, then slacks
    let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(d);
    let mut cols: Vec<Vector> = Vec::new();
    let mut c: Vector = Vec::new();
    let rows: Vec<&Vector> = p.ineq.iter().chain(&p.eq).map(|(r, _)| r).collect();
    for j in 0..d {
        let col: Vector = rows.iter().map(|r| r[j]).collect();
        let plus = cols.len();
        cols.push(col.clone());
        c.push(-p.objective[j]);
        if nonneg[j] {
            var_cols.push((plus, None));
        } else {
            cols.push(col.iter().map(|x| -x).collect());
            c.push(p.objective[j]);
            var_cols.push((plus, Some(plus + 1)));
        }
    }
    for i in 0..mi {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        cols.push(e);
        c.push(0.0);
    }
    let b: Vector = p.ineq.iter().chain(&p.eq).map(|(_, r)| *r).collect();
    let std = StandardLp { cols, b, c };

    let recover = |x: &Vector| -> Vector {
        var_cols
            .iter()
            .map(|&(pl, mi)| x[pl] - mi.map_or(0.0, |k| x[k]))
            .collect()
    };

    match solve_standard(&std, feastol)? {
        StdOutcome::Optimal { x, y, .. } => {
            let point = recover(&x);
            let value = dot(&p.objective, &point);
            let dual = y.iter().map(|v| -v).collect();
            Ok(LpResult {
                status: LpStatus::Optimal,
                value,
                point,
                certificate: Certificate::Dual(dual),
            })
        }
        StdOutcome::Infeasible { w } => {
            let mut z: Vector = w.iter().map(|v| -v).collect();
            let scale = z.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if scale > 0.0 {
                z.iter_mut().for_each(|v| *v /= scale);
            }
            // clean rounding noise on the sign-constrained part
            for v in z.iter_mut().take(mi) {
                if *v < 0.0 && *v > -1e-12 {
                    *v = 0.0;
                }
            }
            if !verify_farkas(p, &z, feastol.max(1e-9)) {
                return Err(Error::CertificationFailed(
                    "phase-one multipliers do not certify infeasibility".into(),
                ));
            }
            Ok(LpResult {
                status: LpStatus::Infeasible,
                value: f64::NAN,
                point: Vec::new(),
                certificate: Certificate::Farkas(z),
            })
        }
        StdOutcome::Unbounded { x, ray } => Ok(LpResult {
            status: LpStatus::Unbounded,
            value: f64::INFINITY,
            point: recover(&x),
            certificate: Certificate::Ray(recover(&ray)),
        }),
    }
}

/// Checks a Farkas vector `z` (as returned in [`Certificate::Farkas`]).
/// Conditions are tested relative to `tol·max|z|`.
pub fn verify_farkas(p: &LinearProgram, z: &[f64], tol: f64) -> bool {
    let mi = p.ineq.len();
    if z.len() != mi + p.eq.len() {
        return false;
    }
    let scale = z.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return false;
    }
    let t = tol * scale;
    if z[..mi].iter().any(|&v| v < -t) {
        return false;
    }
    let rows: Vec<&(Vector, f64)> = p.ineq.iter().chain(&p.eq).collect();
    let mut nonneg = vec![false; p.dim()];
    for &j in &p.nonnegative {
        nonneg[j] = true;
    }
    let row_scale = rows
        .iter()
        .flat_map(|(r, _)| r.iter())
        .fold(1.0f64, |a, v| a.max(v.abs()));
    for j in 0..p.dim() {
        let s: f64 = rows.iter().zip(z).map(|((r, _), zi)| r[j] * zi).sum();
        let bad = if nonneg[j] { s < -t * row_scale } else { s.abs() > t * row_scale };
        if bad {
            return false;
        }
    }
    let zb: f64 = rows.iter().zip(z).map(|((_, b), zi)| b * zi).sum();
    zb < -t
}

/// A polyhedron `{w : A w ≤ b, E w = f}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyhedron {
    pub dim: usize,
    pub ineq: Vec<(Vector, f64)>,
    #[serde(default)]
    pub eq: Vec<(Vector, f64)>,
}

impl Polyhedron {
    pub fn new(dim: usize, ineq: Vec<(Vector, f64)>, eq: Vec<(Vector, f64)>) -> Result<Self> {
        for (row, _) in ineq.iter().chain(&eq) {
            check_dim("polyhedron row", dim, row.len())?;
        }
        Ok(Polyhedron { dim, ineq, eq })
    }

    /// The cube `[-1,1]^d`.
    pub fn cube(dim: usize) -> Self {
        let mut ineq = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for s in [1.0, -1.0] {
                let mut r = vec![0.0; dim];
                r[i] = s;
                ineq.push((r, 1.0));
            }
        }
        Polyhedron { dim, ineq, eq: vec![] }
    }

    pub fn contains(&self, w: &[f64], tol: f64) -> bool {
        w.len() == self.dim
            && self.ineq.iter().all(|(r, b)| dot(r, w) <= b + tol)
            && self.eq.iter().all(|(r, b)| (dot(r, w) - b).abs() <= tol)
    }

    /// LP over this polyhedron with the given objective.
    pub fn program(&self, objective: Vector) -> LinearProgram {
        LinearProgram {
            objective,
            ineq: self.ineq.clone(),
            eq: self.eq.clone(),
            nonnegative: vec![],
        }
    }
}

/// Is `x` a convex combination of `points` (within `feastol`)?
pub fn member_vrep(x: &[f64], points: &[Vector], feastol: f64) -> Result<bool> {
    if points.is_empty() {
        return Err(Error::InvalidInput("member_vrep on an empty point list".into()));
    }
    let d = x.len();
    for p in points {
        check_dim("member_vrep point", d, p.len())?;
    }
    // λ ≥ 0, Σλ = 1, Σλᵢpᵢ = x
    let cols = points
        .iter()
        .map(|p| {
            let mut c = p.clone();
            c.push(1.0);
            c
        })
        .collect();
    let mut b = x.to_vec();
    b.push(1.0);
    let std = StandardLp {
        cols,
        b,
        c: vec![0.0; points.len()],
    };
    Ok(matches!(solve_standard(&std, feastol)?, StdOutcome::Optimal { .. }))
}

/// Is `x = T w` for some `w ∈ P` (within `feastol`)?
pub fn member_projection(x: &[f64], p: &Polyhedron, t: &Matrix, feastol: f64) -> Result<bool> {
    check_dim("projection map rows", x.len(), t.rows())?;
    check_dim("projection map cols", p.dim, t.cols())?;
    let mut lp = p.program(vec![0.0; p.dim]);
    for (i, &xi) in x.iter().enumerate() {
        lp.eq.push((t.row(i).to_vec(), xi));
    }
    Ok(lp_solve(&lp, feastol)?.status != LpStatus::Infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> LinearProgram {
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                lp = lp.le(vec![s1, s2], 1.0);
            }
        }
        lp
    }

    #[test]
    fn one_dimensional_bound() {
        let r = lp_solve(&LinearProgram::new(vec![1.0]).le(vec![1.0], 1.0), 1e-9).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contradictory_bounds_infeasible() {
        let lp = LinearProgram::new(vec![0.0]).le(vec![1.0], -1.0).le(vec![-1.0], 0.0);
        let r = lp_solve(&lp, 1e-9).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
        let Certificate::Farkas(z) = &r.certificate else { panic!() };
        assert!(verify_farkas(&lp, z, 1e-9));
    }

    #[test]
    fn diamond_optimum() {
        let r = lp_solve(&diamond(), 1e-9).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value - 1.0).abs() < 1e-12);
        let Certificate::Dual(y) = &r.certificate else { panic!() };
        // duals are nonnegative and reproduce the objective value
        assert!(y.iter().all(|&v| v >= -1e-12));
        let dv: f64 = y.iter().sum();
        assert!((dv - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_detected() {
        let lp = LinearProgram::new(vec![1.0, 0.0]).le(vec![0.0, 1.0], 1.0);
        let r = lp_solve(&lp, 1e-9).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);
        let Certificate::Ray(ray) = r.certificate else { panic!() };
        assert!(ray[0] > 0.0);
    }

    #[test]
    fn equality_constraints() {
        // max x + 2y, x + y = 1, x,y ≥ 0
        let mut lp = LinearProgram::new(vec![1.0, 2.0]).eq(vec![1.0, 1.0], 1.0);
        lp.nonnegative = vec![0, 1];
        let r = lp_solve(&lp, 1e-9).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!((r.point[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vrep_membership_examples() {
        let simplex = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(member_vrep(&[1.0 / 3.0, 1.0 / 3.0], &simplex, 1e-9).unwrap());
        for v in &simplex {
            assert!(member_vrep(v, &simplex, 1e-9).unwrap());
        }
        let square = vec![
            vec![1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
        ];
        assert!(!member_vrep(&[1.1, 0.0], &square, 1e-9).unwrap());
        assert!(member_vrep(&[0.0], &[], 1e-9).is_err());
    }

    #[test]
    fn projection_membership() {
        let cube = Polyhedron::cube(3);
        assert!(member_projection(&[0.0; 3], &cube, &Matrix::identity(3), 1e-9).unwrap());

        // O₂ as the image of the standard simplex in R⁴ under e_i ↦ ±e_j
        let mut ineq = Vec::new();
        for i in 0..4 {
            let mut r = vec![0.0; 4];
            r[i] = -1.0;
            ineq.push((r, 0.0));
        }
        let p = Polyhedron::new(4, ineq, vec![(vec![1.0; 4], 1.0)]).unwrap();
        let t = Matrix::from_rows(&[vec![1.0, -1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, -1.0]]).unwrap();
        assert!(member_projection(&[0.5, 0.0], &p, &t, 1e-9).unwrap());
        assert!(!member_projection(&[1.5, 0.0], &p, &t, 1e-9).unwrap());
    }
}
