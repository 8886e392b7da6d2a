//! Polyhedral approximation of the disc, the Euclidean ball and the round
//! cone by projections of polyhedra with few facets.
//!
//! The quarter disc is handled by a chain of rotation stages
//! `ξ_k = ξ_{k−1} cos(π/2^k) + η_{k−1} sin(π/2^k)`,
//! `η_k ≥ |−ξ_{k−1} sin(π/2^k) + η_{k−1} cos(π/2^k)|`. Balls in higher
//! dimension come from a balanced binary tower of cones, each internal node
//! being the homogenized quarter gadget on the radii of its two children.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bodies::{Body, Rep};
use crate::error::{Error, Result};
use crate::lp::{lp_solve, LpStatus, Polyhedron};
use crate::numerics::{dot, norm2, Matrix, Vector};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GadgetSpec {
    pub m: usize,
    /// `xi1, eta1, xi2, eta2, …`
    pub variables: Vec<String>,
    pub rows: Polyhedron,
    /// Map onto `(ξ₁, η₁)`.
    pub projection: Matrix,
}

impl GadgetSpec {
    pub fn row_count(&self) -> usize {
        self.rows.ineq.len() + self.rows.eq.len()
    }

    /// The projected gadget as a body, centered inside the quarter disc.
    pub fn body(&self) -> Body {
        Body {
            rep: Rep::Projected {
                polytope: self.rows.clone(),
                map: self.projection.clone(),
                offset: vec![0.0, 0.0],
            },
            symmetric: false,
            center: vec![0.4, 0.4],
        }
    }
}

/// Sparse row helper: `Σ coef·x[var]`.
fn row(n: usize, terms: &[(usize, f64)]) -> Vector {
    let mut r = vec![0.0; n];
    for &(i, c) in terms {
        r[i] += c;
    }
    r
}

/// The quarter-disc gadget with `m` stages: one equality and two
/// inequalities per stage `k = 2..m` plus `ξ₁ ≥ 0`, `η₁ ≥ 0`, `ξ_m ≤ 1`,
/// `η_m ≤ π/2^m`. (`ξ_m ≥ 0` follows from the stages and is omitted.)
pub fn quarter_gadget(m: usize) -> Result<GadgetSpec> {
    if !(2..=30).contains(&m) {
        return Err(Error::InvalidInput(format!("gadget needs 2 ≤ m ≤ 30, got {m}")));
    }
    let n = 2 * m;
    let xi = |k: usize| 2 * (k - 1);
    let eta = |k: usize| 2 * (k - 1) + 1;
    let mut ineq = Vec::new();
    let mut eq = Vec::new();
    for k in 2..=m {
        let a = PI / (1u64 << k) as f64;
        let (s, c) = a.sin_cos();
        eq.push((row(n, &[(xi(k), 1.0), (xi(k - 1), -c), (eta(k - 1), -s)]), 0.0));
        ineq.push((row(n, &[(eta(k), -1.0), (xi(k - 1), -s), (eta(k - 1), c)]), 0.0));
        ineq.push((row(n, &[(eta(k), -1.0), (xi(k - 1), s), (eta(k - 1), -c)]), 0.0));
    }
    ineq.push((row(n, &[(xi(1), -1.0)]), 0.0));
    ineq.push((row(n, &[(eta(1), -1.0)]), 0.0));
    ineq.push((row(n, &[(xi(m), 1.0)]), 1.0));
    ineq.push((row(n, &[(eta(m), 1.0)]), PI / (1u64 << m) as f64));
    let variables = (1..=m)
        .flat_map(|k| [format!("xi{k}"), format!("eta{k}")])
        .collect();
    let mut projection = Matrix::zeros(2, n);
    projection[(0, xi(1))] = 1.0;
    projection[(1, eta(1))] = 1.0;
    Ok(GadgetSpec {
        m,
        variables,
        rows: Polyhedron::new(n, ineq, eq)?,
        projection,
    })
}

struct Tower {
    m: usize,
    nvars: usize,
    ineq: Vec<Vec<(usize, f64)>>,
    eq: Vec<(Vec<(usize, f64)>, f64)>,
}

impl Tower {
    fn var(&mut self) -> usize {
        self.nvars += 1;
        self.nvars - 1
    }

    /// Cone over the given coordinates; returns the radius variable.
    fn cone(&mut self, coords: &[usize]) -> usize {
        if coords.len() == 1 {
            let rho = self.var();
            self.ineq.push(vec![(coords[0], 1.0), (rho, -1.0)]);
            self.ineq.push(vec![(coords[0], -1.0), (rho, -1.0)]);
            return rho;
        }
        let r = coords.len().div_ceil(2);
        let a = self.cone(&coords[..r]);
        let b = self.cone(&coords[r..]);
        let tau = self.var();
        self.gadget(a, b, tau);
        tau
    }

    /// Homogenized quarter gadget on `(ρ, β)` with apex variable `τ`.
    fn gadget(&mut self, rho: usize, beta: usize, tau: usize) {
        let (mut xp, mut ep) = (rho, beta);
        for k in 2..=self.m {
            let a = PI / (1u64 << k) as f64;
            let (s, c) = a.sin_cos();
            let (x, e) = (self.var(), self.var());
            self.eq.push((vec![(x, 1.0), (xp, -c), (ep, -s)], 0.0));
            self.ineq.push(vec![(e, -1.0), (xp, -s), (ep, c)]);
            self.ineq.push(vec![(e, -1.0), (xp, s), (ep, -c)]);
            xp = x;
            ep = e;
        }
        self.ineq.push(vec![(xp, 1.0), (tau, -1.0)]);
        self.ineq.push(vec![(ep, 1.0), (tau, -PI / (1u64 << self.m) as f64)]);
    }
}

/// Number of inequality rows of [`ball_bn`]: `2d` for the leaves and `2m`
/// for each of the `d − 1` gadgets.
pub fn ball_bn_facet_count(d: usize, m: usize) -> usize {
    if d == 1 {
        2
    } else {
        2 * d + 2 * m * (d - 1)
    }
}

/// Projection of a polyhedron approximating the unit ball `B_d`.
pub fn ball_bn(d: usize, m: usize) -> Result<Body> {
    if d == 0 {
        return Err(Error::InvalidInput("ball_bn needs d ≥ 1".into()));
    }
    if d > 1 && !(2..=30).contains(&m) {
        return Err(Error::InvalidInput(format!("ball_bn needs 2 ≤ m ≤ 30, got {m}")));
    }
    let mut t = Tower {
        m,
        nvars: d,
        ineq: Vec::new(),
        eq: Vec::new(),
    };
    let coords: Vec<usize> = (0..d).collect();
    if d == 1 {
        t.ineq.push(vec![(0, 1.0)]);
        t.ineq.push(vec![(0, -1.0)]);
    } else {
        let top = t.cone(&coords);
        t.eq.push((vec![(top, 1.0)], 1.0));
    }
    let n = t.nvars;
    let rhs_one = d == 1;
    let ineq: Vec<(Vector, f64)> = t
        .ineq
        .iter()
        .map(|terms| (row(n, terms), if rhs_one { 1.0 } else { 0.0 }))
        .collect();
    let eq = t.eq.iter().map(|(terms, b)| (row(n, terms), *b)).collect();
    let facets = ineq.len();
    if facets != ball_bn_facet_count(d, m) || (d > 1 && facets > 3 * d * m) {
        return Err(Error::CertificationFailed(format!(
            "facet count {facets} breaks the 3·d·m budget"
        )));
    }
    let mut map = Matrix::zeros(d, n);
    for i in 0..d {
        map[(i, i)] = 1.0;
    }
    Ok(Body {
        rep: Rep::Projected {
            polytope: Polyhedron::new(n, ineq, eq)?,
            map,
            offset: vec![0.0; d],
        },
        symmetric: true,
        center: vec![0.0; d],
    })
}

/// Support value and an attaining point of a projected body.
pub fn support_point(b: &Body, u: &[f64]) -> Result<(f64, Vector)> {
    let Rep::Projected {
        polytope,
        map,
        offset,
    } = &b.rep
    else {
        return Err(Error::InvalidInput("support_point needs a projected body".into()));
    };
    let r = lp_solve(&polytope.program(map.tmul_vec(u)), 1e-11)?;
    match r.status {
        LpStatus::Optimal => {
            let x: Vector = map.mul_vec(&r.point).iter().zip(offset).map(|(a, o)| a + o).collect();
            Ok((dot(u, &x), x))
        }
        LpStatus::Unbounded => Err(Error::Unbounded),
        LpStatus::Infeasible => Err(Error::Infeasible),
    }
}

/// Vertices (counter-clockwise) of a planar projected polytope, found by
/// refining support directions until every edge is confirmed.
pub fn projection_polygon(b: &Body, tol: f64) -> Result<Vec<Vector>> {
    if b.dim() != 2 {
        return Err(Error::InvalidInput("projection_polygon needs a planar body".into()));
    }
    let dirs: Vec<Vector> = (0..8)
        .map(|k| {
            let t = k as f64 * PI / 4.0;
            vec![t.cos(), t.sin()]
        })
        .collect();
    let mut pts: Vec<Vector> = Vec::new();
    for u in &dirs {
        let (_, x) = support_point(b, u)?;
        if pts.last().is_none_or(|p| norm2(&[p[0] - x[0], p[1] - x[1]]) > tol) {
            pts.push(x);
        }
    }
    if pts.len() > 1 && norm2(&[pts[0][0] - pts[pts.len() - 1][0], pts[0][1] - pts[pts.len() - 1][1]]) <= tol {
        pts.pop();
    }
    let mut i = 0;
    let mut guard = 0;
    while i < pts.len() && pts.len() > 1 {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::NonConvergence {
                what: "polygon refinement",
                iterations: guard,
            });
        }
        let p = pts[i].clone();
        let q = pts[(i + 1) % pts.len()].clone();
        let e = [q[0] - p[0], q[1] - p[1]];
        let len = norm2(&e);
        if len <= tol {
            pts.remove((i + 1) % pts.len());
            continue;
        }
        let nrm = [e[1] / len, -e[0] / len];
        let (h, x) = support_point(b, &nrm)?;
        if h > dot(&nrm, &p) + tol {
            pts.insert(i + 1, x);
        } else {
            i += 1;
        }
    }
    Ok(pts)
}

/// Largest Euclidean norm over a planar projected polytope. Support
/// directions are refined only where the triangle left between two known
/// support points could still hold a point farther out than the best vertex.
pub fn planar_outer_radius(b: &Body) -> Result<f64> {
    if b.dim() != 2 {
        return Err(Error::InvalidInput("planar_outer_radius needs a planar body".into()));
    }
    let tol = 1e-12;
    let dir = |t: f64| vec![t.cos(), t.sin()];
    let mut stack = Vec::new();
    let mut best = 0.0f64;
    let first: Vec<(Vector, Vector)> = (0..8)
        .map(|k| {
            let u = dir(k as f64 * PI / 4.0);
            support_point(b, &u).map(|(_, x)| (u, x))
        })
        .collect::<Result<_>>()?;
    for k in 0..8 {
        best = best.max(norm2(&first[k].1));
        stack.push((first[k].clone(), first[(k + 1) % 8].clone()));
    }
    let mut guard = 0usize;
    while let Some(((up, p), (uq, q))) = stack.pop() {
        guard += 1;
        if guard > 1_000_000 {
            return Err(Error::NonConvergence {
                what: "planar radius refinement",
                iterations: guard,
            });
        }
        let e = [q[0] - p[0], q[1] - p[1]];
        let len = norm2(&e);
        if len <= tol {
            continue;
        }
        // apex of the supporting lines at p and q bounds the unknown arc
        let det = up[0] * uq[1] - up[1] * uq[0];
        if det.abs() > 1e-14 {
            let (hp, hq) = (dot(&up, &p), dot(&uq, &q));
            let apex = [(hp * uq[1] - hq * up[1]) / det, (up[0] * hq - uq[0] * hp) / det];
            if norm2(&apex) <= best + tol {
                continue;
            }
        }
        let n = vec![e[1] / len, -e[0] / len];
        let (h, x) = support_point(b, &n)?;
        if h > dot(&n, &p) + tol {
            best = best.max(norm2(&x));
            stack.push(((up, p), (n.clone(), x.clone())));
            stack.push(((n, x), (uq, q)));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gadget_row_count() {
        for m in 2..12 {
            let g = quarter_gadget(m).unwrap();
            assert_eq!(g.row_count(), 3 * (m - 1) + 4);
            assert_eq!(g.variables.len(), 2 * m);
        }
        assert!(quarter_gadget(1).is_err());
    }

    #[test]
    fn gadget_memberships() {
        for m in 2..10 {
            let b = quarter_gadget(m).unwrap().body();
            assert!(b.contains(&[1.0, 0.0], 1e-9).unwrap());
            assert!(!b.contains(&[1.2, 0.0], 1e-9).unwrap());
        }
        let b = quarter_gadget(8).unwrap().body();
        for k in 0..=6 {
            let t = (15.0 * k as f64).to_radians();
            assert!(b.contains(&[t.cos(), t.sin()], 1e-9).unwrap(), "angle {}", 15 * k);
        }
    }

    #[test]
    fn recurrence_witness_is_feasible() {
        // iterate R_k from (cos t, sin t) and check every row directly
        let m = 8;
        let g = quarter_gadget(m).unwrap();
        for k in 0..=6 {
            let t = (15.0 * k as f64).to_radians();
            let (mut x, mut e) = (t.cos(), t.sin());
            let mut w = vec![x, e];
            for j in 2..=m {
                let a = PI / (1u64 << j) as f64;
                let (s, c) = a.sin_cos();
                let nx = x * c + e * s;
                let ne = (-x * s + e * c).abs();
                x = nx;
                e = ne;
                w.push(x);
                w.push(e);
            }
            assert!(g.rows.contains(&w, 1e-12), "angle {}", 15 * k);
        }
    }

    #[test]
    fn interval_base_case() {
        let b = ball_bn(1, 6).unwrap();
        assert!(b.contains(&[1.0], 1e-9).unwrap());
        assert!(!b.contains(&[1.01], 1e-9).unwrap());
        assert!((b.support(&[1.0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disc_factor_m6() {
        let b = ball_bn(2, 6).unwrap();
        let r = planar_outer_radius(&b).unwrap();
        assert!(r <= 1.002, "{r}");
        assert!(r >= 1.0);
    }

    #[test]
    fn tower_facet_counts() {
        for (d, m) in [(2, 4), (3, 5), (4, 6), (7, 3)] {
            let b = ball_bn(d, m).unwrap();
            let Rep::Projected { polytope, .. } = &b.rep else { panic!() };
            assert_eq!(polytope.ineq.len(), ball_bn_facet_count(d, m));
            assert!(polytope.ineq.len() <= 3 * d * m);
        }
    }
}
