//! Convex bodies behind a uniform membership / gauge / support interface.
//!
//! Every [`Body`] carries a designated interior point `center`. Gauge and
//! support queries are answered for the recentered body `B − center`;
//! membership takes absolute coordinates.

mod facets;
mod sandwich;
mod zoo;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lp::{
    lp_solve, member_projection, member_vrep, solve_standard, LinearProgram, LpStatus, Polyhedron,
    StandardLp, StdOutcome,
};
use crate::numerics::{dot, norm2, sub, Matrix, SymMatrix, Vector};

pub use facets::{facets_bruteforce, facets_integer, HalfSpace};
pub use sandwich::{
    certify_sandwich, certify_sandwich_with, CertMode, SandwichCertificate, SandwichOptions,
};
pub use zoo::{ball, cross_polytope, cube, lp_ball, make_cut, make_tsp, simplex, Tsp};

/// Feasibility tolerance used by LP-backed gauge and support queries.
pub const ORACLE_FEASTOL: f64 = 1e-10;

/// The set `{v : (v − center)ᵀ form (v − center) ≤ 1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ellipsoid {
    pub center: Vector,
    pub form: SymMatrix,
}

impl Ellipsoid {
    /// Validates dimensions and positive definiteness of `form`.
    pub fn new(center: Vector, form: SymMatrix) -> Result<Self> {
        check_dim("ellipsoid center", form.dim(), center.len())?;
        form.cholesky()?;
        Ok(Ellipsoid { center, form })
    }

    pub fn ball(center: Vector, radius: f64) -> Self {
        let mut form = SymMatrix::identity(center.len());
        form.scale(1.0 / (radius * radius));
        Ellipsoid { center, form }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// `q(x − center)`.
    pub fn value(&self, x: &[f64]) -> f64 {
        self.form.quad_form(&sub(x, &self.center))
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.value(x) <= 1.0 + tol
    }

    /// Shape matrix `form⁻¹`; the support function is `u·c + √(uᵀ S u)`.
    pub fn shape(&self) -> Result<SymMatrix> {
        self.form.inverse()
    }

    pub fn support(&self, u: &[f64]) -> Result<f64> {
        let s = self.shape()?;
        Ok(dot(u, &self.center) + s.quad_form(u).max(0.0).sqrt())
    }

    /// Point where the ray from the center in direction `u` leaves the set.
    pub fn boundary_point(&self, u: &[f64]) -> Vector {
        let t = self.form.quad_form(u).sqrt();
        self.center.iter().zip(u).map(|(c, x)| c + x / t).collect()
    }

    /// Gauge of the set seen from `origin` (which must be interior).
    pub fn gauge_from(&self, origin: &[f64], v: &[f64]) -> Result<f64> {
        let w = sub(origin, &self.center);
        let qv = self.form.mul_vec(v);
        let a = dot(v, &qv);
        let b = 2.0 * dot(&qv, &w);
        let k = self.form.quad_form(&w) - 1.0;
        if k >= 0.0 {
            return Err(Error::OriginNotInterior);
        }
        let disc = (b * b - 4.0 * a * k).max(0.0);
        Ok((b + disc.sqrt()) / (-2.0 * k))
    }

    /// Homothetic copy `origin + t (E − origin)`.
    pub fn scaled_about(&self, origin: &[f64], t: f64) -> Ellipsoid {
        let center = origin
            .iter()
            .zip(&self.center)
            .map(|(o, c)| o + t * (c - o))
            .collect();
        let mut form = self.form.clone();
        form.scale(1.0 / (t * t));
        Ellipsoid { center, form }
    }

    /// Polar set `{u : ⟨u,x⟩ ≤ 1 ∀x ∈ E}`; requires the origin inside.
    pub fn polar(&self) -> Result<Ellipsoid> {
        let d = self.dim();
        if self.value(&vec![0.0; d]) >= 1.0 {
            return Err(Error::OriginNotInterior);
        }
        // uᵀ(S − ccᵀ)u + 2c·u ≤ 1, then complete the square
        let mut g = self.shape()?;
        g.add_outer(-1.0, &self.center);
        let gc = g.as_matrix().solve(&self.center)?;
        let denom = 1.0 + dot(&self.center, &gc);
        let mut form = g;
        form.scale(1.0 / denom);
        Ellipsoid::new(gc.iter().map(|x| -x).collect(), form)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rep {
    VRep { points: Vec<Vector> },
    HRep { polyhedron: Polyhedron },
    /// Euclidean ball of the given radius around the body center.
    Ball { dim: usize, radius: f64 },
    /// `ℓ_p` ball of the given radius around the body center, `p ≥ 1`.
    LpBall { dim: usize, p: f64, radius: f64 },
    Ellipsoid { ellipsoid: Ellipsoid },
    /// `{T w + offset : w ∈ P}`.
    Projected {
        polytope: Polyhedron,
        map: Matrix,
        offset: Vector,
    },
    /// `{y : offset + U y ∈ conv(points)}`, `U` given column-wise in `basis`.
    Sectioned {
        points: Vec<Vector>,
        basis: Matrix,
        offset: Vector,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Body {
    pub rep: Rep,
    pub symmetric: bool,
    pub center: Vector,
}

fn lp_ball_norm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    } else {
        x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

impl Body {
    /// Wraps a representation with center at the origin.
    pub fn new(rep: Rep, symmetric: bool) -> Result<Self> {
        let d = rep_dim(&rep)?;
        Ok(Body {
            rep,
            symmetric,
            center: vec![0.0; d],
        })
    }

    pub fn with_center(mut self, center: Vector) -> Result<Self> {
        check_dim("body center", self.dim(), center.len())?;
        self.center = center;
        Ok(self)
    }

    pub fn vrep(points: Vec<Vector>) -> Result<Self> {
        Body::new(Rep::VRep { points }, false)
    }

    pub fn hrep(polyhedron: Polyhedron) -> Result<Self> {
        Body::new(Rep::HRep { polyhedron }, false)
    }

    pub fn ellipsoid(e: Ellipsoid) -> Self {
        let center = e.center.clone();
        Body {
            rep: Rep::Ellipsoid { ellipsoid: e },
            symmetric: false,
            center,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn vertices(&self) -> Option<&[Vector]> {
        match &self.rep {
            Rep::VRep { points } => Some(points),
            _ => None,
        }
    }

    /// Membership in absolute coordinates, within `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        check_dim("membership query", self.dim(), x.len())?;
        let rel = sub(x, &self.center);
        Ok(match &self.rep {
            Rep::VRep { points } => member_vrep(x, points, tol)?,
            Rep::HRep { polyhedron } => polyhedron.contains(x, tol),
            Rep::Ball { radius, .. } => norm2(&rel) <= radius + tol,
            Rep::LpBall { p, radius, .. } => lp_ball_norm(&rel, *p) <= radius + tol,
            Rep::Ellipsoid { ellipsoid } => ellipsoid.contains(x, tol),
            Rep::Projected {
                polytope,
                map,
                offset,
            } => member_projection(&sub(x, offset), polytope, map, tol)?,
            Rep::Sectioned {
                points,
                basis,
                offset,
            } => {
                let w: Vector = offset.iter().zip(basis.mul_vec(x)).map(|(o, u)| o + u).collect();
                member_vrep(&w, points, tol)?
            }
        })
    }

    /// Minkowski gauge of `B − center` at `v`.
    ///
    /// Closed forms for balls and ellipsoids and H-polytopes; exact LP
    /// homogenization for the polytope representations. Returns
    /// `f64::INFINITY` only for an H-polytope with equality rows and `v`
    /// outside their direction space.
    pub fn gauge(&self, v: &[f64]) -> Result<f64> {
        check_dim("gauge query", self.dim(), v.len())?;
        let c = &self.center;
        match &self.rep {
            Rep::Ball { radius, .. } => Ok(norm2(v) / radius),
            Rep::LpBall { p, radius, .. } => Ok(lp_ball_norm(v, *p) / radius),
            Rep::Ellipsoid { ellipsoid } => ellipsoid.gauge_from(c, v),
            Rep::HRep { polyhedron } => {
                let scale = 1.0 + norm2(c);
                let mut g = 0.0f64;
                for (a, b) in &polyhedron.ineq {
                    let slack = b - dot(a, c);
                    if slack <= 1e-12 * scale * (1.0 + norm2(a)) {
                        return Err(Error::OriginNotInterior);
                    }
                    g = g.max(dot(a, v) / slack);
                }
                for (a, _) in &polyhedron.eq {
                    if dot(a, v).abs() > 1e-12 * (1.0 + norm2(a) * norm2(v)) {
                        return Ok(f64::INFINITY);
                    }
                }
                Ok(g)
            }
            Rep::VRep { points } => {
                // min Σλ  s.t.  Σ λᵢ (pᵢ − c) = v, λ ≥ 0
                let std = StandardLp {
                    cols: points.iter().map(|p| sub(p, c)).collect(),
                    b: v.to_vec(),
                    c: vec![1.0; points.len()],
                };
                gauge_outcome(solve_standard(&std, ORACLE_FEASTOL)?)
            }
            Rep::Sectioned {
                points,
                basis,
                offset,
            } => {
                // min λ  s.t.  Σ μᵢ pᵢ − λ(offset + U c) = U v,  Σ μᵢ − λ = 0
                let anchor: Vector = offset.iter().zip(basis.mul_vec(c)).map(|(o, u)| o + u).collect();
                let mut cols: Vec<Vector> = points
                    .iter()
                    .map(|p| {
                        let mut col = p.clone();
                        col.push(1.0);
                        col
                    })
                    .collect();
                let mut lam: Vector = anchor.iter().map(|x| -x).collect();
                lam.push(-1.0);
                cols.push(lam);
                let mut b = basis.mul_vec(v);
                b.push(0.0);
                let mut cost = vec![0.0; points.len()];
                cost.push(1.0);
                gauge_outcome(solve_standard(&StandardLp { cols, b, c: cost }, ORACLE_FEASTOL)?)
            }
            Rep::Projected {
                polytope,
                map,
                offset,
            } => {
                // variables (w, λ): T w − λ(c − offset) = v, A w − λ b ≤ 0, E w − λ f = 0
                let m = polytope.dim;
                let shift = sub(c, offset);
                let mut obj = vec![0.0; m + 1];
                obj[m] = -1.0;
                let mut lp = LinearProgram::new(obj);
                lp.nonnegative = vec![m];
                for (a, b) in &polytope.ineq {
                    let mut row = a.clone();
                    row.push(-b);
                    lp.ineq.push((row, 0.0));
                }
                for (a, f) in &polytope.eq {
                    let mut row = a.clone();
                    row.push(-f);
                    lp.eq.push((row, 0.0));
                }
                for i in 0..map.rows() {
                    let mut row = map.row(i).to_vec();
                    row.push(-shift[i]);
                    lp.eq.push((row, v[i]));
                }
                let r = lp_solve(&lp, ORACLE_FEASTOL)?;
                match r.status {
                    LpStatus::Optimal => Ok(r.point[m].max(0.0)),
                    _ => Err(Error::OriginNotInterior),
                }
            }
        }
    }

    /// Support function `max ⟨u, x − center⟩` over the body.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        check_dim("support query", self.dim(), u.len())?;
        let c = &self.center;
        let lp_value = |lp: &LinearProgram| -> Result<f64> {
            let r = lp_solve(lp, ORACLE_FEASTOL)?;
            match r.status {
                LpStatus::Optimal => Ok(r.value),
                LpStatus::Unbounded => Err(Error::Unbounded),
                LpStatus::Infeasible => Err(Error::Infeasible),
            }
        };
        let abs = match &self.rep {
            Rep::Ball { radius, .. } => return Ok(radius * norm2(u)),
            Rep::LpBall { p, radius, .. } => {
                return Ok(radius * lp_ball_norm(u, conjugate_exponent(*p)))
            }
            Rep::Ellipsoid { ellipsoid } => ellipsoid.support(u)?,
            Rep::VRep { points } => points
                .iter()
                .map(|p| dot(p, u))
                .fold(f64::NEG_INFINITY, f64::max),
            Rep::HRep { polyhedron } => lp_value(&polyhedron.program(u.to_vec()))?,
            Rep::Projected {
                polytope,
                map,
                offset,
            } => lp_value(&polytope.program(map.tmul_vec(u)))? + dot(u, offset),
            Rep::Sectioned {
                points,
                basis,
                offset,
            } => {
                // variables (μ ≥ 0, y free): Σ μᵢ pᵢ − U y = offset, Σ μ = 1
                let n = points.len();
                let k = basis.cols();
                let mut obj = vec![0.0; n];
                obj.extend_from_slice(u);
                let mut lp = LinearProgram::new(obj);
                lp.nonnegative = (0..n).collect();
                for r in 0..basis.rows() {
                    let mut row: Vector = points.iter().map(|p| p[r]).collect();
                    row.extend((0..k).map(|j| -basis[(r, j)]));
                    lp.eq.push((row, offset[r]));
                }
                let mut ones = vec![1.0; n];
                ones.extend(std::iter::repeat_n(0.0, k));
                lp.eq.push((ones, 1.0));
                lp_value(&lp)?
            }
        };
        Ok(abs - dot(u, c))
    }

    /// Gauge by bisection over membership; an independent check of [`Body::gauge`].
    pub fn gauge_bisect(&self, v: &[f64], rel_tol: f64) -> Result<f64> {
        if norm2(v) == 0.0 {
            return Ok(0.0);
        }
        let inside = |t: f64| -> Result<bool> {
            // is center + v/t in B?
            let x: Vector = self.center.iter().zip(v).map(|(c, vi)| c + vi / t).collect();
            self.contains(&x, 0.0)
        };
        let mut hi = 1.0;
        let mut guard = 0;
        while !inside(hi)? {
            hi *= 2.0;
            guard += 1;
            if guard > 200 {
                return Err(Error::OriginNotInterior);
            }
        }
        let mut lo = hi / 2.0;
        while inside(lo)? {
            lo /= 2.0;
            if lo < 1e-300 {
                return Ok(0.0);
            }
        }
        while (hi - lo) > rel_tol * hi {
            let mid = 0.5 * (lo + hi);
            if inside(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Homothetic copy `center + t (B − center)`.
    pub fn scaled(&self, t: f64) -> Result<Body> {
        if !(t > 0.0) {
            return Err(Error::InvalidInput("scale factor must be positive".into()));
        }
        let c = &self.center;
        let about = |p: &Vector| -> Vector { c.iter().zip(p).map(|(ci, pi)| ci + t * (pi - ci)).collect() };
        let rep = match &self.rep {
            Rep::VRep { points } => Rep::VRep {
                points: points.iter().map(about).collect(),
            },
            Rep::HRep { polyhedron } => {
                let shift = |(a, b): &(Vector, f64)| (a.clone(), t * b + (1.0 - t) * dot(a, c));
                Rep::HRep {
                    polyhedron: Polyhedron {
                        dim: polyhedron.dim,
                        ineq: polyhedron.ineq.iter().map(shift).collect(),
                        eq: polyhedron.eq.iter().map(shift).collect(),
                    },
                }
            }
            Rep::Ball { dim, radius } => Rep::Ball {
                dim: *dim,
                radius: radius * t,
            },
            Rep::LpBall { dim, p, radius } => Rep::LpBall {
                dim: *dim,
                p: *p,
                radius: radius * t,
            },
            Rep::Ellipsoid { ellipsoid } => Rep::Ellipsoid {
                ellipsoid: ellipsoid.scaled_about(c, t),
            },
            Rep::Projected {
                polytope,
                map,
                offset,
            } => {
                let scale = |(a, b): &(Vector, f64)| (a.clone(), t * b);
                Rep::Projected {
                    polytope: Polyhedron {
                        dim: polytope.dim,
                        ineq: polytope.ineq.iter().map(scale).collect(),
                        eq: polytope.eq.iter().map(scale).collect(),
                    },
                    map: map.clone(),
                    offset: about(offset),
                }
            }
            Rep::Sectioned {
                points,
                basis,
                offset,
            } => {
                let uc = basis.mul_vec(c);
                Rep::Sectioned {
                    points: points.iter().map(|p| p.iter().map(|x| t * x).collect()).collect(),
                    basis: basis.clone(),
                    offset: offset
                        .iter()
                        .zip(&uc)
                        .map(|(o, u)| t * o + (t - 1.0) * u)
                        .collect(),
                }
            }
        };
        Ok(Body {
            rep,
            symmetric: self.symmetric,
            center: c.clone(),
        })
    }

    /// True when the center is an interior point (positive hull of the
    /// recentered body is everything). Exact for all representations.
    pub fn origin_interior(&self) -> Result<bool> {
        let d = self.dim();
        for i in 0..d {
            for s in [1.0, -1.0] {
                let mut e = vec![0.0; d];
                e[i] = s;
                match self.support(&e) {
                    Ok(h) if h > 1e-12 => {}
                    Ok(_) => return Ok(false),
                    Err(Error::Infeasible) => return Ok(false),
                    Err(e) => return Err(e),
                }
            }
        }
        // coordinate directions are not enough for polytopes in general
        match &self.rep {
            Rep::VRep { .. } | Rep::Sectioned { .. } | Rep::Projected { .. } => {
                for i in 0..d {
                    for s in [1.0, -1.0] {
                        let mut e = vec![0.0; d];
                        e[i] = s;
                        match self.gauge(&e) {
                            Ok(g) if g.is_finite() => {}
                            Ok(_) | Err(Error::OriginNotInterior) => return Ok(false),
                            Err(e) => return Err(e),
                        }
                    }
                }
                Ok(true)
            }
            Rep::HRep { polyhedron } => Ok(polyhedron.eq.is_empty()
                && polyhedron
                    .ineq
                    .iter()
                    .all(|(a, b)| b - dot(a, &self.center) > 1e-12)),
            _ => Ok(true),
        }
    }
}

fn gauge_outcome(o: StdOutcome) -> Result<f64> {
    match o {
        StdOutcome::Optimal { value, .. } => Ok(value.max(0.0)),
        StdOutcome::Infeasible { .. } => Err(Error::OriginNotInterior),
        StdOutcome::Unbounded { .. } => Err(Error::Unbounded),
    }
}

fn rep_dim(rep: &Rep) -> Result<usize> {
    match rep {
        Rep::VRep { points } => {
            let d = points
                .first()
                .map(|p| p.len())
                .ok_or_else(|| Error::InvalidInput("V-representation without points".into()))?;
            for p in points {
                check_dim("vertex", d, p.len())?;
            }
            Ok(d)
        }
        Rep::HRep { polyhedron } => Ok(polyhedron.dim),
        Rep::Ball { dim, radius } => {
            if !(*radius > 0.0) {
                return Err(Error::InvalidInput("ball radius must be positive".into()));
            }
            Ok(*dim)
        }
        Rep::LpBall { dim, p, radius } => {
            if !(*p >= 1.0) || !(*radius > 0.0) {
                return Err(Error::InvalidInput("lp ball needs p ≥ 1 and positive radius".into()));
            }
            Ok(*dim)
        }
        Rep::Ellipsoid { ellipsoid } => Ok(ellipsoid.dim()),
        Rep::Projected {
            polytope,
            map,
            offset,
        } => {
            check_dim("projection map columns", polytope.dim, map.cols())?;
            check_dim("projection offset", map.rows(), offset.len())?;
            Ok(map.rows())
        }
        Rep::Sectioned {
            points,
            basis,
            offset,
        } => {
            let w = offset.len();
            check_dim("section basis rows", w, basis.rows())?;
            for p in points {
                check_dim("section point", w, p.len())?;
            }
            if points.is_empty() {
                return Err(Error::InvalidInput("section of an empty point set".into()));
            }
            Ok(basis.cols())
        }
    }
}

/// Polar of a polytope about its center: vertices become facets and
/// facets become vertices. The result is centered at the origin.
pub fn polar_polytope(b: &Body) -> Result<Body> {
    if !b.origin_interior()? {
        return Err(Error::OriginNotInterior);
    }
    let c = &b.center;
    match &b.rep {
        Rep::VRep { points } => {
            let ineq = points.iter().map(|p| (sub(p, c), 1.0)).collect();
            Body::new(
                Rep::HRep {
                    polyhedron: Polyhedron::new(b.dim(), ineq, vec![])?,
                },
                b.symmetric,
            )
        }
        Rep::HRep { polyhedron } => {
            let points = polyhedron
                .ineq
                .iter()
                .map(|(a, rhs)| {
                    let s = rhs - dot(a, c);
                    a.iter().map(|x| x / s).collect()
                })
                .collect();
            Body::new(Rep::VRep { points }, b.symmetric)
        }
        _ => Err(Error::InvalidInput(
            "polar_polytope needs a V- or H-representation".into(),
        )),
    }
}

/// Uniform points of a body by radial sampling about its center: a
/// direction `u`, then radius `U^{1/d}` of the boundary distance.
pub fn sample_uniform(b: &Body, n: usize, seed: crate::numerics::Seed) -> Result<Vec<Vector>> {
    use rand::Rng;
    let d = b.dim();
    let dirs = crate::numerics::sample_unit_sphere(d, n, seed);
    let radial = seed.derive(0x5eed);
    dirs.iter()
        .enumerate()
        .map(|(i, u)| {
            let g = b.gauge(u)?;
            if g <= 0.0 {
                return Err(Error::Unbounded);
            }
            let r: f64 = radial.stream(i as u64).gen::<f64>().powf(1.0 / d as f64) / g;
            Ok(b.center.iter().zip(u).map(|(c, x)| c + r * x).collect())
        })
        .collect()
}
