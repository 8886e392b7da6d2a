//! `body`, `approx` and `certify` commands. Each returns a JSON document.

use anyhow::{anyhow, bail, Result};
use convex_approx::bodies::{certify_sandwich, facets_bruteforce, Body, Ellipsoid, Rep};
use convex_approx::ellipsoid::{inscribed_via_polar, john_inner_symmetric, loewner_mvee};
use convex_approx::lp::Polyhedron;
use convex_approx::numerics::{dot, sub, Matrix, Seed, Vector};
use convex_approx::polyapprox::{ball_net_lower_bound, greedy_net, net_size_bound};
use convex_approx::polynorm::{
    exterior_angle, moment_norm, power_sum_norm, sandwich_ratios, tensor_lift, PolynomialNorm,
};
use convex_approx::sdprelax::{cut_ratio, grothendieck_bound};
use convex_approx::socone::{ball_bn, ball_bn_facet_count, planar_outer_radius};
use convex_approx::softapprox::{accept_test, approximant, build_soft};
use serde_json::{json, Value};

/// Shared numeric settings from the global flags.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub seed: u64,
    pub tol: f64,
    pub feastol: f64,
}

fn kind(b: &Body) -> &'static str {
    match b.rep {
        Rep::VRep { .. } => "vrep",
        Rep::HRep { .. } => "hrep",
        Rep::Ball { .. } => "ball",
        Rep::LpBall { .. } => "lpball",
        Rep::Ellipsoid { .. } => "ellipsoid",
        Rep::Projected { .. } => "projected",
        Rep::Sectioned { .. } => "sectioned",
    }
}

pub fn describe(b: &Body) -> Result<Value> {
    let d = b.dim();
    let mut widths = Vec::with_capacity(d);
    for i in 0..d {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        let hi = b.support(&e)?;
        e[i] = -1.0;
        widths.push(hi + b.support(&e)?);
    }
    let (vertices, facets) = match &b.rep {
        Rep::VRep { points } => (Some(points.len()), None),
        Rep::HRep { polyhedron } => (None, Some(polyhedron.ineq.len())),
        Rep::Projected { polytope, .. } => (None, Some(polytope.ineq.len())),
        _ => (None, None),
    };
    Ok(json!({
        "kind": kind(b),
        "dim": d,
        "symmetric": b.symmetric,
        "center": b.center,
        "vertices": vertices,
        "facets": facets,
        "interior": b.origin_interior()?,
        "axis_widths": widths,
    }))
}

/// Vertices of the polar of `b − center`.
pub fn polar_vertices(b: &Body) -> Result<Vec<Vector>> {
    let c = &b.center;
    match &b.rep {
        Rep::HRep { polyhedron } if polyhedron.eq.is_empty() => polyhedron
            .ineq
            .iter()
            .map(|(a, rhs)| {
                let s = rhs - dot(a, c);
                if s <= 0.0 {
                    bail!("center is not interior");
                }
                Ok(a.iter().map(|x| x / s).collect())
            })
            .collect(),
        Rep::VRep { points } => {
            let rel: Vec<Vector> = points.iter().map(|p| sub(p, c)).collect();
            Ok(facets_bruteforce(&rel, 1e-9)?
                .into_iter()
                .map(|(a, rhs)| a.iter().map(|x| x / rhs).collect())
                .collect())
        }
        _ => bail!("this command needs a vrep or hrep body"),
    }
}

pub fn approx_ellipsoid(b: &Body, loewner: bool, s: Settings) -> Result<Value> {
    if loewner {
        let Rep::VRep { points } = &b.rep else {
            bail!("the Löwner ellipsoid needs a vrep body");
        };
        let r = loewner_mvee(points, s.tol)?;
        return Ok(json!({"mode": "loewner", "ellipsoid": r.ellipsoid, "iterations": r.iterations, "gap": r.gap}));
    }
    let e: Ellipsoid = match &b.rep {
        Rep::VRep { .. } if b.symmetric => john_inner_symmetric(b, s.tol)?,
        Rep::HRep { .. } | Rep::VRep { .. } => {
            let mut e = inscribed_via_polar(&polar_vertices(b)?, s.tol)?;
            e.center = e.center.iter().zip(&b.center).map(|(x, c)| x + c).collect();
            e
        }
        _ => bail!("the inscribed ellipsoid needs a vrep or hrep body"),
    };
    let cert = if dist(&e.center, &b.center) <= 1e-9 {
        Some(certify_sandwich(&Body::ellipsoid(e.clone()), b, 512, Seed(s.seed), s.feastol)?)
    } else {
        None
    };
    Ok(json!({"mode": "john", "ellipsoid": e, "certificate": cert}))
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

pub fn approx_net(b: &Body, eps: f64, candidates: usize, s: Settings) -> Result<Value> {
    if !(eps > 0.0 && eps < 1.0) {
        bail!("--eps must lie in (0, 1), got {eps}");
    }
    let r = greedy_net(b, eps, candidates, candidates, Seed(s.seed))?;
    Ok(json!({
        "eps": eps,
        "size": r.points.len(),
        "size_bound": net_size_bound(b.dim(), eps),
        "ball_lower_bound": ball_net_lower_bound(b.dim(), r.cert.alpha),
        "alpha": r.cert.alpha,
        "outer_mode": r.cert.outer_mode,
        "points": r.points,
    }))
}

pub fn approx_bn(d: usize, m: usize) -> Result<Value> {
    if !(1..=8).contains(&d) {
        bail!("--d must lie in 1..=8, got {d}");
    }
    if !(2..=20).contains(&m) {
        bail!("--m must lie in 2..=20, got {m}");
    }
    let body = ball_bn(d, m)?;
    let Rep::Projected { polytope, map, offset } = &body.rep else {
        bail!("unexpected gadget representation");
    };
    let delta = if d == 2 { Some(planar_outer_radius(&body)? - 1.0) } else { None };
    Ok(json!({
        "d": d,
        "m": m,
        "facets": ball_bn_facet_count(d, m),
        "lifted_dim": polytope.dim,
        "outer_error": delta,
        "polytope": polytope,
        "map": map,
        "offset": offset,
    }))
}

pub fn approx_tensor(b: &Body, k: usize, dirs: usize, s: Settings) -> Result<Value> {
    if !(1..=6).contains(&k) {
        bail!("--k must lie in 1..=6, got {k}");
    }
    if !b.symmetric {
        bail!("the tensor lift needs a symmetric body");
    }
    let sur = tensor_lift(&polar_vertices(b)?, k, s.tol)?;
    let (lo, hi) = sandwich_ratios(&sur, b, dirs, Seed(s.seed))?;
    Ok(json!({"surrogate": sur, "sampled_ratio_min": lo, "sampled_ratio_max": hi}))
}

pub fn approx_power(d: usize, k: usize) -> Result<Value> {
    let p = power_sum_norm(d, k)?;
    let ones = p.norm(&vec![1.0; d]);
    Ok(json!({"d": d, "k": k, "factor": p.factor(), "all_ones_ratio": ones}))
}

pub fn approx_moment(b: &Body, k: usize, samples: usize, dirs: usize, s: Settings) -> Result<Value> {
    if !(1..=6).contains(&k) {
        bail!("--k must lie in 1..=6, got {k}");
    }
    let polar = Body::new(Rep::VRep { points: polar_vertices(b)? }, false)?;
    let mu = exterior_angle(&polar, samples, Seed(s.seed))?;
    let p = moment_norm(&mu, k)?;
    let rel = translate(b, &b.center)?;
    let (lo, hi) = sandwich_ratios(&p, &rel, dirs, Seed(s.seed).derive(1))?;
    Ok(json!({"norm": p, "sampled_ratio_min": lo, "sampled_ratio_max": hi}))
}

/// `b − c` for polytopes.
fn translate(b: &Body, c: &[f64]) -> Result<Body> {
    let rep = match &b.rep {
        Rep::VRep { points } => Rep::VRep { points: points.iter().map(|p| sub(p, c)).collect() },
        Rep::HRep { polyhedron } => Rep::HRep {
            polyhedron: Polyhedron::new(
                polyhedron.dim,
                polyhedron.ineq.iter().map(|(a, r)| (a.clone(), r - dot(a, c))).collect(),
                vec![],
            )?,
        },
        _ => bail!("translation needs a polytope"),
    };
    Ok(Body::new(rep, b.symmetric)?)
}

pub fn approx_soft(d: usize, k: usize, ell: &[f64], eps: f64, mu: usize, s: Settings) -> Result<Value> {
    if !(1..=4).contains(&d) {
        bail!("--d must lie in 1..=4, got {d}");
    }
    if !(1..=6).contains(&k) {
        bail!("--k must lie in 1..=6, got {k}");
    }
    if ell.len() != d {
        bail!("--ell has {} entries, expected d = {d}", ell.len());
    }
    let sp = build_soft(&Polyhedron::cube(d), &Matrix::identity(d), k)?;
    let b = convex_approx::bodies::cube(d);
    let a = approximant(&sp, ell, &b, mu, Seed(s.seed))?;
    let dec = accept_test(&sp, ell, eps, &b, mu, Seed(s.seed))?;
    Ok(json!({
        "generators": sp.generators.len() + 1,
        "approximant": a,
        "verdict": dec.verdict,
        "distance": dec.distance,
        "threshold": dec.threshold,
    }))
}

pub fn approx_sdp(n: usize, samples: usize, s: Settings) -> Result<Value> {
    if !(2..=6).contains(&n) {
        bail!("--n must lie in 2..=6, got {n}");
    }
    let r = cut_ratio(n, samples, Seed(s.seed), s.feastol)?;
    Ok(json!({"n": n, "samples": samples, "sampled_ratio_lower_bound": r, "grothendieck_bound": grothendieck_bound()}))
}

pub fn certify(x: &Body, b: &Body, dirs: usize, s: Settings) -> Result<Value> {
    let c = certify_sandwich(x, b, dirs, Seed(s.seed), s.feastol).map_err(|e| anyhow!("certify: {e}"))?;
    Ok(serde_json::to_value(c)?)
}
