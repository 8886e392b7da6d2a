//! Two-sided containment certificates `X ⊂ B ⊂ α X`.

use serde::{Deserialize, Serialize};

use super::{facets_bruteforce, Body, Rep};
use crate::error::{check_dim, Error, Result};
use crate::numerics::{binomial, dot, norm2, sample_unit_sphere, sub, Seed, Vector};

/// Largest subset count the facet scan is allowed to enumerate.
const SCAN_BUDGET: f64 = 2.0e5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertMode {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichCertificate {
    /// Certified outer factor, clamped to be at least 1.
    pub alpha: f64,
    /// `max gauge_X` over `B` before clamping.
    pub raw_alpha: f64,
    pub inner_valid: bool,
    pub inner_mode: CertMode,
    pub outer_mode: CertMode,
    /// Points of `X` (or facet directions of `B`) that were checked.
    pub inner_witnesses: Vec<Vector>,
    /// First failing witness of the inner check.
    pub violation: Option<Vector>,
    /// Point of `B − c` (exact mode) or direction (sampled) attaining alpha.
    pub outer_witness: Vector,
    pub tol: f64,
}

#[derive(Clone, Debug)]
pub struct SandwichOptions {
    pub n_dirs: usize,
    pub seed: Seed,
    pub tol: f64,
    /// Facets `a·(x − c) ≤ 1` of `X`, when known.
    pub x_facets: Option<Vec<Vector>>,
    /// Facets `a·(x − c) ≤ 1` of `B`, when known.
    pub b_facets: Option<Vec<Vector>>,
}

impl SandwichOptions {
    pub fn new(n_dirs: usize, seed: Seed, tol: f64) -> Self {
        SandwichOptions {
            n_dirs,
            seed,
            tol,
            x_facets: None,
            b_facets: None,
        }
    }
}

fn scan_affordable(n: usize, d: usize) -> bool {
    d <= 6 && binomial(n as u64, d as u64) <= SCAN_BUDGET
}

/// Facet normals of `body − center`, scaled to right-hand side 1.
fn relative_facets(body: &Body) -> Option<Vec<Vector>> {
    let c = &body.center;
    match &body.rep {
        Rep::HRep { polyhedron } if polyhedron.eq.is_empty() => polyhedron
            .ineq
            .iter()
            .map(|(a, b)| {
                let s = b - dot(a, c);
                (s > 0.0).then(|| a.iter().map(|x| x / s).collect())
            })
            .collect(),
        Rep::VRep { points } if scan_affordable(points.len(), body.dim()) => {
            let rel: Vec<Vector> = points.iter().map(|p| sub(p, c)).collect();
            facets_bruteforce(&rel, 1e-9)
                .ok()
                .map(|f| f.into_iter().map(|(a, _)| a).collect())
        }
        _ => None,
    }
}

/// Vertices of `body − center` when available exactly.
fn relative_vertices(body: &Body, facets: Option<&Vec<Vector>>) -> Option<Vec<Vector>> {
    if let Rep::VRep { points } = &body.rep {
        return Some(points.iter().map(|p| sub(p, &body.center)).collect());
    }
    let f = facets?;
    if !scan_affordable(f.len(), body.dim()) {
        return None;
    }
    // vertices of B are the facets of the polar conv(normals)
    facets_bruteforce(f, 1e-9)
        .ok()
        .map(|v| v.into_iter().map(|(a, _)| a).collect())
}

/// Certifies `X ⊂ B ⊂ α X` about their common center with default options.
pub fn certify_sandwich(
    x: &Body,
    b: &Body,
    n_dirs: usize,
    seed: Seed,
    tol: f64,
) -> Result<SandwichCertificate> {
    certify_sandwich_with(x, b, &SandwichOptions::new(n_dirs, seed, tol))
}

/// Certifies `X ⊂ B ⊂ α X`.
///
/// The inner check is exact when `X` has vertices (each tested in `B`) or
/// `B` has known facets (support of `X` tested against each). The outer
/// factor is exact when `B` has known vertices (`α = max gauge_X`) or `X`
/// has known facets (`α = max support_B` over them). Otherwise both fall
/// back to `n_dirs` sampled directions. Sampled support ratios are always
/// folded into `alpha`.
pub fn certify_sandwich_with(
    x: &Body,
    b: &Body,
    opts: &SandwichOptions,
) -> Result<SandwichCertificate> {
    check_dim("sandwich bodies", x.dim(), b.dim())?;
    let d = x.dim();
    if norm2(&sub(&x.center, &b.center)) > 1e-9 * (1.0 + norm2(&x.center)) {
        return Err(Error::InvalidInput("bodies must share their center".into()));
    }
    let tol = opts.tol;
    let c = &x.center;
    let dirs = sample_unit_sphere(d, opts.n_dirs, opts.seed);

    let b_facets = opts.b_facets.clone().or_else(|| relative_facets(b));
    let x_facets = opts.x_facets.clone().or_else(|| relative_facets(x));

    // inner: X ⊂ B
    let mut inner_witnesses = Vec::new();
    let mut violation = None;
    let inner_mode;
    if let Rep::VRep { points } = &x.rep {
        inner_mode = CertMode::Exact;
        for p in points {
            inner_witnesses.push(p.clone());
            if violation.is_none() && !b.contains(p, tol)? {
                violation = Some(p.clone());
            }
        }
    } else if let Some(fs) = &b_facets {
        inner_mode = CertMode::Exact;
        for a in fs {
            inner_witnesses.push(a.clone());
            if violation.is_none() && x.support(a)? > 1.0 + tol {
                violation = Some(a.clone());
            }
        }
    } else {
        inner_mode = CertMode::Sampled;
        for u in &dirs {
            let g = x.gauge(u)?;
            let p: Vector = c.iter().zip(u).map(|(ci, ui)| ci + ui / g).collect();
            inner_witnesses.push(p.clone());
            if violation.is_none() && !b.contains(&p, tol)? {
                violation = Some(p);
            }
        }
    }

    // outer: B ⊂ α X
    let mut raw = f64::NEG_INFINITY;
    let mut witness = vec![0.0; d];
    let outer_mode;
    if let Some(verts) = relative_vertices(b, b_facets.as_ref()) {
        outer_mode = CertMode::Exact;
        for v in verts {
            let g = x.gauge(&v)?;
            if g > raw {
                raw = g;
                witness = v;
            }
        }
    } else if let Some(fs) = &x_facets {
        outer_mode = CertMode::Exact;
        for a in fs {
            let h = b.support(a)?;
            if h > raw {
                raw = h;
                witness = a.clone();
            }
        }
    } else {
        outer_mode = CertMode::Sampled;
    }
    for u in &dirs {
        let r = b.support(u)? / x.support(u)?;
        if r > raw {
            raw = r;
            witness = u.clone();
        }
    }
    if !raw.is_finite() {
        return Err(Error::CertificationFailed(
            "no exact data and no sample directions for the outer factor".into(),
        ));
    }
    Ok(SandwichCertificate {
        alpha: raw.max(1.0),
        raw_alpha: raw,
        inner_valid: violation.is_none(),
        inner_mode,
        outer_mode,
        inner_witnesses,
        violation,
        outer_witness: witness,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{ball, cross_polytope, cube, Ellipsoid};

    #[test]
    fn identical_bodies() {
        let c = certify_sandwich(&cube(3), &cube(3), 200, Seed(1), 1e-9).unwrap();
        assert!(c.inner_valid);
        assert!((c.alpha - 1.0).abs() <= 1e-9);
        assert_eq!(c.outer_mode, CertMode::Exact);
    }

    #[test]
    fn half_ball() {
        let c = certify_sandwich(&ball(3, 0.5), &ball(3, 1.0), 500, Seed(2), 1e-9).unwrap();
        assert!(c.inner_valid);
        assert_eq!(c.inner_mode, CertMode::Sampled);
        assert!((c.alpha - 2.0).abs() <= 1e-9);
    }

    #[test]
    fn disc_in_square() {
        let disc = Body::ellipsoid(Ellipsoid::ball(vec![0.0, 0.0], 1.0));
        let c = certify_sandwich(&disc, &cube(2), 100, Seed(3), 1e-9).unwrap();
        assert!(c.inner_valid);
        assert_eq!(c.inner_mode, CertMode::Exact);
        assert_eq!(c.outer_mode, CertMode::Exact);
        assert!((c.alpha - 2f64.sqrt()).abs() <= 1e-6);
    }

    #[test]
    fn violation_reported() {
        let c = certify_sandwich(&cube(2), &cross_polytope(2), 10, Seed(4), 1e-9).unwrap();
        assert!(!c.inner_valid);
        assert!(c.violation.is_some());
    }
}
