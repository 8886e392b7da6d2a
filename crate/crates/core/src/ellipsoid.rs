//! Löwner (minimum-volume enclosing) ellipsoids by Khachiyan's barycentric
//! ascent with away steps, and inscribed ellipsoids derived from them.

use serde::{Deserialize, Serialize};

use crate::bodies::{Body, Ellipsoid, Rep};
use crate::error::{check_dim, Error, Result};
use crate::numerics::{dot, sample_unit_sphere, sym_eigen, Seed, SymMatrix, Vector};

pub const DEFAULT_EPS: f64 = 1e-7;
const ITERATION_CAP: usize = 1_000_000;
const REFRESH_EVERY: usize = 500;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MveeResult {
    pub ellipsoid: Ellipsoid,
    pub iterations: usize,
    /// Relative duality gap `max_i M_i / D − 1` at termination.
    pub gap: f64,
    /// Khachiyan weights on the input points (sum 1).
    pub weights: Vector,
}

/// Weighted Gram matrix `Σ uᵢ qᵢ qᵢᵀ`.
fn moment(q: &[Vector], u: &[f64]) -> SymMatrix {
    let mut x = SymMatrix::zeros(q[0].len());
    for (qi, &ui) in q.iter().zip(u) {
        if ui > 0.0 {
            x.add_outer(ui, qi);
        }
    }
    x
}

/// Fails with the weakest direction when the points do not span.
fn check_span(q: &[Vector]) -> Result<()> {
    let u = vec![1.0 / q.len() as f64; q.len()];
    let x = moment(q, &u);
    let e = sym_eigen(&x, 1e-12)?;
    if e.min() <= 1e-12 * e.max().max(1e-300) {
        let k = e.values.len() - 1;
        return Err(Error::Degenerate {
            what: "points do not span the space".into(),
            direction: e.vectors.col(k),
        });
    }
    Ok(())
}

/// Core ascent on lifted points `qᵢ ∈ R^D`: maximizes `log det Σ uᵢqᵢqᵢᵀ`
/// until `max qᵢᵀX⁻¹qᵢ ≤ D(1+eps)`.
fn khachiyan(q: &[Vector], eps: f64) -> Result<(Vector, usize, f64)> {
    let n = q.len();
    let dd = q[0].len() as f64;
    let mut u = vec![1.0 / n as f64; n];
    let mut xinv = moment(q, &u).inverse()?;
    let mut m: Vector = q.iter().map(|qi| xinv.quad_form(qi)).collect();
    let mut it = 0;
    loop {
        if it % REFRESH_EVERY == 0 && it > 0 {
            xinv = moment(q, &u).inverse()?;
            m = q.iter().map(|qi| xinv.quad_form(qi)).collect();
        }
        let (j, kp) = m
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let gap = kp / dd - 1.0;
        if gap <= eps {
            return Ok((u, it, gap.max(0.0)));
        }
        if it >= ITERATION_CAP {
            return Err(Error::NonConvergence {
                what: "Khachiyan ascent",
                iterations: it,
            });
        }
        let (k, km) = m
            .iter()
            .enumerate()
            .filter(|&(i, _)| u[i] > 0.0)
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        // toward step on j, or away step off k
        // points with km ≤ 1 are dropped outright by the line search
        let (idx, s) = if kp - dd >= dd - km || u[k] >= 1.0 {
            (j, (kp - dd) / (dd * (kp - 1.0)))
        } else {
            let full = u[k] / (1.0 - u[k]);
            let s = if km > 1.0 { ((dd - km) / (dd * (km - 1.0))).min(full) } else { full };
            (k, -s)
        };
        // X' = (1−s)X + s q qᵀ, Sherman–Morrison on X⁻¹
        let qj = &q[idx];
        let w = xinv.mul_vec(qj);
        let mj = dot(qj, &w);
        let denom = (1.0 - s) + s * mj;
        let wq: Vector = q.iter().map(|qi| dot(qi, &w)).collect();
        for i in 0..n {
            m[i] = (m[i] - s * wq[i] * wq[i] / denom) / (1.0 - s);
        }
        xinv.add_outer(-s / denom, &w);
        xinv.scale(1.0 / (1.0 - s));
        for ui in u.iter_mut() {
            *ui *= 1.0 - s;
        }
        u[idx] += s;
        if u[idx] < 1e-15 {
            u[idx] = 0.0;
        }
        it += 1;
    }
}

/// Minimum-volume enclosing ellipsoid of `points` (general center).
///
/// The returned form is rescaled so that every point satisfies
/// `q(p − v₀) ≤ 1` exactly; `gap` bounds the volume excess.
pub fn loewner_mvee(points: &[Vector], eps: f64) -> Result<MveeResult> {
    let d = points.first().map(|p| p.len()).unwrap_or(0);
    if d == 0 {
        return Err(Error::InvalidInput("MVEE needs points".into()));
    }
    for p in points {
        check_dim("MVEE point", d, p.len())?;
    }
    let mean: Vector = (0..d)
        .map(|k| points.iter().map(|p| p[k]).sum::<f64>() / points.len() as f64)
        .collect();
    let centred: Vec<Vector> = points
        .iter()
        .map(|p| p.iter().zip(&mean).map(|(a, b)| a - b).collect())
        .collect();
    check_span(&centred)?;
    let lifted: Vec<Vector> = points
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.push(1.0);
            q
        })
        .collect();
    let (u, iterations, gap) = khachiyan(&lifted, eps)?;
    let center: Vector = (0..d)
        .map(|k| points.iter().zip(&u).map(|(p, w)| w * p[k]).sum())
        .collect();
    let mut cov = moment(points, &u);
    cov.add_outer(-1.0, &center);
    let mut form = cov.inverse()?;
    form.scale(1.0 / d as f64);
    let e = finish(center, form, points)?;
    Ok(MveeResult {
        ellipsoid: e,
        iterations,
        gap,
        weights: u,
    })
}

/// Origin-centred minimum-volume ellipsoid of `±points`.
pub fn loewner_mvee_symmetric(points: &[Vector], eps: f64) -> Result<MveeResult> {
    let d = points.first().map(|p| p.len()).unwrap_or(0);
    if d == 0 {
        return Err(Error::InvalidInput("MVEE needs points".into()));
    }
    for p in points {
        check_dim("MVEE point", d, p.len())?;
    }
    check_span(points)?;
    let (u, iterations, gap) = khachiyan(points, eps)?;
    let mut form = moment(points, &u).inverse()?;
    form.scale(1.0 / d as f64);
    let e = finish(vec![0.0; d], form, points)?;
    Ok(MveeResult {
        ellipsoid: e,
        iterations,
        gap,
        weights: u,
    })
}

fn finish(center: Vector, mut form: SymMatrix, points: &[Vector]) -> Result<Ellipsoid> {
    let e = Ellipsoid::new(center.clone(), form.clone())?;
    let worst = points.iter().map(|p| e.value(p)).fold(0.0f64, f64::max);
    if worst > 1.0 {
        form.scale(1.0 / worst);
    }
    Ellipsoid::new(center, form)
}

/// Inscribed ellipsoid `E ⊂ B ⊂ √d·E` of a symmetric V-polytope.
///
/// Built from the symmetric Khachiyan weights: `E = {x : xᵀM⁻¹x ≤ 1}` with
/// `M = Σ uᵢ vᵢ vᵢᵀ`. Its support function `√(Σ uᵢ⟨c,vᵢ⟩²)` never exceeds
/// `max |⟨c,vᵢ⟩|`, so containment holds for any weights; at the optimum `E`
/// is the Löwner ellipsoid shrunk by `√d`.
pub fn john_inner_symmetric(b: &Body, eps: f64) -> Result<Ellipsoid> {
    let Rep::VRep { points } = &b.rep else {
        return Err(Error::InvalidInput("john_inner_symmetric needs a V-polytope".into()));
    };
    if !b.symmetric {
        return Err(Error::InvalidInput("body is not flagged symmetric".into()));
    }
    let c = &b.center;
    let rel: Vec<Vector> = points
        .iter()
        .map(|p| p.iter().zip(c).map(|(x, y)| x - y).collect())
        .collect();
    let r = loewner_mvee_symmetric(&rel, eps)?;
    let e = Ellipsoid::new(c.clone(), moment(&rel, &r.weights).inverse()?)?;
    // boundary samples of E must lie in B
    for u in sample_unit_sphere(b.dim(), 64, Seed(0x5eed)) {
        let p = e.boundary_point(&u);
        let rel_p: Vector = p.iter().zip(c).map(|(x, y)| x - y).collect();
        if b.gauge(&rel_p)? > 1.0 + eps.max(1e-9) {
            return Err(Error::CertificationFailed(
                "inscribed ellipsoid leaves the body".into(),
            ));
        }
    }
    Ok(e)
}

/// Inscribed ellipsoid of `B = {x : aⱼ·x ≤ 1}` as the polar of the Löwner
/// ellipsoid of `conv(aⱼ)`.
pub fn inscribed_via_polar(normals: &[Vector], eps: f64) -> Result<Ellipsoid> {
    let r = loewner_mvee(normals, eps)?;
    r.ellipsoid.polar()
}
