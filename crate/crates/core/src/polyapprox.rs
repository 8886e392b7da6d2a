//! Polytope approximations: greedy ε-nets, section/projection conversion,
//! projection algebra, indicator-lift families and the type-2 estimator.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bodies::{certify_sandwich, Body, Rep, SandwichCertificate};
use crate::error::{check_dim, Error, Result};
use crate::lp::{lp_solve, solve_standard, LinearProgram, LpStatus, Polyhedron, StandardLp, StdOutcome};
use crate::numerics::{dot, sample_unit_sphere, sub, Matrix, Seed, Vector};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NetResult {
    pub points: Vec<Vector>,
    pub eps: f64,
    pub cert: SandwichCertificate,
    /// Candidates drawn in the final attempt.
    pub candidates: usize,
}

/// Bound `(1 + 2/ε)^d` on the size of an ε-separated subset of `B`.
pub fn net_size_bound(d: usize, eps: f64) -> f64 {
    (1.0 + 2.0 / eps).powi(d as i32)
}

/// Greedy ε-net on the boundary of a symmetric body.
///
/// Candidates are the vertices (for a V-polytope) followed by `candidates`
/// sphere directions pushed to the boundary. A candidate is kept when its
/// gauge distance to every kept point exceeds `eps`; the scan stops after
/// `stall_cap` consecutive rejections. If the certified factor of
/// `conv(X) ⊂ B ⊂ α conv(X)` exceeds `1/(1−eps)`, the run is repeated with
/// twice as many candidates, up to four times.
pub fn greedy_net(
    b: &Body,
    eps: f64,
    candidates: usize,
    stall_cap: usize,
    seed: Seed,
) -> Result<NetResult> {
    if !b.symmetric {
        return Err(Error::InvalidInput("greedy_net needs a symmetric body".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("eps must lie in (0,1), got {eps}")));
    }
    let d = b.dim();
    let target = 1.0 / (1.0 - eps);
    let bound = net_size_bound(d, eps);
    let mut budget = candidates;
    let mut last_alpha = f64::INFINITY;
    for _attempt in 0..5 {
        let mut stream: Vec<Vector> = b
            .vertices()
            .map(|v| v.iter().map(|p| sub(p, &b.center)).collect())
            .unwrap_or_default();
        for u in sample_unit_sphere(d, budget, seed) {
            let g = b.gauge(&u)?;
            stream.push(u.iter().map(|x| x / g).collect());
        }
        let mut net: Vec<Vector> = Vec::new();
        let mut stall = 0;
        for cand in stream {
            let mut far = true;
            for p in &net {
                if b.gauge(&sub(&cand, p))? <= eps {
                    far = false;
                    break;
                }
            }
            if far {
                net.push(cand);
                stall = 0;
                if net.len() as f64 > bound {
                    return Err(Error::CertificationFailed(format!(
                        "net size {} exceeds (1+2/ε)^d = {bound}",
                        net.len()
                    )));
                }
            } else {
                stall += 1;
                if stall >= stall_cap {
                    break;
                }
            }
        }
        let abs: Vec<Vector> = net
            .iter()
            .map(|p| p.iter().zip(&b.center).map(|(x, c)| x + c).collect())
            .collect();
        let hull = Body {
            rep: Rep::VRep { points: abs.clone() },
            symmetric: false,
            center: b.center.clone(),
        };
        match certify_sandwich(&hull, b, 256, seed.derive(1), 1e-9) {
            Ok(cert) if cert.inner_valid && cert.alpha <= target + 1e-9 => {
                return Ok(NetResult {
                    points: abs,
                    eps,
                    cert,
                    candidates: budget,
                });
            }
            Ok(cert) => last_alpha = cert.alpha,
            Err(Error::OriginNotInterior) => {}
            Err(e) => return Err(e),
        }
        budget *= 2;
    }
    Err(Error::CertificationFailed(format!(
        "outer factor {last_alpha} above 1/(1−ε) = {target} after retries"
    )))
}

/// Lower bound `exp(d/(2α²))` on the vertex count of any polytope `X` with
/// `X ⊂ B ⊂ αX` for the unit ball `B`.
pub fn ball_net_lower_bound(d: usize, alpha: f64) -> f64 {
    (d as f64 / (2.0 * alpha * alpha)).exp()
}

/// Converts a section of a V-polytope into a projection of an H-polytope
/// and back.
///
/// Section `{y : o + Uy ∈ conv(pᵢ)}` becomes the image of
/// `{(λ, y) : λ ≥ 0, Σλ = 1, Σλᵢpᵢ − Uy = o}` under `(λ, y) ↦ y`, which has
/// `N` facets. A projection `T(P)` of `P = {Aw ≤ b}` (origin interior,
/// `N` facets, no equalities, no offset) becomes a section with `N` points
/// by dualizing twice.
pub fn convert_rep(q: &Body) -> Result<Body> {
    match &q.rep {
        Rep::Sectioned {
            points,
            basis,
            offset,
        } => {
            let n = points.len();
            let k = basis.cols();
            let mut ineq = Vec::with_capacity(n);
            for i in 0..n {
                let mut r = vec![0.0; n + k];
                r[i] = -1.0;
                ineq.push((r, 0.0));
            }
            let mut eq = Vec::new();
            for r in 0..basis.rows() {
                let mut row: Vector = points.iter().map(|p| p[r]).collect();
                row.extend((0..k).map(|j| -basis[(r, j)]));
                eq.push((row, offset[r]));
            }
            let mut ones = vec![1.0; n];
            ones.extend(std::iter::repeat_n(0.0, k));
            eq.push((ones, 1.0));
            let mut map = Matrix::zeros(k, n + k);
            for j in 0..k {
                map[(j, n + j)] = 1.0;
            }
            Ok(Body {
                rep: Rep::Projected {
                    polytope: Polyhedron::new(n + k, ineq, eq)?,
                    map,
                    offset: vec![0.0; k],
                },
                symmetric: q.symmetric,
                center: q.center.clone(),
            })
        }
        Rep::Projected {
            polytope,
            map,
            offset,
        } => projection_to_section(q, polytope, map, offset),
        _ => Err(Error::InvalidInput(
            "convert_rep needs a sectioned or projected body".into(),
        )),
    }
}

fn projection_to_section(q: &Body, p: &Polyhedron, t: &Matrix, offset: &[f64]) -> Result<Body> {
    if !p.eq.is_empty() || offset.iter().any(|&o| o != 0.0) || q.center.iter().any(|&c| c != 0.0) {
        return Err(Error::InvalidInput(
            "projection → section needs P without equalities, zero offset and center".into(),
        ));
    }
    let m = p.dim;
    let k = t.rows();
    // vertices of P°
    let mut pts = Vec::with_capacity(p.ineq.len());
    for (a, b) in &p.ineq {
        if *b <= 0.0 {
            return Err(Error::OriginNotInterior);
        }
        pts.push(a.iter().map(|x| x / b).collect::<Vector>());
    }
    let n = pts.len();
    // strictly positive barycentric weights λ₀ with Σ λ₀ⱼ pⱼ = 0
    let mut obj = vec![0.0; n + 1];
    obj[n] = 1.0;
    let mut lp = LinearProgram::new(obj);
    for j in 0..n {
        let mut r = vec![0.0; n + 1];
        r[j] = -1.0;
        r[n] = 1.0;
        lp.ineq.push((r, 0.0));
    }
    lp.ineq.push((
        {
            let mut r = vec![0.0; n + 1];
            r[n] = 1.0;
            r
        },
        1.0,
    ));
    let mut ones = vec![1.0; n];
    ones.push(0.0);
    lp.eq.push((ones, 1.0));
    for r in 0..m {
        let mut row: Vector = pts.iter().map(|pt| pt[r]).collect();
        row.push(0.0);
        lp.eq.push((row, 0.0));
    }
    let sol = lp_solve(&lp, 1e-12)?;
    if sol.status != LpStatus::Optimal || sol.point[n] <= 1e-12 {
        return Err(Error::OriginNotInterior);
    }
    let lam0 = &sol.point[..n];

    // L = {(μ, c) : Σμ = 0, Σ μⱼ pⱼ − Tᵀc = 0}; facets −μⱼ/λ₀ⱼ ≤ 1
    let mut cons = Vec::with_capacity(m + 1);
    let mut first = vec![1.0; n];
    first.extend(std::iter::repeat_n(0.0, k));
    cons.push(first);
    for r in 0..m {
        let mut row: Vector = pts.iter().map(|pt| pt[r]).collect();
        row.extend((0..k).map(|j| -t[(j, r)]));
        cons.push(row);
    }
    let basis_l = Matrix::from_rows(&cons)?.null_space(1e-10);
    if basis_l.is_empty() {
        return Err(Error::OriginNotInterior);
    }
    let bl = Matrix::from_cols(&basis_l)?; // (n+k) × r
    let points: Vec<Vector> = (0..n)
        .map(|j| {
            let mut g = vec![0.0; n + k];
            g[j] = -1.0 / lam0[j];
            bl.tmul_vec(&g)
        })
        .collect();
    let r = basis_l.len();
    let mut u = Matrix::zeros(r, k);
    for j in 0..k {
        let mut e = vec![0.0; n + k];
        e[n + j] = 1.0;
        let col = bl.tmul_vec(&e);
        for i in 0..r {
            u[(i, j)] = col[i];
        }
    }
    Ok(Body {
        rep: Rep::Sectioned {
            points,
            basis: u,
            offset: vec![0.0; r],
        },
        symmetric: q.symmetric,
        center: vec![0.0; k],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CombineMode {
    Intersect,
    Product,
}

fn projected_parts(q: &Body) -> Result<(&Polyhedron, &Matrix, &Vector)> {
    match &q.rep {
        Rep::Projected {
            polytope,
            map,
            offset,
        } => Ok((polytope, map, offset)),
        _ => Err(Error::InvalidInput("combine needs projected bodies".into())),
    }
}

/// Intersection or direct product of two projections; facet counts add.
pub fn combine(q1: &Body, q2: &Body, mode: CombineMode) -> Result<Body> {
    let (p1, t1, o1) = projected_parts(q1)?;
    let (p2, t2, o2) = projected_parts(q2)?;
    let (m1, m2) = (p1.dim, p2.dim);
    let pad = |rows: &[(Vector, f64)], before: usize, after: usize| -> Vec<(Vector, f64)> {
        rows.iter()
            .map(|(a, b)| {
                let mut r = vec![0.0; before];
                r.extend_from_slice(a);
                r.extend(std::iter::repeat_n(0.0, after));
                (r, *b)
            })
            .collect()
    };
    let mut ineq = pad(&p1.ineq, 0, m2);
    ineq.extend(pad(&p2.ineq, m1, 0));
    let mut eq = pad(&p1.eq, 0, m2);
    eq.extend(pad(&p2.eq, m1, 0));
    let (map, offset, center) = match mode {
        CombineMode::Intersect => {
            check_dim("intersection target", t1.rows(), t2.rows())?;
            // T₁w₁ + o₁ = T₂w₂ + o₂
            for i in 0..t1.rows() {
                let mut row = t1.row(i).to_vec();
                row.extend(t2.row(i).iter().map(|x| -x));
                eq.push((row, o2[i] - o1[i]));
            }
            let mut map = Matrix::zeros(t1.rows(), m1 + m2);
            for i in 0..t1.rows() {
                for j in 0..m1 {
                    map[(i, j)] = t1[(i, j)];
                }
            }
            (map, o1.clone(), q1.center.clone())
        }
        CombineMode::Product => {
            let (k1, k2) = (t1.rows(), t2.rows());
            let mut map = Matrix::zeros(k1 + k2, m1 + m2);
            for i in 0..k1 {
                for j in 0..m1 {
                    map[(i, j)] = t1[(i, j)];
                }
            }
            for i in 0..k2 {
                for j in 0..m2 {
                    map[(k1 + i, m1 + j)] = t2[(i, j)];
                }
            }
            let mut offset = o1.clone();
            offset.extend_from_slice(o2);
            let mut center = q1.center.clone();
            center.extend_from_slice(&q2.center);
            (map, offset, center)
        }
    };
    Ok(Body {
        rep: Rep::Projected {
            polytope: Polyhedron::new(m1 + m2, ineq, eq)?,
            map,
            offset,
        },
        symmetric: q1.symmetric && q2.symmetric,
        center,
    })
}

/// A family of subsets of base points and their indicator vectors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftFamily {
    pub base_points: Vec<Vector>,
    pub family: Vec<Vec<usize>>,
    pub generators: Vec<Vector>,
}

impl LiftFamily {
    pub fn new(base_points: Vec<Vector>, family: Vec<Vec<usize>>) -> Result<Self> {
        let n = base_points.len();
        let mut generators = Vec::with_capacity(family.len());
        for f in &family {
            if f.is_empty() {
                return Err(Error::InvalidInput("empty subset in lift family".into()));
            }
            let mut g = vec![0.0; n];
            for &i in f {
                if i >= n {
                    return Err(Error::InvalidInput(format!("index {i} out of range")));
                }
                g[i] = 1.0;
            }
            generators.push(g);
        }
        Ok(LiftFamily {
            base_points,
            family,
            generators,
        })
    }

    pub fn singletons(base_points: Vec<Vector>) -> Result<Self> {
        let family = (0..base_points.len()).map(|i| vec![i]).collect();
        LiftFamily::new(base_points, family)
    }

    pub fn pairs(base_points: Vec<Vector>) -> Result<Self> {
        let n = base_points.len();
        let family = (0..n).flat_map(|i| (i + 1..n).map(move |j| vec![i, j])).collect();
        LiftFamily::new(base_points, family)
    }
}

/// Is `(f(x))_{x ∈ X}` in the conic hull of the family's indicators, for
/// `f(x) = ⟨c, x⟩ + α₀`? The average of `f` over `X` must be 1.
pub fn lift_member(c: &[f64], alpha0: f64, lf: &LiftFamily, feastol: f64) -> Result<bool> {
    let n = lf.base_points.len();
    if n == 0 {
        return Err(Error::InvalidInput("lift family without base points".into()));
    }
    let values: Vector = lf
        .base_points
        .iter()
        .map(|x| {
            check_dim("lift base point", c.len(), x.len())?;
            Ok(dot(c, x) + alpha0)
        })
        .collect::<Result<_>>()?;
    let avg = values.iter().sum::<f64>() / n as f64;
    if (avg - 1.0).abs() > feastol.max(1e-12) {
        return Err(Error::InvalidInput(format!(
            "function average over the base points is {avg}, not 1"
        )));
    }
    let std = StandardLp {
        cols: lf.generators.clone(),
        b: values,
        c: vec![0.0; lf.generators.len()],
    };
    Ok(matches!(solve_standard(&std, feastol)?, StdOutcome::Optimal { .. }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Type2Mode {
    /// All `2^m` sign vectors (`m ≤ 20`).
    Exact,
    MonteCarlo { samples: usize, seed: Seed },
}

/// `sqrt(E‖Σ εᵢxᵢ‖²_B / Σ‖xᵢ‖²_B)` over Rademacher signs; a lower bound for
/// the type-2 constant of `B`.
pub fn type2_lower(b: &Body, vectors: &[Vector], mode: Type2Mode) -> Result<f64> {
    let m = vectors.len();
    if m == 0 {
        return Err(Error::InvalidInput("type2_lower needs vectors".into()));
    }
    let d = b.dim();
    let denom: f64 = vectors
        .iter()
        .map(|x| b.gauge(x).map(|g| g * g))
        .sum::<Result<f64>>()?;
    let eval = |signs: &dyn Fn(usize) -> f64| -> Result<f64> {
        let mut s = vec![0.0; d];
        for (i, x) in vectors.iter().enumerate() {
            let e = signs(i);
            for (si, xi) in s.iter_mut().zip(x) {
                *si += e * xi;
            }
        }
        let g = b.gauge(&s)?;
        Ok(g * g)
    };
    let mean = match mode {
        Type2Mode::Exact => {
            if m > 20 {
                return Err(Error::InvalidInput("exact mode limited to 20 vectors".into()));
            }
            let mut acc = 0.0;
            for bits in 0u64..(1u64 << m) {
                acc += eval(&|i| if bits >> i & 1 == 1 { -1.0 } else { 1.0 })?;
            }
            acc / (1u64 << m) as f64
        }
        Type2Mode::MonteCarlo { samples, seed } => {
            let mut acc = 0.0;
            for k in 0..samples {
                let mut rng = seed.stream(k as u64);
                let signs: Vec<f64> = (0..m).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
                acc += eval(&|i| signs[i])?;
            }
            acc / samples.max(1) as f64
        }
    };
    Ok((mean / denom).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{ball, cross_polytope, cube};
    use crate::numerics::unit;

    #[test]
    fn interval_net() {
        let seg = Body {
            symmetric: true,
            ..Body::vrep(vec![vec![1.0], vec![-1.0]]).unwrap()
        };
        let r = greedy_net(&seg, 0.5, 50, 20, Seed(1)).unwrap();
        assert!(r.points.len() <= 5);
        assert!(r.cert.alpha <= 2.0);
    }

    #[test]
    fn square_net_coarse() {
        let r = greedy_net(&cube(2), 0.9, 100, 50, Seed(2)).unwrap();
        assert!(r.cert.alpha <= 10.0);
        assert!(r.points.len() as f64 <= net_size_bound(2, 0.9));
    }

    #[test]
    fn ball_bound_values() {
        assert!((ball_net_lower_bound(2, 1.0) - std::f64::consts::E).abs() < 1e-12);
        assert!((ball_net_lower_bound(4, 2.0) - 0.5f64.exp()).abs() < 1e-12);
        assert!((ball_net_lower_bound(3, 1e9) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn type2_examples() {
        let e: Vec<Vector> = (0..4).map(|i| unit(4, i)).collect();
        let v = type2_lower(&ball(4, 1.0), &e, Type2Mode::Exact).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let v = type2_lower(&cross_polytope(4), &e, Type2Mode::Exact).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
        let v = type2_lower(&cube(4), &e, Type2Mode::Exact).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lift_examples() {
        let x = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        let lf = LiftFamily::singletons(x).unwrap();
        assert!(lift_member(&[0.0, 0.0], 1.0, &lf, 1e-9).unwrap());
        assert!(lift_member(&[1.0, 0.0], 1.0, &lf, 1e-9).unwrap());
        assert!(!lift_member(&[1.5, 0.0], 1.0, &lf, 1e-9).unwrap());
        assert!(lift_member(&[0.0, 0.0], 2.0, &lf, 1e-9).is_err());
    }

    #[test]
    fn square_from_slabs() {
        let slab = |i: usize| -> Body {
            let mut a = vec![0.0; 2];
            a[i] = 1.0;
            let neg: Vector = a.iter().map(|x| -x).collect();
            Body {
                rep: Rep::Projected {
                    polytope: Polyhedron::new(2, vec![(a, 1.0), (neg, 1.0)], vec![]).unwrap(),
                    map: Matrix::identity(2),
                    offset: vec![0.0; 2],
                },
                symmetric: true,
                center: vec![0.0; 2],
            }
        };
        let sq = combine(&slab(0), &slab(1), CombineMode::Intersect).unwrap();
        let Rep::Projected { polytope, .. } = &sq.rep else { panic!() };
        assert_eq!(polytope.ineq.len(), 4);
        for (x, inside) in [([0.9, -0.9], true), ([1.1, 0.0], false), ([0.0, -1.2], false)] {
            assert_eq!(sq.contains(&x, 1e-9).unwrap(), inside);
        }
        assert!((sq.support(&[1.0, 1.0]).unwrap() - 2.0).abs() < 1e-9);
    }
}
