//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Reference values are recomputed here
//! from closed forms or brute force rather than taken from the library.

use std::time::{Duration, Instant};

use convex_approx::bodies::{
    ball, certify_sandwich_with, cross_polytope, cube, make_cut, make_tsp, sample_uniform, Body, Ellipsoid,
    Rep, SandwichOptions,
};
use convex_approx::ellipsoid::{inscribed_via_polar, john_inner_symmetric};
use convex_approx::lp::{member_vrep, Polyhedron};
use convex_approx::numerics::{is_psd, sample_unit_sphere, Matrix, Seed, SymMatrix, Vector};
use convex_approx::polyapprox::{greedy_net, type2_lower, Type2Mode};
use convex_approx::polynorm::{power_sum_norm, tensor_lift, EmpiricalMeasure, PolynomialNorm};
use convex_approx::sdprelax::{
    acut_brute_member, cut_ratio, cut_relax_member, grothendieck_bound, q_member, q_samples, qv_certify,
    relaxation_boundary_samples,
};
use convex_approx::socone::{ball_bn, ball_bn_facet_count, planar_outer_radius, support_point};
use convex_approx::softapprox::{accept_test, approximant, build_soft, Verdict};
use rand::Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    format!("error: {e}")
}

// ---------- independent oracles ----------

fn binom(n: u64, k: u64) -> u64 {
    (1..=k).fold(1u64, |acc, i| acc * (n + 1 - i) / i)
}

fn l1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

fn linf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn quad(q: &SymMatrix, x: &[f64]) -> f64 {
    let n = x.len();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| x[i] * q.get(i, j) * x[j]).sum()
}

/// Gauss–Jordan inverse of a small dense matrix.
fn inverse(a: &SymMatrix) -> Vec<Vec<f64>> {
    let n = a.dim();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..2 * n).map(|j| if j < n { a.get(i, j) } else if j - n == i { 1.0 } else { 0.0 }).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
        m.swap(c, p);
        let piv = m[c][c];
        for v in m[c].iter_mut() {
            *v /= piv;
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                let row = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(row) {
                    *x -= f * y;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(a: &SymMatrix) -> Vec<f64> {
    let n = a.dim();
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[i][j] * m[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}

/// Planar hull membership by testing every triangle of the point set.
fn in_some_triangle(x: &[f64], pts: &[Vector], tol: f64) -> bool {
    let n = pts.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (p, q, r) = (&pts[a], &pts[b], &pts[c]);
                let det = (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]);
                if det.abs() < 1e-14 {
                    continue;
                }
                let s = ((x[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (x[1] - p[1])) / det;
                let t = ((q[0] - p[0]) * (x[1] - p[1]) - (x[0] - p[0]) * (q[1] - p[1])) / det;
                if s >= -tol && t >= -tol && s + t <= 1.0 + tol {
                    return true;
                }
            }
        }
    }
    false
}

fn cube_vertices(d: usize) -> Vec<Vector> {
    (0..1usize << d)
        .map(|m| (0..d).map(|i| if m >> i & 1 == 1 { -1.0 } else { 1.0 }).collect())
        .collect()
}

fn axis_facets(d: usize) -> Vec<Vector> {
    (0..d)
        .flat_map(|i| {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            let f: Vector = e.iter().map(|x| -x).collect();
            [e, f]
        })
        .collect()
}

/// Undirected Hamiltonian cycles on `n` vertices as adjacency matrices.
fn hamiltonian_cycles(n: usize) -> Vec<Matrix> {
    fn perms(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            perms(rest, cur, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    let mut all = Vec::new();
    perms(&mut (1..n).collect(), &mut Vec::new(), &mut all);
    all.into_iter()
        .filter(|p| p[0] < p[p.len() - 1])
        .map(|p| {
            let mut m = Matrix::zeros(n, n);
            let tour: Vec<usize> = std::iter::once(0).chain(p).collect();
            for t in 0..n {
                let (i, j) = (tour[t], tour[(t + 1) % n]);
                m[(i, j)] = 1.0;
                m[(j, i)] = 1.0;
            }
            m
        })
        .collect()
}

fn flatten(m: &Matrix) -> Vector {
    (0..m.rows()).flat_map(|i| (0..m.cols()).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect()
}

// ---------- criteria ----------

fn c1_john_cube() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=6 {
        let b = Body::new(Rep::VRep { points: cube_vertices(d) }, true).map_err(fail)?;
        let e = john_inner_symmetric(&b, 1e-10).map_err(fail)?;
        let mut opts = SandwichOptions::new(256, Seed(d as u64), 1e-9);
        opts.b_facets = Some(axis_facets(d));
        let mut eb = Body::ellipsoid(e.clone());
        eb.symmetric = true;
        let c = certify_sandwich_with(&eb, &b, &opts).map_err(fail)?;
        let want = (d as f64).sqrt();
        // E ⊂ cube: h_E(eᵢ) = sqrt(eᵢᵀ Q⁻¹ eᵢ) ≤ 1
        let qi = inverse(&e.form);
        let inner = (0..d).all(|i| qi[i][i].sqrt() <= 1.0 + 1e-6);
        // cube ⊂ αE: α = max over vertices of sqrt(vᵀ Q v)
        let alpha = cube_vertices(d).iter().map(|v| quad(&e.form, v).sqrt()).fold(0.0, f64::max);
        if !(c.inner_valid && inner && (c.alpha - want).abs() <= 1e-3 && (alpha - want).abs() <= 1e-3) {
            return Err(format!("d={d}: certified {} oracle {alpha} want {want}", c.alpha));
        }
        worst = worst.max((c.alpha - want).abs());
    }
    Ok(format!("cube d=2..6 certified factor = √d, max deviation {worst:.2e} ≤ 1e-3"))
}

fn c2_tsp() -> Outcome {
    let mut parts = Vec::new();
    for n in [5usize, 6] {
        let tsp = make_tsp(n).map_err(fail)?;
        let normals: Vec<Vector> = tsp.facets().map_err(fail)?.into_iter().map(|(a, _)| a).collect();
        let e: Ellipsoid = inscribed_via_polar(&normals, 1e-10).map_err(fail)?;
        let mut opts = SandwichOptions::new(256, Seed(n as u64), 1e-9);
        opts.b_facets = Some(normals);
        let c = certify_sandwich_with(&Body::ellipsoid(e.clone()), &tsp.body, &opts).map_err(fail)?;
        let bound = (n as f64 - 3.0) * (n as f64).sqrt() / 2.0;
        let cycles = hamiltonian_cycles(n);
        let expected_cycles = (1..n).product::<usize>() / 2;
        // outer factor over the independently enumerated tours
        let alpha = cycles
            .iter()
            .map(|m| {
                let z = tsp.to_intrinsic(m);
                let rel: Vector = z.iter().zip(&e.center).map(|(a, b)| a - b).collect();
                quad(&e.form, &rel).sqrt()
            })
            .fold(0.0, f64::max);
        let ok = cycles.len() == expected_cycles
            && c.inner_valid
            && c.alpha <= bound + 1e-3
            && alpha <= bound + 1e-3
            && (alpha - c.alpha).abs() <= 1e-6 * (1.0 + alpha);
        let msg = format!("n={n}: certified {:.5} tour oracle {alpha:.5} ≤ {bound:.5}+1e-3", c.alpha);
        if !ok {
            return Err(msg);
        }
        parts.push(msg);
    }
    Ok(parts.join("; "))
}

fn c3_eps_net() -> Outcome {
    let mut parts = Vec::new();
    for d in [2usize, 3] {
        for eps in [0.5, 0.25] {
            let b = ball(d, 1.0);
            let r = greedy_net(&b, eps, 4000, 4000, Seed(10 * d as u64 + (eps * 4.0) as u64)).map_err(fail)?;
            let size = r.points.len() as f64;
            let cap = (1.0 + 2.0 / eps).powi(d as i32);
            // ε-separated on the sphere, checked pairwise
            let sep = r
                .points
                .iter()
                .enumerate()
                .all(|(i, p)| r.points[i + 1..].iter().all(|q| l2(&p.iter().zip(q).map(|(a, b)| a - b).collect::<Vec<_>>()) > eps - 1e-12));
            let target = 1.0 / (1.0 - eps) + 1e-3;
            let lower = (d as f64 / (2.0 * r.cert.alpha * r.cert.alpha)).exp();
            let ok = size <= cap && sep && r.cert.inner_valid && r.cert.alpha <= target && size >= lower;
            let msg = format!("d={d} ε={eps}: |X|={size} ≤ {cap:.0}, α={:.4} ≤ {target:.4}, |X| ≥ {lower:.2}", r.cert.alpha);
            if !ok {
                return Err(msg);
            }
            parts.push(format!("d={d} ε={eps} |X|={size} α={:.4}", r.cert.alpha));
        }
    }
    Ok(parts.join("; "))
}

fn c4_bn() -> Outcome {
    let mut deltas = Vec::new();
    for m in 4..=10 {
        let b = ball_bn(2, m).map_err(fail)?;
        let r = planar_outer_radius(&b).map_err(fail)?;
        // bracket by 720 sampled support values: R_s ≤ R ≤ R_s / cos(π/720)
        let mut rs = 0.0f64;
        for i in 0..720 {
            let t = 2.0 * std::f64::consts::PI * i as f64 / 720.0;
            rs = rs.max(support_point(&b, &[t.cos(), t.sin()]).map_err(fail)?.0);
        }
        let hi = rs / (std::f64::consts::PI / 720.0).cos();
        if !(r >= rs - 1e-9 && r <= hi + 1e-9) {
            return Err(format!("m={m}: radius {r} outside sampled bracket [{rs}, {hi}]"));
        }
        deltas.push(r - 1.0);
    }
    for (i, w) in deltas.windows(2).enumerate() {
        if w[1] > w[0] / 2.0 {
            return Err(format!("m={}: error {} not ≤ half of {}", i + 5, w[1], w[0]));
        }
    }
    let oracle = 1.0 / (std::f64::consts::PI / 64.0).cos() - 1.0;
    let d6 = deltas[2];
    if d6 > 2e-3 {
        return Err(format!("m=6 error {d6} > 2e-3"));
    }
    let facets = ball_bn_facet_count(4, 6);
    let body = ball_bn(4, 6).map_err(fail)?;
    let rows = match &body.rep {
        Rep::Projected { polytope, .. } => polytope.ineq.len(),
        _ => return Err("ball_bn is not a projection".into()),
    };
    if facets > 72 || rows != facets {
        return Err(format!("d=4 m=6: facet count {facets} (rows {rows}) vs cap 72"));
    }
    let mut outside = 0;
    for u in sample_unit_sphere(4, 1000, Seed(4)) {
        if !body.contains(&u, 1e-9).map_err(fail)? {
            outside += 1;
        }
    }
    check(
        outside == 0,
        format!(
            "d=2 m=4..10 error halves per stage, m=6 error {d6:.3e} ≤ 2e-3 (grid oracle {oracle:.3e}); d=4 m=6: {facets} facets ≤ 72, {outside}/1000 boundary samples outside"
        ),
    )
}

fn c5_tensor() -> Outcome {
    let s = tensor_lift(&cube_vertices(3), 2, 1e-10).map_err(fail)?;
    let upper = (binom(4, 2) as f64).powf(0.25) * 1.01;
    let mut rng = Seed(5).stream(0);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..10_000 {
        let v: Vector = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = l1(&v) / s.norm(&v);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    if !(lo >= 1.0 - 1e-9 && hi <= upper) {
        return Err(format!("O_3 k=2 ratio range [{lo}, {hi}] vs [1−1e-9, {upper}]"));
    }
    for k in 1..=6 {
        let t = tensor_lift(&[vec![1.0], vec![-1.0]], k, 1e-12).map_err(fail)?;
        for x in [0.3, -1.7, 4.0] {
            let r = f64::abs(x) / t.norm(&[x]);
            if (r - 1.0).abs() > 1e-9 || (t.factor - 1.0).abs() > 1e-9 {
                return Err(format!("interval k={k}: ratio {r}, factor {}", t.factor));
            }
        }
    }
    Ok(format!("O_3 k=2 ratio range [{lo:.6}, {hi:.6}] ⊆ [1−1e-9, {upper:.6}]; interval k=1..6 factor 1"))
}

fn c6_power() -> Outcome {
    let p = power_sum_norm(4, 2).map_err(fail)?;
    let bound = 4f64.powf(0.25);
    let mut rng = Seed(6).stream(0);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..10_000 {
        let x: Vector = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let direct = x.iter().map(|v| v.powi(4)).sum::<f64>().powf(0.25);
        if (p.norm(&x) - direct).abs() > 1e-12 {
            return Err(format!("norm mismatch at {x:?}"));
        }
        let r = direct / linf(&x);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let ones = p.norm(&[1.0; 4]);
    check(
        lo >= 1.0 - 1e-12 && hi <= bound + 1e-12 && (ones - bound).abs() <= 1e-9,
        format!("ratio range [{lo:.6}, {hi:.6}] ⊆ [1, {bound:.6}], all-ones {ones:.12}"),
    )
}

fn c7_cut() -> Outcome {
    let feastol = 1e-9;
    let samples = relaxation_boundary_samples(2, 200, Seed(7)).map_err(fail)?;
    // CUT_2 = {unit diagonal, |x₁₂| ≤ 1}
    let in_cut2 = samples
        .iter()
        .all(|r| (r.get(0, 0) - 1.0).abs() <= 1e-9 && (r.get(1, 1) - 1.0).abs() <= 1e-9 && r.get(0, 1).abs() <= 1.0 + 1e-9);
    let r2 = cut_ratio(2, 40, Seed(7), feastol).map_err(fail)?;
    if !in_cut2 || (r2 - 1.0).abs() > 1e-6 {
        return Err(format!("n=2: samples in CUT_2 {in_cut2}, ratio {r2}"));
    }
    let mut parts = vec![format!("n=2 ratio {r2:.9}")];
    for n in 3..=5 {
        for v in make_cut(n, false).map_err(fail)? {
            if !cut_relax_member(&SymMatrix::from_matrix_symmetrized(&v).map_err(fail)?, feastol).map_err(fail)? {
                return Err(format!("n={n}: a cut vertex fails the relaxation test"));
            }
        }
        let r = cut_ratio(n, 40, Seed(7 + n as u64), feastol).map_err(fail)?;
        if !(r.is_finite() && r >= 1.0) {
            return Err(format!("n={n}: ratio {r}"));
        }
        parts.push(format!("n={n} ratio {r:.4}"));
    }
    Ok(parts.join("; "))
}

fn c8_grothendieck() -> Outcome {
    let shrink = 1.0 / grothendieck_bound();
    let mut checked = 0;
    for n in 2..=3 {
        let verts = make_cut(n, true).map_err(fail)?;
        for v in &verts {
            if !q_member(v, 1e-7, 20_000).map_err(fail)?.is_feasible() {
                return Err(format!("n={n}: ACUT vertex not in Q"));
            }
        }
        // second path: LP hull membership over the flattened vertex list
        let flat: Vec<Vector> = verts.iter().map(flatten).collect();
        for q in q_samples(n, 60, Seed(8 + n as u64)) {
            let mut s = q.clone();
            for a in 0..n {
                for b in 0..n {
                    s[(a, b)] *= shrink;
                }
            }
            let brute = acut_brute_member(&s, 1e-9).map_err(fail)?;
            let hull = member_vrep(&flatten(&s), &flat, 1e-9).map_err(fail)?;
            if !brute || !hull {
                return Err(format!("n={n}: shrunk Q point outside ACUT (brute {brute}, hull {hull})"));
            }
            checked += 1;
        }
    }
    Ok(format!("ACUT vertices in Q for n=2,3; {checked} shrunk Q samples inside ACUT by two oracles"))
}

fn c9_soft() -> Outcome {
    let d = 3;
    let k = 4;
    let sp = build_soft(&Polyhedron::cube(d), &Matrix::identity(d), k).map_err(fail)?;
    let b = cube(d);
    let count = sp.generators.len() as u64 + 1;
    if count != binom(10, 4) {
        return Err(format!("generator count {count} (with the origin) ≠ C(10,4)"));
    }
    let mut worst = f64::MIN;
    for (i, x) in sample_uniform(&b, 1000, Seed(9)).map_err(fail)?.iter().enumerate() {
        worst = worst.max(sp.eval_generators(x, i as u64).map_err(fail)?.into_iter().fold(f64::MIN, f64::max));
    }
    if worst > 1.0 + 1e-9 {
        return Err(format!("generator value {worst} > 1 + 1e-9"));
    }
    let probe = sample_uniform(&b, 50, Seed(99)).map_err(fail)?;
    let mut parts = vec![format!("{count} generators, max value {worst:.6}")];
    for (e, eps) in [0.5f64, 0.25, 0.1].into_iter().enumerate() {
        let mut rng = Seed(90 + e as u64).stream(0);
        let (mut worst_err, mut worst_probe) = (0.0f64, 0.0f64);
        for trial in 0..100u64 {
            let g: Vector = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r: f64 = rng.gen_range(0.0..1.0);
            let ell: Vector = g.iter().map(|x| eps * r * x / l1(&g)).collect();
            let seed = Seed(900 + e as u64).derive(trial);
            let a = approximant(&sp, &ell, &b, 1000, seed).map_err(fail)?;
            worst_err = worst_err.max(a.max_error);
            // recompute h = Σ wᵢ hᵢ on fresh points
            for (i, x) in probe.iter().enumerate() {
                let h: f64 = sp.eval_generators(x, i as u64).map_err(fail)?.iter().zip(&a.weights).map(|(g, w)| g * w).sum();
                let lx: f64 = ell.iter().zip(x).map(|(a, b)| a * b).sum();
                worst_probe = worst_probe.max((lx - h).abs());
            }
            let dec = accept_test(&sp, &ell, eps, &b, 200, seed).map_err(fail)?;
            if dec.verdict != Verdict::Accept {
                return Err(format!("ε={eps}: functional {ell:?} rejected"));
            }
        }
        let cap = eps * eps;
        if worst_err > cap || worst_probe > cap {
            return Err(format!("ε={eps}: sup error {worst_err} (probe {worst_probe}) > ε² = {cap}"));
        }
        parts.push(format!("ε={eps} sup error {worst_err:.2e} ≤ {cap}"));
    }
    Ok(parts.join("; "))
}

fn c10_type2() -> Outcome {
    for d in 1..=10usize {
        let basis: Vec<Vector> = (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        // every sign sum of the standard basis has ℓ₂ norm √d and ℓ₁ norm d
        let (mut s2, mut s1) = (0.0, 0.0);
        for bits in 0..1u32 << d {
            let v: Vector = (0..d).map(|i| if bits >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
            s2 += l2(&v).powi(2);
            s1 += l1(&v).powi(2);
        }
        let count = (1u64 << d) as f64;
        let want_ball = (s2 / count / d as f64).sqrt();
        let want_cross = (s1 / count / d as f64).sqrt();
        let vb = type2_lower(&ball(d, 1.0), &basis, Type2Mode::Exact).map_err(fail)?;
        let vc = type2_lower(&cross_polytope(d), &basis, Type2Mode::Exact).map_err(fail)?;
        let sd = (d as f64).sqrt();
        if (vb - 1.0).abs() > 1e-12 || (vc - sd).abs() > 1e-12 || (want_ball - 1.0).abs() > 1e-12 || (want_cross - sd).abs() > 1e-12 {
            return Err(format!("d={d}: ball {vb}, cross {vc} (oracle {want_ball}, {want_cross})"));
        }
    }
    Ok("ball/orthonormal = 1 and O_d/standard = √d within 1e-12 for d=1..10".into())
}

fn c11_qv() -> Outcome {
    let tol = 1e-9;
    let mu = EmpiricalMeasure::uniform(axis_facets(2)).map_err(fail)?;
    let square = cube(2);
    let pts = sample_uniform(&square, 200, Seed(11)).map_err(fail)?;
    for k in 1..=2 {
        for v in &pts {
            if !qv_certify(&mu, k, v, tol).map_err(fail)? {
                return Err(format!("k={k}: body point {v:?} rejected"));
            }
        }
    }
    for i in 0..41 {
        for j in 0..41 {
            let s = |a: usize| -3.0 + 6.0 * a as f64 / 40.0;
            let v = [s(i), s(j)];
            if qv_certify(&mu, 2, &v, tol).map_err(fail)? && !qv_certify(&mu, 1, &v, tol).map_err(fail)? {
                return Err(format!("{v:?} in X2 but not X1"));
            }
        }
    }
    // q_v at k=1 on the basis (1, x, y): Σ w (1 − ⟨ℓ, v⟩) m(ℓ) m(ℓ)ᵀ
    let v = [3.0, 0.0];
    let mut g = SymMatrix::zeros(3);
    for l in axis_facets(2) {
        let m = [1.0, l[0], l[1]];
        let w = 0.25 * (1.0 - (l[0] * v[0] + l[1] * v[1]));
        for a in 0..3 {
            for b in a..3 {
                g.set(a, b, g.get(a, b) + w * m[a] * m[b]);
            }
        }
    }
    let min_eig = jacobi_eigenvalues(&g).into_iter().fold(f64::INFINITY, f64::min);
    let accepted = qv_certify(&mu, 1, &v, tol).map_err(fail)?;
    check(
        !accepted && min_eig < 0.0,
        format!("200 body samples pass for k=1,2; X2 ⊆ X1 on 41×41; v=(3,0) rejected (oracle min eigenvalue {min_eig:.3})"),
    )
}

fn c12_oracles() -> Outcome {
    let feastol = 1e-9;
    let mut disagree = 0;
    for p in 0..8u64 {
        let mut rng = Seed(12).stream(p);
        let n = rng.gen_range(3..=6);
        let pts: Vec<Vector> = (0..n).map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
        for i in 0..41 {
            for j in 0..41 {
                let x = [-1.0 + i as f64 / 20.0, -1.0 + j as f64 / 20.0];
                if member_vrep(&x, &pts, feastol).map_err(fail)? != in_some_triangle(&x, &pts, feastol) {
                    disagree += 1;
                }
            }
        }
    }
    if disagree > 0 {
        return Err(format!("member_vrep disagrees with the triangle oracle on {disagree} grid points"));
    }
    let tol = 1e-9;
    let mut bad = 0;
    for t in 0..1000u64 {
        let mut rng = Seed(120).stream(t);
        let d = rng.gen_range(1..=12);
        let mut m = SymMatrix::zeros(d);
        if t % 2 == 0 {
            for _ in 0..rng.gen_range(1..=d) {
                let v: Vector = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                m.add_outer(1.0, &v);
            }
        } else {
            for i in 0..d {
                for j in i..d {
                    m.set(i, j, rng.gen_range(-1.0..1.0));
                }
            }
            m.add_diag(rng.gen_range(0.0..3.0));
        }
        let scale = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).fold(0.0f64, |a, (i, j)| a.max(m.get(i, j).abs()));
        let oracle = jacobi_eigenvalues(&m).into_iter().fold(f64::INFINITY, f64::min) >= -tol * (1.0 + scale);
        if oracle != is_psd(&m, tol) {
            bad += 1;
        }
    }
    check(bad == 0, format!("member_vrep agrees on 8 polygons × 41×41; is_psd agrees with Jacobi on 1000 matrices ({bad} disagreements)"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 12] = [
        ("1 John/Löwner sandwich", c1_john_cube, 10),
        ("2 TSP ellipsoid bound", c2_tsp, 60),
        ("3 ε-net bounds", c3_eps_net, 30),
        ("4 BN gadget", c4_bn, 60),
        ("5 tensor-lift norm", c5_tensor, 60),
        ("6 cube power norm", c6_power, 5),
        ("7 CUT relaxation", c7_cut, 120),
        ("8 Grothendieck sandwich", c8_grothendieck, 120),
        ("9 soft approximation", c9_soft, 60),
        ("10 type-2 estimator", c10_type2, 5),
        ("11 q_v construction", c11_qv, 30),
        ("12 oracle equivalences", c12_oracles, 30),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let t = Instant::now();
        let out = run();
        let el = t.elapsed();
        let in_time = el < Duration::from_secs(limit);
        let (ok, msg) = match out {
            Ok(m) => (in_time, m),
            Err(m) => (false, m),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{name}] {msg} ({} ms, limit {limit} s)",
            if ok { "PASS" } else { "FAIL" },
            el.as_millis()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
