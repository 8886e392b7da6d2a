//! Experiment suites. Each suite validates its parameters, runs its
//! instances with seeds derived from `(seed, instance index)`, and emits one
//! report row per measured quantity.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use convex_approx::bodies::{
    ball, certify_sandwich_with, cross_polytope, make_cut, make_tsp, sample_uniform, Body,
    CertMode, Rep, SandwichCertificate, SandwichOptions,
};
use convex_approx::ellipsoid::{inscribed_via_polar, john_inner_symmetric};
use convex_approx::lp::{member_vrep, Polyhedron};
use convex_approx::numerics::{
    binomial, is_psd, psd_threshold, sample_unit_sphere, sym_eigen, unit, Matrix, Seed, SymMatrix, Vector,
};
use convex_approx::polyapprox::{ball_net_lower_bound, greedy_net, net_size_bound, type2_lower, Type2Mode};
use convex_approx::polynorm::{
    alpha_bound, exterior_angle, moment_norm, power_sum_norm, sandwich_ratios, tensor_lift, EmpiricalMeasure,
    PolynomialNorm,
};
use convex_approx::sdprelax::{
    acut_brute_member, cut_brute_member, cut_ratio, cut_relax_member, grothendieck_bound, q_member, q_samples,
    qv_certify, relaxation_boundary_samples,
};
use convex_approx::socone::{ball_bn, ball_bn_facet_count, planar_outer_radius, support_point};
use convex_approx::softapprox::{accept_test, approximant, build_soft, Verdict};
use rand::Rng;

use crate::report::{Report, Row};

pub const CERTIFIED: &str = "certified";
pub const SAMPLED_LOWER: &str = "sampled lower bound";
pub const SAMPLED_UPPER: &str = "sampled upper bound";

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub tol: f64,
    pub feastol: f64,
    /// Record wall-clock runtimes; off gives byte-identical reports.
    pub timing: bool,
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(name: &str) -> Self {
        ExperimentConfig {
            name: name.to_string(),
            params: BTreeMap::new(),
            seed: 1,
            tol: 1e-9,
            feastol: 1e-9,
            timing: true,
            output_path: None,
        }
    }
}

pub struct Suite {
    pub name: &'static str,
    pub summary: &'static str,
    /// Accepted parameters with their defaults.
    pub params: &'static [(&'static str, &'static str)],
    run: fn(&mut Ctx) -> Result<()>,
}

pub struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    suite: &'static Suite,
    rows: Vec<Row>,
}

fn parse_usize_list(key: &str, s: &str) -> Result<Vec<usize>> {
    let bad = || anyhow!("parameter `{key}`: expected N, A..B or a comma list, got \"{s}\"");
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

impl<'a> Ctx<'a> {
    fn raw(&self, key: &str) -> &str {
        self.cfg.params.get(key).map(String::as_str).unwrap_or_else(|| {
            self.suite
                .params
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .expect("suite reads an undeclared parameter")
        })
    }

    fn usizes(&self, key: &str, lo: usize, hi: usize) -> Result<Vec<usize>> {
        let v = parse_usize_list(key, self.raw(key))?;
        if v.is_empty() {
            bail!("parameter `{key}` is empty");
        }
        if let Some(x) = v.iter().find(|x| !(lo..=hi).contains(*x)) {
            bail!("parameter `{key}`: value {x} outside the supported range {lo}..={hi}");
        }
        Ok(v)
    }

    fn usize1(&self, key: &str, lo: usize, hi: usize) -> Result<usize> {
        let v = self.usizes(key, lo, hi)?;
        if v.len() != 1 {
            bail!("parameter `{key}` takes a single value");
        }
        Ok(v[0])
    }

    /// Values in the open interval `(lo, hi)`.
    fn f64s(&self, key: &str, lo: f64, hi: f64) -> Result<Vec<f64>> {
        let s = self.raw(key);
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| anyhow!("parameter `{key}`: expected numbers, got \"{s}\""))?;
        if let Some(x) = v.iter().find(|x| !(**x > lo && **x < hi)) {
            bail!("parameter `{key}`: value {x} outside ({lo}, {hi})");
        }
        Ok(v)
    }

    fn seed(&self, index: usize) -> Seed {
        Seed(self.cfg.seed).derive(index as u64)
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        instance: String,
        metric: &str,
        value: f64,
        bound: Option<f64>,
        pass: bool,
        seed: Seed,
        tol: f64,
        start: Instant,
    ) {
        let runtime_ms = if self.cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
        self.rows.push(Row {
            experiment: self.suite.name.to_string(),
            instance,
            metric: metric.to_string(),
            value: if value.is_finite() { value } else { f64::MAX },
            bound,
            pass: pass && value.is_finite(),
            seed: seed.0,
            tol,
            runtime_ms,
        });
    }
}

fn cert_label(c: &SandwichCertificate) -> String {
    if c.inner_mode == CertMode::Exact && c.outer_mode == CertMode::Exact {
        format!("{CERTIFIED} factor")
    } else {
        format!("{SAMPLED_LOWER} factor")
    }
}

fn axis_facets(d: usize) -> Vec<Vector> {
    (0..d)
        .flat_map(|i| [unit(d, i), unit(d, i).iter().map(|x| -x).collect()])
        .collect()
}

pub fn cube_vertices(d: usize) -> Vec<Vector> {
    (0..1usize << d)
        .map(|m| (0..d).map(|i| if m >> i & 1 == 1 { -1.0 } else { 1.0 }).collect())
        .collect()
}

fn ellipsoid_body(e: convex_approx::bodies::Ellipsoid) -> Body {
    let mut b = Body::ellipsoid(e);
    b.symmetric = true;
    b
}

fn john_cube(cx: &mut Ctx) -> Result<()> {
    let ds = cx.usizes("d", 1, 8)?;
    for (i, &d) in ds.iter().enumerate() {
        let t = Instant::now();
        let seed = cx.seed(i);
        let b = Body::new(Rep::VRep { points: cube_vertices(d) }, true)?;
        let e = john_inner_symmetric(&b, 1e-10)?;
        let mut opts = SandwichOptions::new(256, seed, cx.cfg.tol);
        opts.b_facets = Some(axis_facets(d));
        let c = certify_sandwich_with(&ellipsoid_body(e), &b, &opts)?;
        let want = (d as f64).sqrt();
        let ok = c.inner_valid && (c.alpha - want).abs() <= 1e-3;
        cx.push(format!("cube d={d}"), &cert_label(&c), c.alpha, Some(want), ok, seed, 1e-3, t);
    }
    Ok(())
}

fn tsp_ellipsoid(cx: &mut Ctx) -> Result<()> {
    let ns = cx.usizes("n", 4, 7)?;
    for (i, &n) in ns.iter().enumerate() {
        let t = Instant::now();
        let seed = cx.seed(i);
        let tsp = make_tsp(n)?;
        let normals: Vec<Vector> = tsp.facets()?.into_iter().map(|(a, _)| a).collect();
        let e = inscribed_via_polar(&normals, 1e-10)?;
        let mut opts = SandwichOptions::new(256, seed, cx.cfg.tol);
        opts.b_facets = Some(normals);
        let c = certify_sandwich_with(&Body::ellipsoid(e), &tsp.body, &opts)?;
        let bound = (n as f64 - 3.0) * (n as f64).sqrt() / 2.0 + 1e-3;
        cx.push(format!("TSP n={n}"), &cert_label(&c), c.alpha, Some(bound), c.inner_valid && c.alpha <= bound, seed, 1e-3, t);
    }
    Ok(())
}

fn eps_net(cx: &mut Ctx) -> Result<()> {
    let ds = cx.usizes("d", 1, 4)?;
    let epss = cx.f64s("eps", 0.0, 1.0)?;
    let cands = cx.usize1("candidates", 10, 1_000_000)?;
    let mut idx = 0;
    for &d in &ds {
        for &eps in &epss {
            let t = Instant::now();
            let seed = cx.seed(idx);
            idx += 1;
            let r = greedy_net(&ball(d, 1.0), eps, cands, cands, seed)?;
            let inst = format!("ball d={d} eps={eps}");
            let size = r.points.len() as f64;
            let cap = net_size_bound(d, eps);
            cx.push(inst.clone(), "cardinality", size, Some(cap), size <= cap, seed, 0.0, t);
            let target = 1.0 / (1.0 - eps) + 1e-3;
            let label = cert_label(&r.cert);
            cx.push(inst.clone(), &label, r.cert.alpha, Some(target), r.cert.inner_valid && r.cert.alpha <= target, seed, 1e-3, t);
            let lower = ball_net_lower_bound(d, r.cert.alpha);
            cx.push(inst, "cardinality vs exp(d/(2 alpha^2))", size, Some(lower), size >= lower, seed, 0.0, t);
        }
    }
    Ok(())
}

fn bn_decay(cx: &mut Ctx) -> Result<()> {
    let d = cx.usize1("d", 2, 2)?;
    let ms = cx.usizes("m", 2, 14)?;
    let tower_d = cx.usize1("tower_d", 2, 6)?;
    let tower_m = cx.usize1("tower_m", 2, 10)?;
    let samples = cx.usize1("samples", 1, 100_000)?;
    let mut prev: Option<f64> = None;
    for (i, &m) in ms.iter().enumerate() {
        let t = Instant::now();
        let seed = cx.seed(i);
        let body = ball_bn(d, m)?;
        let delta = planar_outer_radius(&body)? - 1.0;
        let inst = format!("disc d={d} m={m}");
        cx.push(inst.clone(), &format!("{CERTIFIED} outer error"), delta, prev.map(|p| p / 2.0), prev.is_none_or(|p| delta <= p / 2.0), seed, 0.0, t);
        if m == 6 {
            cx.push(inst, &format!("{CERTIFIED} outer error at m=6"), delta, Some(2e-3), delta <= 2e-3, seed, 0.0, t);
        }
        prev = Some(delta);
    }
    let t = Instant::now();
    let seed = cx.seed(ms.len());
    let inst = format!("ball d={tower_d} m={tower_m}");
    let facets = ball_bn_facet_count(tower_d, tower_m) as f64;
    let cap = (3 * tower_d * tower_m) as f64;
    cx.push(inst.clone(), "facet count", facets, Some(cap), facets <= cap, seed, 0.0, t);
    let body = ball_bn(tower_d, tower_m)?;
    let mut outside = 0usize;
    for u in sample_unit_sphere(tower_d, samples, seed) {
        if !body.contains(&u, cx.cfg.feastol)? {
            outside += 1;
        }
    }
    cx.push(inst, "boundary samples outside", outside as f64, Some(0.0), outside == 0, seed, cx.cfg.feastol, t);
    Ok(())
}

fn tensor(cx: &mut Ctx) -> Result<()> {
    let ds = cx.usizes("d", 1, 5)?;
    let ks = cx.usizes("k", 1, 4)?;
    let n = cx.usize1("samples", 1, 1_000_000)?;
    let mut idx = 0;
    for &d in &ds {
        for &k in &ks {
            let t = Instant::now();
            let seed = cx.seed(idx);
            idx += 1;
            // O_d has the cube vertices as polar vertices
            let s = tensor_lift(&cube_vertices(d), k, 1e-10)?;
            let b = cross_polytope(d);
            let (lo, hi) = sandwich_ratios(&s, &b, n, seed)?;
            let inst = format!("cross d={d} k={k}");
            let upper = alpha_bound(d, k) * 1.01;
            cx.push(inst.clone(), &format!("{SAMPLED_UPPER} ratio min"), lo, Some(1.0 - 1e-9), lo >= 1.0 - 1e-9, seed, 1e-9, t);
            cx.push(inst.clone(), &format!("{SAMPLED_LOWER} ratio max"), hi, Some(upper), hi <= upper, seed, 1e-2, t);
            cx.push(inst, &format!("{CERTIFIED} factor"), s.factor, Some(upper), s.factor <= upper, seed, 1e-2, t);
        }
    }
    // the interval: every k is exact
    for k in 1..=4 {
        let t = Instant::now();
        let seed = cx.seed(idx);
        idx += 1;
        let s = tensor_lift(&[vec![1.0], vec![-1.0]], k, 1e-12)?;
        let r = s.norm(&[0.7]) / 0.7;
        let err = (r - 1.0).abs().max((s.factor - 1.0).abs());
        cx.push(format!("interval k={k}"), &format!("{CERTIFIED} factor error"), err, Some(1e-9), err <= 1e-9, seed, 1e-9, t);
    }
    Ok(())
}

fn power_norm(cx: &mut Ctx) -> Result<()> {
    let d = cx.usize1("d", 1, 12)?;
    let k = cx.usize1("k", 1, 6)?;
    let n = cx.usize1("samples", 1, 1_000_000)?;
    let t = Instant::now();
    let seed = cx.seed(0);
    let p = power_sum_norm(d, k)?;
    let bound = (d as f64).powf(1.0 / (2.0 * k as f64));
    let mut rng = seed.stream(0);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..n {
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let r = p.norm(&x) / g;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let inst = format!("cube d={d} k={k}");
    cx.push(inst.clone(), &format!("{SAMPLED_UPPER} ratio min"), lo, Some(1.0), lo >= 1.0 - 1e-12, seed, 1e-12, t);
    cx.push(inst.clone(), &format!("{SAMPLED_LOWER} ratio max"), hi, Some(bound), hi <= bound + 1e-12, seed, 1e-12, t);
    let ones = p.norm(&vec![1.0; d]);
    cx.push(inst, &format!("{CERTIFIED} all-ones ratio"), ones, Some(bound), (ones - bound).abs() <= 1e-9, seed, 1e-9, t);
    Ok(())
}

fn sym(m: &Matrix) -> Result<SymMatrix> {
    Ok(SymMatrix::from_matrix_symmetrized(m)?)
}

fn cut_suite(cx: &mut Ctx) -> Result<()> {
    let ns = cx.usizes("n", 2, 6)?;
    let samples = cx.usize1("samples", 1, 10_000)?;
    let feastol = cx.cfg.feastol;
    for (i, &n) in ns.iter().enumerate() {
        let t = Instant::now();
        let seed = cx.seed(i);
        let inst = format!("CUT n={n}");
        let mut rejected = 0usize;
        for v in make_cut(n, false)? {
            if !cut_relax_member(&sym(&v)?, feastol)? {
                rejected += 1;
            }
        }
        cx.push(inst.clone(), "cut vertices outside relaxation", rejected as f64, Some(0.0), rejected == 0, seed, feastol, t);
        if n == 2 {
            let mut outside = 0usize;
            for r in relaxation_boundary_samples(2, samples, seed)? {
                if !cut_brute_member(&r, 2, feastol)? {
                    outside += 1;
                }
            }
            cx.push(inst.clone(), "relaxation samples outside CUT", outside as f64, Some(0.0), outside == 0, seed, feastol, t);
        }
        let r = cut_ratio(n, samples, seed, feastol)?;
        if n == 2 {
            cx.push(inst, &format!("{SAMPLED_LOWER} ratio"), r, Some(1.0), (r - 1.0).abs() <= 1e-6, seed, 1e-6, t);
        } else {
            cx.push(inst, &format!("{SAMPLED_LOWER} ratio"), r, Some(1.0), r.is_finite() && r >= 1.0, seed, 0.0, t);
        }
    }
    Ok(())
}

fn grothendieck(cx: &mut Ctx) -> Result<()> {
    let ns = cx.usizes("n", 2, 3)?;
    let samples = cx.usize1("samples", 1, 10_000)?;
    let feastol = cx.cfg.feastol;
    let shrink = 1.0 / grothendieck_bound();
    for (i, &n) in ns.iter().enumerate() {
        let t = Instant::now();
        let seed = cx.seed(i);
        let inst = format!("n={n}");
        let mut missed = 0usize;
        for v in make_cut(n, true)? {
            if !q_member(&v, 1e-7, 20_000)?.is_feasible() {
                missed += 1;
            }
        }
        cx.push(inst.clone(), "ACUT vertices not in Q", missed as f64, Some(0.0), missed == 0, seed, 1e-7, t);
        let mut outside = 0usize;
        for q in q_samples(n, samples, seed) {
            let mut s = q.clone();
            for a in 0..n {
                for b in 0..n {
                    s[(a, b)] *= shrink;
                }
            }
            if !acut_brute_member(&s, feastol)? {
                outside += 1;
            }
        }
        cx.push(inst, "shrunk Q samples outside ACUT", outside as f64, Some(0.0), outside == 0, seed, feastol, t);
    }
    Ok(())
}

fn soft(cx: &mut Ctx) -> Result<()> {
    let d = cx.usize1("d", 1, 4)?;
    let k = cx.usize1("k", 1, 6)?;
    let epss = cx.f64s("eps", 0.0, 1.0)?;
    let trials = cx.usize1("trials", 1, 10_000)?;
    let samples = cx.usize1("samples", 1, 100_000)?;
    let mu = cx.usize1("mu", 10, 10_000)?;
    let t0 = Instant::now();
    let seed = cx.seed(0);
    let sp = build_soft(&Polyhedron::cube(d), &Matrix::identity(d), k)?;
    let b = convex_approx::bodies::cube(d);
    let inst = format!("cube d={d} k={k}");
    let count = (sp.generators.len() + 1) as f64;
    let want = binomial((2 * d + k) as u64, k as u64);
    cx.push(inst.clone(), "generator count incl. origin", count, Some(want), count == want, seed, 0.0, t0);
    let mut worst = f64::MIN;
    for (i, x) in sample_uniform(&b, samples, seed)?.iter().enumerate() {
        worst = worst.max(sp.eval_generators(x, i as u64)?.into_iter().fold(f64::MIN, f64::max));
    }
    cx.push(inst.clone(), &format!("{SAMPLED_LOWER} max generator value"), worst, Some(1.0 + 1e-9), worst <= 1.0 + 1e-9, seed, 1e-9, t0);
    for (e, &eps) in epss.iter().enumerate() {
        let t = Instant::now();
        let seed = cx.seed(1 + e);
        let mut rng = seed.stream(0);
        let (mut worst_err, mut rejects) = (0.0f64, 0usize);
        for trial in 0..trials {
            // ε·B° is ε times the cross polytope; take a random point of it
            let g: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let l1: f64 = g.iter().map(|x| x.abs()).sum();
            let r: f64 = rng.gen_range(0.0..1.0);
            let ell: Vec<f64> = g.iter().map(|x| eps * r * x / l1).collect();
            let a = approximant(&sp, &ell, &b, mu, seed.derive(trial as u64))?;
            worst_err = worst_err.max(a.max_error);
            let dec = accept_test(&sp, &ell, eps, &b, mu, seed.derive(trial as u64))?;
            if dec.verdict != Verdict::Accept {
                rejects += 1;
            }
        }
        let inst = format!("cube d={d} k={k} eps={eps}");
        cx.push(inst.clone(), &format!("{SAMPLED_LOWER} sup error"), worst_err, Some(eps * eps), worst_err <= eps * eps + 1e-12, seed, 1e-12, t);
        cx.push(inst, "rejected functionals", rejects as f64, Some(0.0), rejects == 0, seed, 0.0, t);
    }
    Ok(())
}

fn type2(cx: &mut Ctx) -> Result<()> {
    let ds = cx.usizes("d", 1, 12)?;
    for (i, &d) in ds.iter().enumerate() {
        let t = Instant::now();
        let seed = cx.seed(i);
        let basis: Vec<Vector> = (0..d).map(|j| unit(d, j)).collect();
        let v = type2_lower(&ball(d, 1.0), &basis, Type2Mode::Exact)?;
        cx.push(format!("ball d={d}"), &format!("{CERTIFIED} value"), v, Some(1.0), (v - 1.0).abs() <= 1e-12, seed, 1e-12, t);
        let v = type2_lower(&cross_polytope(d), &basis, Type2Mode::Exact)?;
        let want = (d as f64).sqrt();
        cx.push(format!("cross d={d}"), &format!("{CERTIFIED} value"), v, Some(want), (v - want).abs() <= 1e-12, seed, 1e-12, t);
    }
    Ok(())
}

fn qv(cx: &mut Ctx) -> Result<()> {
    let samples = cx.usize1("samples", 1, 100_000)?;
    let grid = cx.usize1("grid", 2, 401)?;
    let tol = cx.cfg.tol;
    let mu = EmpiricalMeasure::uniform(axis_facets(2))?;
    let square = convex_approx::bodies::cube(2);
    let seed = cx.seed(0);
    let pts = sample_uniform(&square, samples, seed)?;
    for k in 1..=2 {
        let t = Instant::now();
        let mut failed = 0usize;
        for v in &pts {
            if !qv_certify(&mu, k, v, tol)? {
                failed += 1;
            }
        }
        cx.push(format!("square k={k}"), "body samples rejected", failed as f64, Some(0.0), failed == 0, seed, tol, t);
    }
    let t = Instant::now();
    let mut violations = 0usize;
    for i in 0..grid {
        for j in 0..grid {
            let s = |a: usize| -3.0 + 6.0 * a as f64 / (grid - 1) as f64;
            let v = [s(i), s(j)];
            if qv_certify(&mu, 2, &v, tol)? && !qv_certify(&mu, 1, &v, tol)? {
                violations += 1;
            }
        }
    }
    cx.push(format!("square grid {grid}x{grid}"), "points in X2 but not X1", violations as f64, Some(0.0), violations == 0, seed, tol, t);
    let t = Instant::now();
    let accepted = qv_certify(&mu, 1, &[3.0, 0.0], tol)?;
    cx.push("square v=(3,0) k=1".into(), "accepted", accepted as u8 as f64, Some(0.0), !accepted, seed, tol, t);
    Ok(())
}

/// Membership in the hull of planar points by testing every triangle.
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
                let l1 = ((x[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (x[1] - p[1])) / det;
                let l2 = ((q[0] - p[0]) * (x[1] - p[1]) - (x[0] - p[0]) * (q[1] - p[1])) / det;
                if l1 >= -tol && l2 >= -tol && l1 + l2 <= 1.0 + tol {
                    return true;
                }
            }
        }
    }
    false
}

fn oracles(cx: &mut Ctx) -> Result<()> {
    let polys = cx.usize1("polygons", 1, 100)?;
    let matrices = cx.usize1("matrices", 1, 100_000)?;
    let grid = cx.usize1("grid", 2, 201)?;
    let feastol = cx.cfg.feastol;
    let t = Instant::now();
    let seed = cx.seed(0);
    let mut disagree = 0usize;
    for p in 0..polys {
        let mut rng = seed.stream(p as u64);
        let n = rng.gen_range(3..=6);
        let pts: Vec<Vector> = (0..n).map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
        for i in 0..grid {
            for j in 0..grid {
                let s = |a: usize| -1.0 + 2.0 * a as f64 / (grid - 1) as f64;
                let x = [s(i), s(j)];
                if member_vrep(&x, &pts, feastol)? != in_some_triangle(&x, &pts, feastol) {
                    disagree += 1;
                }
            }
        }
    }
    cx.push(format!("{polys} polygons grid {grid}x{grid}"), "member_vrep disagreements", disagree as f64, Some(0.0), disagree == 0, seed, feastol, t);
    let t = Instant::now();
    let seed = cx.seed(1);
    let mut disagree = 0usize;
    for k in 0..matrices {
        let mut rng = seed.stream(k as u64);
        let d = rng.gen_range(1..=12);
        let mut m = SymMatrix::zeros(d);
        if k % 2 == 0 {
            for _ in 0..rng.gen_range(1..=d) {
                let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
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
        let oracle = sym_eigen(&m, 1e-12)?.min() >= -psd_threshold(&m, cx.cfg.tol);
        if oracle != is_psd(&m, cx.cfg.tol) {
            disagree += 1;
        }
    }
    cx.push(format!("{matrices} matrices"), "is_psd disagreements", disagree as f64, Some(0.0), disagree == 0, seed, cx.cfg.tol, t);
    Ok(())
}

fn moment_measure(cx: &mut Ctx) -> Result<()> {
    let ks = cx.usizes("k", 1, 4)?;
    let samples = cx.usize1("samples", 100, 1_000_000)?;
    let dirs = cx.usize1("dirs", 1, 100_000)?;
    let s3 = 3f64.sqrt() / 2.0;
    let hexagon: Vec<Vector> = (0..6)
        .map(|i| {
            let a = std::f64::consts::PI * i as f64 / 3.0;
            vec![a.cos(), a.sin()]
        })
        .collect();
    // bodies given by the vertices of their polars
    let cases: Vec<(&str, Vec<Vector>)> = vec![
        ("square", axis_facets(2)),
        ("hexagon", hexagon),
        ("triangle", vec![vec![1.0, 0.0], vec![-0.5, s3], vec![-0.5, -s3]]),
        ("cross d=3", cube_vertices(3)),
    ];
    let mut idx = 0;
    for (name, polar_vertices) in &cases {
        let d = polar_vertices[0].len();
        let ineq = polar_vertices.iter().map(|a| (a.clone(), 1.0)).collect();
        let b = Body::new(Rep::HRep { polyhedron: Polyhedron::new(d, ineq, vec![])? }, false)?;
        let polar = Body::new(Rep::VRep { points: polar_vertices.clone() }, false)?;
        for &k in &ks {
            let t = Instant::now();
            let seed = cx.seed(idx);
            idx += 1;
            let mu = exterior_angle(&polar, samples, seed)?;
            let p = moment_norm(&mu, k)?;
            let (lo, hi) = sandwich_ratios(&p, &b, dirs, seed.derive(1))?;
            let inst = format!("{name} k={k}");
            cx.push(inst.clone(), &format!("{SAMPLED_UPPER} ratio min"), lo, None, true, seed, 0.0, t);
            cx.push(inst.clone(), &format!("{SAMPLED_LOWER} ratio max"), hi, None, true, seed, 0.0, t);
            cx.push(inst, &format!("{SAMPLED_LOWER} factor hi/lo"), hi / lo, None, true, seed, 0.0, t);
        }
    }
    Ok(())
}

fn bn_support(cx: &mut Ctx) -> Result<()> {
    let ds = cx.usizes("d", 2, 5)?;
    let ms = cx.usizes("m", 2, 12)?;
    let dirs = cx.usize1("dirs", 1, 10_000)?;
    let mut idx = 0;
    for &d in &ds {
        for &m in &ms {
            let t = Instant::now();
            let seed = cx.seed(idx);
            idx += 1;
            let b = ball_bn(d, m)?;
            let mut worst = 0.0f64;
            for u in sample_unit_sphere(d, dirs, seed) {
                worst = worst.max(support_point(&b, &u)?.0);
            }
            let bound = 1.0 / (std::f64::consts::PI / f64::powi(2.0, m as i32)).cos().powi(ceil_log2(d) as i32);
            cx.push(format!("ball d={d} m={m}"), &format!("{SAMPLED_LOWER} outer factor"), worst, Some(bound), worst <= bound + 1e-9, seed, 1e-9, t);
        }
    }
    Ok(())
}

fn ceil_log2(d: usize) -> u32 {
    usize::BITS - (d - 1).leading_zeros()
}

static SUITES: &[Suite] = &[
    Suite { name: "john-cube", summary: "inscribed ellipsoid of the cube: certified factor √d", params: &[("d", "2..6")], run: john_cube },
    Suite { name: "tsp-ellipsoid", summary: "inscribed ellipsoid of TSP_n: factor ≤ (n−3)√n/2", params: &[("n", "5,6")], run: tsp_ellipsoid },
    Suite { name: "eps-net", summary: "greedy ε-nets of the ball: size and factor bounds", params: &[("d", "2,3"), ("eps", "0.5,0.25"), ("candidates", "4000")], run: eps_net },
    Suite { name: "bn-decay", summary: "second-order cone gadget: outer error decay, tower size and containment", params: &[("d", "2"), ("m", "4..10"), ("tower_d", "4"), ("tower_m", "6"), ("samples", "1000")], run: bn_decay },
    Suite { name: "tensor-lift", summary: "tensor-lift norm of the cross-polytope and the interval", params: &[("d", "3"), ("k", "2"), ("samples", "10000")], run: tensor },
    Suite { name: "power-norm", summary: "power-sum norm against the cube", params: &[("d", "4"), ("k", "2"), ("samples", "10000")], run: power_norm },
    Suite { name: "cut-ratio", summary: "PSD relaxation of CUT_n: vertex membership and sampled ratio", params: &[("n", "2..5"), ("samples", "40")], run: cut_suite },
    Suite { name: "grothendieck", summary: "ACUT_n ⊂ Q_n ⊂ 1.7822·ACUT_n at desk scale", params: &[("n", "2,3"), ("samples", "60")], run: grothendieck },
    Suite { name: "soft-approx", summary: "soft approximation of the cube: generators, quadratic error, acceptance", params: &[("d", "3"), ("k", "4"), ("eps", "0.5,0.25,0.1"), ("trials", "100"), ("samples", "1000"), ("mu", "200")], run: soft },
    Suite { name: "type2", summary: "exact type-2 estimator on balls and cross-polytopes", params: &[("d", "1..10")], run: type2 },
    Suite { name: "qv", summary: "q_v forms of the square: membership, nesting and rejection", params: &[("samples", "200"), ("grid", "41")], run: qv },
    Suite { name: "oracles", summary: "LP hull membership and PSD test against brute-force oracles", params: &[("polygons", "8"), ("grid", "41"), ("matrices", "1000")], run: oracles },
    Suite { name: "moment-measure", summary: "measurement: moment norms of exterior-angle measures (no asserted bound)", params: &[("k", "1,2,3"), ("samples", "20000"), ("dirs", "2000")], run: moment_measure },
    Suite { name: "bn-support", summary: "measurement: sampled outer factor of the ball tower vs (1/cos(π/2^m))^⌈log₂ d⌉", params: &[("d", "2,3,4"), ("m", "4..8"), ("dirs", "200")], run: bn_support },
];

pub fn suites() -> &'static [Suite] {
    SUITES
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    let suite = SUITES.iter().find(|s| s.name == cfg.name).ok_or_else(|| {
        anyhow!("unknown experiment \"{}\"; available: {}", cfg.name, suite_names().join(", "))
    })?;
    for key in cfg.params.keys() {
        if !suite.params.iter().any(|(k, _)| k == key) {
            let known: Vec<&str> = suite.params.iter().map(|(k, _)| *k).collect();
            bail!("experiment {}: unknown parameter `{key}` (accepted: {})", suite.name, known.join(", "));
        }
    }
    if !(cfg.tol > 0.0 && cfg.tol < 1.0) {
        bail!("--tol must lie in (0, 1), got {}", cfg.tol);
    }
    if !(cfg.feastol > 0.0 && cfg.feastol < 1.0) {
        bail!("--feastol must lie in (0, 1), got {}", cfg.feastol);
    }
    let mut cx = Ctx { cfg, suite, rows: Vec::new() };
    (suite.run)(&mut cx).with_context(|| format!("experiment {}", suite.name))?;
    Ok(Report { rows: cx.rows })
}
