//! Soft approximation of a convex body in function space: products
//! `g_I = 1 − Π_{i∈I}(1 − gᵢ)` of facet functionals of a polytope `P`, the
//! truncated-exponential approximant `F = 1 − (1 − f/k)^k` of a linear
//! functional, and an L² accept/reject test over the hull of the `h_I`.

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bodies::{sample_uniform, Body, Rep};
use crate::error::{check_dim, Error, Result};
use crate::lp::{lp_solve, LinearProgram, LpStatus, Polyhedron};
use crate::numerics::{binomial, dot, norm2, unit_vector, Matrix, Seed, Vector};
use crate::socone::ball_bn;

/// Constant of the quadratic error bound `|ℓ − h| ≤ γ ℓ²`.
pub const GAMMA: f64 = 1.0;
const MAX_GENERATORS: f64 = 1e5;
const MAX_TABLE: usize = 50_000_000;

/// Smallest integer `k > 2√d`.
pub fn default_k(d: usize) -> usize {
    (2.0 * (d as f64).sqrt()).floor() as usize + 1
}

/// How `h_I(x)` is read off the fiber `P ∩ T⁻¹(x)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum SoftMode {
    /// `T` invertible: the fiber is the single point `T⁻¹x`.
    Desk { inverse: Matrix },
    /// Fiber average by hit-and-run; approximate.
    Fiber { samples: usize, seed: Seed },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SoftPolytope {
    pub base: Polyhedron,
    pub map: Matrix,
    pub k: usize,
    /// Non-empty multisets of facet indices (sorted), `|I| ≤ k`. The empty
    /// multiset is the zero function and is represented by the origin.
    pub generators: Vec<Vec<usize>>,
    pub mode: SoftMode,
    /// `aᵢ / bᵢ`, so that `gᵢ(w) = ⟨nᵢ, w⟩`.
    normals: Vec<Vector>,
}

fn facet_normals(p: &Polyhedron) -> Result<Vec<Vector>> {
    if !p.eq.is_empty() {
        return Err(Error::InvalidInput("soft base polytope must be full-dimensional (no equalities)".into()));
    }
    p.ineq
        .iter()
        .map(|(a, b)| {
            if *b <= 0.0 {
                Err(Error::OriginNotInterior)
            } else {
                Ok(a.iter().map(|x| x / b).collect())
            }
        })
        .collect()
}

fn multisets(n: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    if binomial((n + k) as u64, k as u64) > MAX_GENERATORS {
        return Err(Error::InvalidInput(format!(
            "C({}, {k}) generators exceed {MAX_GENERATORS}",
            n + k
        )));
    }
    Ok((1..=k)
        .flat_map(|s| (0..n).combinations_with_replacement(s))
        .collect())
}

fn check_bounded(p: &Polyhedron) -> Result<()> {
    for i in 0..p.dim {
        for sgn in [1.0, -1.0] {
            let mut c = vec![0.0; p.dim];
            c[i] = sgn;
            let r = lp_solve(&p.program(c), 1e-10)?;
            if r.status != LpStatus::Optimal {
                return Err(Error::Unbounded);
            }
        }
    }
    Ok(())
}

impl SoftPolytope {
    fn assemble(base: Polyhedron, map: Matrix, k: usize, mode: SoftMode) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("soft polytope needs k ≥ 1".into()));
        }
        check_dim("soft map columns", base.dim, map.cols())?;
        let normals = facet_normals(&base)?;
        check_bounded(&base)?;
        let generators = multisets(normals.len(), k)?;
        let sp = SoftPolytope {
            base,
            map,
            k,
            generators,
            mode,
            normals,
        };
        // products of factors in [0, ∞) keep every g_I ≤ 1 on P
        let pb = Body::hrep(sp.base.clone())?;
        for w in sample_uniform(&pb, 1000, Seed(0x50f7))? {
            let g = sp.g_values(&w);
            if sp.generators.iter().any(|i| g_product(&g, i) > 1.0 + 1e-9) {
                return Err(Error::CertificationFailed("a generator exceeds 1 on P".into()));
            }
        }
        Ok(sp)
    }

    pub fn facet_count(&self) -> usize {
        self.normals.len()
    }

    /// `gᵢ(w)` for every facet.
    pub fn g_values(&self, w: &[f64]) -> Vector {
        self.normals.iter().map(|a| dot(a, w)).collect()
    }

    /// Points of the fiber over `x` used to evaluate `h`; `index` selects an
    /// independent random stream in fiber mode.
    pub fn fiber(&self, x: &[f64], index: u64) -> Result<Vec<Vector>> {
        check_dim("soft query", self.map.rows(), x.len())?;
        match &self.mode {
            SoftMode::Desk { inverse } => Ok(vec![inverse.mul_vec(x)]),
            SoftMode::Fiber { samples, seed } => {
                hit_and_run(&self.normals, &self.map, x, *samples, seed.derive(index))
            }
        }
    }

    /// `h_I(x)` for every generator, in the order of `generators`.
    pub fn eval_generators(&self, x: &[f64], index: u64) -> Result<Vector> {
        let fiber = self.fiber(x, index)?;
        let mut out = vec![0.0; self.generators.len()];
        for w in &fiber {
            let g = self.g_values(w);
            for (o, i) in out.iter_mut().zip(&self.generators) {
                *o += g_product(&g, i);
            }
        }
        let m = fiber.len() as f64;
        Ok(out.into_iter().map(|v| v / m).collect())
    }
}

/// `1 − Π_{i∈I}(1 − gᵢ)`.
pub fn g_product(g: &[f64], multiset: &[usize]) -> f64 {
    1.0 - multiset.iter().map(|&i| 1.0 - g[i]).product::<f64>()
}

/// Soft polytope with an invertible `T`.
pub fn build_soft(p: &Polyhedron, t: &Matrix, k: usize) -> Result<SoftPolytope> {
    if t.rows() != t.cols() {
        return Err(Error::InvalidInput("desk-scale mode needs a square map".into()));
    }
    let inverse = t.inverse().map_err(|_| Error::SingularMap)?;
    SoftPolytope::assemble(p.clone(), t.clone(), k, SoftMode::Desk { inverse })
}

/// Soft polytope with a general linear `T`; `h_I(x)` averages `g_I` over
/// `samples` hit-and-run points of the fiber.
pub fn build_soft_fiber(p: &Polyhedron, t: &Matrix, k: usize, samples: usize, seed: Seed) -> Result<SoftPolytope> {
    if samples == 0 {
        return Err(Error::InvalidInput("fiber mode needs samples".into()));
    }
    SoftPolytope::assemble(p.clone(), t.clone(), k, SoftMode::Fiber { samples, seed })
}

/// The lifted polyhedron of `ball_bn(d, m)` reparametrized as a
/// full-dimensional polytope with the origin inside, together with the map
/// to `R^d`.
pub fn bn_soft_base(d: usize, m: usize) -> Result<(Polyhedron, Matrix)> {
    let body = ball_bn(d, m)?;
    let Rep::Projected { polytope, map, .. } = &body.rep else {
        unreachable!("ball_bn returns a projection")
    };
    let n = polytope.dim;
    // interior point of the fiber over 0: maximize a common slack s ≤ 1
    let mut lp = LinearProgram::new({
        let mut c = vec![0.0; n + 1];
        c[n] = 1.0;
        c
    });
    for (a, b) in &polytope.ineq {
        let mut r = a.clone();
        r.push(norm2(a));
        lp = lp.le(r, *b);
    }
    for (a, b) in &polytope.eq {
        let mut r = a.clone();
        r.push(0.0);
        lp = lp.eq(r, *b);
    }
    for i in 0..map.rows() {
        let mut r = map.row(i).to_vec();
        r.push(0.0);
        lp = lp.eq(r, 0.0);
    }
    let mut cap = vec![0.0; n + 1];
    cap[n] = 1.0;
    lp = lp.le(cap, 1.0);
    let sol = lp_solve(&lp, 1e-10)?;
    if sol.status != LpStatus::Optimal || sol.value <= 1e-9 {
        return Err(Error::OriginNotInterior);
    }
    let w0 = &sol.point[..n];
    let eqm = Matrix::from_rows(&polytope.eq.iter().map(|(a, _)| a.clone()).collect::<Vec<_>>())?;
    let basis = eqm.null_space(1e-10);
    let nb = Matrix::from_cols(&basis)?;
    let ineq = polytope
        .ineq
        .iter()
        .map(|(a, b)| (nb.tmul_vec(a), b - dot(a, w0)))
        .collect();
    let t = map.matmul(&nb);
    Ok((Polyhedron::new(basis.len(), ineq, vec![])?, t))
}

/// Hit-and-run in `{w : ⟨nᵢ, w⟩ ≤ 1, Tw = x}` from its Chebyshev-style center.
fn hit_and_run(normals: &[Vector], t: &Matrix, x: &[f64], samples: usize, seed: Seed) -> Result<Vec<Vector>> {
    let n = t.cols();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut lp = LinearProgram::new(c);
    for a in normals {
        let mut r = a.clone();
        r.push(norm2(a));
        lp = lp.le(r, 1.0);
    }
    for i in 0..t.rows() {
        let mut r = t.row(i).to_vec();
        r.push(0.0);
        lp = lp.eq(r, x[i]);
    }
    let mut cap = vec![0.0; n + 1];
    cap[n] = 1.0;
    lp = lp.le(cap, 1.0);
    let sol = lp_solve(&lp, 1e-10)?;
    if sol.status != LpStatus::Optimal || sol.value < 0.0 {
        return Err(Error::Infeasible);
    }
    let mut w = sol.point[..n].to_vec();
    let dirs = t.null_space(1e-10);
    if dirs.is_empty() || sol.value <= 1e-12 {
        return Ok(vec![w; samples]);
    }
    let mut rng = seed.stream(0);
    let burn = 20 * dirs.len();
    let mut out = Vec::with_capacity(samples);
    for step in 0..burn + samples {
        let coef = unit_vector(&mut rng, dirs.len());
        let mut u = vec![0.0; n];
        for (cj, dj) in coef.iter().zip(&dirs) {
            for (ui, di) in u.iter_mut().zip(dj) {
                *ui += cj * di;
            }
        }
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for a in normals {
            let au = dot(a, &u);
            let slack = 1.0 - dot(a, &w);
            if au > 1e-14 {
                hi = hi.min(slack / au);
            } else if au < -1e-14 {
                lo = lo.max(slack / au);
            }
        }
        if lo.is_finite() && hi.is_finite() && hi > lo {
            let s = rng.gen_range(lo..=hi);
            for (wi, ui) in w.iter_mut().zip(&u) {
                *wi += s * ui;
            }
        }
        if step >= burn {
            out.push(w.clone());
        }
    }
    Ok(out)
}

/// `F` as a mixture of generators, with the leftover weight on the origin.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Approximant {
    /// Functional `ℓ` on `R^d`.
    pub ell: Vector,
    /// `f/k = Σ λᵢ gᵢ`, `λ ≥ 0`, `Σλ ≤ 1`.
    pub lambda: Vector,
    /// Weights over `generators`; the rest of the mass sits on `0`.
    pub weights: Vector,
    /// `sup |ℓ(x) − h(x)| / ℓ(x)²` over the sample.
    pub error_ratio: f64,
    /// `sup |ℓ(x) − h(x)|` over the sample.
    pub max_error: f64,
}

impl Approximant {
    /// `F(t) = 1 − (1 − t/k)^k` at `t = ℓ(x)`.
    pub fn eval(&self, k: usize, x: &[f64]) -> f64 {
        1.0 - (1.0 - dot(&self.ell, x) / k as f64).powi(k as i32)
    }
}

/// Writes `f/k` (with `f = ℓ∘T`) in `conv(0, gᵢ)` by LP, expands
/// `F = 1 − (1 − f/k)^k` over generators, and measures the error on
/// `n_samples` uniform points of `b`.
pub fn approximant(sp: &SoftPolytope, ell: &[f64], b: &Body, n_samples: usize, seed: Seed) -> Result<Approximant> {
    check_dim("functional", sp.map.rows(), ell.len())?;
    let k = sp.k;
    let f = sp.map.tmul_vec(ell);
    // f ≤ k on P
    let top = lp_solve(&sp.base.program(f.clone()), 1e-10)?;
    if top.status != LpStatus::Optimal || top.value > k as f64 * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::InvalidInput(format!(
            "ℓ∘T reaches {} > k = {k} on P; ℓ is not in the polar",
            top.value
        )));
    }
    let nf = sp.normals.len();
    let mut lp = LinearProgram::new(vec![0.0; nf]);
    lp.nonnegative = (0..nf).collect();
    for j in 0..sp.base.dim {
        lp = lp.eq(sp.normals.iter().map(|a| a[j]).collect(), f[j] / k as f64);
    }
    lp = lp.le(vec![1.0; nf], 1.0);
    let sol = lp_solve(&lp, 1e-10)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::InvalidInput("f/k is not in conv(0, gᵢ)".into()));
    }
    let lambda: Vector = sol.point.iter().map(|v| v.max(0.0)).collect();
    let lam0 = (1.0 - lambda.iter().sum::<f64>()).max(0.0);
    let fact = |m: usize| (1..=m).map(|x| x as f64).product::<f64>();
    let weights: Vector = sp
        .generators
        .iter()
        .map(|i| {
            let s = i.len();
            let mut c = fact(k) / fact(k - s) * lam0.powi((k - s) as i32);
            for (j, m) in i.iter().counts() {
                c *= lambda[*j].powi(m as i32) / fact(m);
            }
            c
        })
        .collect();
    let mut apx = Approximant {
        ell: ell.to_vec(),
        lambda,
        weights,
        error_ratio: 0.0,
        max_error: 0.0,
    };
    for (i, x) in sample_uniform(b, n_samples, seed)?.iter().enumerate() {
        let t = dot(ell, x);
        let hs = sp.eval_generators(x, i as u64)?;
        let h = dot(&apx.weights, &hs);
        let err = (t - h).abs();
        apx.max_error = apx.max_error.max(err);
        if t.abs() > 1e-12 {
            apx.error_ratio = apx.error_ratio.max(err / (t * t));
        }
    }
    if apx.error_ratio > GAMMA + 1e-9 {
        return Err(Error::CertificationFailed(format!(
            "approximation error ratio {} exceeds γ = {GAMMA}",
            apx.error_ratio
        )));
    }
    Ok(apx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AcceptDecision {
    pub verdict: Verdict,
    /// `‖ℓ − h‖₂` under the empirical measure.
    pub distance: f64,
    pub threshold: f64,
    /// Convex weights over generators (sum ≤ 1, the rest on the origin).
    pub witness: Vector,
    pub iterations: usize,
    /// Residual norm after each Frank–Wolfe step.
    pub history: Vec<f64>,
}

/// Frank–Wolfe over `conv(0, h_I)` for the closest point to `ℓ` in
/// `L²(μ)`, `μ` uniform on `mu_samples` points of `b`. The iteration starts
/// at the approximant when `ℓ` is in `k·B°`, which makes the test complete.
/// It stops as soon as the residual is within the threshold or the duality
/// gap bounds the optimum above it.
pub fn accept_test(
    sp: &SoftPolytope,
    ell: &[f64],
    eps: f64,
    b: &Body,
    mu_samples: usize,
    seed: Seed,
) -> Result<AcceptDecision> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput("accept_test needs 0 < eps < 1".into()));
    }
    check_dim("functional", sp.map.rows(), ell.len())?;
    if mu_samples == 0 || mu_samples.saturating_mul(sp.generators.len()) > MAX_TABLE {
        return Err(Error::InvalidInput("sample count × generators out of range".into()));
    }
    let pts = sample_uniform(b, mu_samples, seed)?;
    let m = pts.len() as f64;
    let target: Vector = pts.iter().map(|x| dot(ell, x)).collect();
    let cols: Vec<Vector> = pts
        .iter()
        .enumerate()
        .map(|(i, x)| sp.eval_generators(x, i as u64))
        .collect::<Result<_>>()?;
    // column-major table: h[g][sample]
    let ng = sp.generators.len();
    let h: Vec<Vector> = (0..ng).map(|g| cols.iter().map(|c| c[g]).collect()).collect();
    let l2 = |v: &[f64]| (v.iter().map(|x| x * x).sum::<f64>() / m).sqrt();
    let threshold = GAMMA * eps * l2(&target);

    let mut mu = vec![0.0; ng];
    if ell.iter().any(|&v| v != 0.0) {
        if let Ok(a) = approximant(sp, ell, b, 0, seed) {
            mu = a.weights;
        }
    }
    let mut fit = vec![0.0; pts.len()];
    for (g, &wg) in mu.iter().enumerate() {
        if wg != 0.0 {
            for (f, hv) in fit.iter_mut().zip(&h[g]) {
                *f += wg * hv;
            }
        }
    }
    let mut history = Vec::new();
    let mut iterations = 0;
    loop {
        let resid: Vector = target.iter().zip(&fit).map(|(t, f)| t - f).collect();
        let rn2: f64 = resid.iter().map(|x| x * x).sum();
        history.push((rn2 / m).sqrt());
        if iterations >= 20_000 || rn2 / m <= threshold * threshold {
            break;
        }
        // vertex maximizing ⟨resid, h⟩, or the origin
        let (best, score) = (0..ng)
            .map(|g| (Some(g), dot(&resid, &h[g])))
            .fold((None, 0.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        let s_fit: Vector = match best {
            Some(g) => h[g].clone(),
            None => vec![0.0; pts.len()],
        };
        let dir: Vector = s_fit.iter().zip(&fit).map(|(s, f)| s - f).collect();
        let gap = dot(&resid, &dir);
        // convexity: the optimum is at least rn2 − 2·gap
        if gap <= 1e-6 * rn2 || gap <= 0.0 || (rn2 - 2.0 * gap) / m > threshold * threshold {
            let _ = score;
            break;
        }
        let step = (gap / dot(&dir, &dir)).clamp(0.0, 1.0);
        for w in mu.iter_mut() {
            *w *= 1.0 - step;
        }
        if let Some(g) = best {
            mu[g] += step;
        }
        for (f, d) in fit.iter_mut().zip(&dir) {
            *f += step * d;
        }
        iterations += 1;
    }
    let distance = *history.last().unwrap_or(&0.0);
    Ok(AcceptDecision {
        verdict: if distance <= threshold { Verdict::Accept } else { Verdict::Reject },
        distance,
        threshold,
        witness: mu,
        iterations,
        history,
    })
}
