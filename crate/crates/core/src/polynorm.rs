//! Homogeneous polynomial surrogates `p` of degree `2k` for a norm, with
//! `p^{1/2k}` sandwiching the gauge of a symmetric body.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bodies::{Body, Rep};
use crate::ellipsoid::loewner_mvee_symmetric;
use crate::error::{check_dim, Error, Result};
use crate::numerics::{binomial, dot, is_psd, sample_unit_sphere, Matrix, Seed, SymMatrix, Vector};

const MAX_SYM_DIM: usize = 500;

/// A degree-`2k` form used as a norm surrogate.
pub trait PolynomialNorm {
    fn half_degree(&self) -> usize;
    fn eval(&self, v: &[f64]) -> f64;
    /// `p(v)^{1/2k}`.
    fn norm(&self, v: &[f64]) -> f64 {
        self.eval(v).max(0.0).powf(1.0 / (2 * self.half_degree()) as f64)
    }
}

/// `C(d+k−1, k)^{1/2k}`.
pub fn alpha_bound(d: usize, k: usize) -> f64 {
    binomial((d + k - 1) as u64, k as u64).powf(1.0 / (2 * k) as f64)
}

/// Dimension of the space of symmetric `k`-tensors on `R^d`.
pub fn sym_dim(d: usize, k: usize) -> usize {
    binomial((d + k - 1) as u64, k as u64).round() as usize
}

/// Monomial exponent patterns of degree `k` in `d` variables, each with its
/// weight `√(k! / Π mⱼ!)`.
fn monomials(d: usize, k: usize) -> Vec<(Vec<usize>, f64)> {
    (0..d)
        .combinations_with_replacement(k)
        .map(|combo| {
            let mut mult = vec![0usize; d];
            for j in combo {
                mult[j] += 1;
            }
            let mut coef = (1..=k).map(|x| x as f64).product::<f64>();
            for &m in &mult {
                coef /= (1..=m).map(|x| x as f64).product::<f64>();
            }
            (mult, coef.sqrt())
        })
        .collect()
}

/// Symmetric power embedding with `⟨s(u), s(v)⟩ = ⟨u, v⟩^k`.
pub fn sym_embed(v: &[f64], k: usize) -> Vector {
    monomials(v.len(), k)
        .iter()
        .map(|(mult, w)| w * mult.iter().zip(v).map(|(&m, x)| x.powi(m as i32)).product::<f64>())
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensorNormSurrogate {
    pub d: usize,
    pub k: usize,
    pub sym_dim: usize,
    /// Dimension of the span of the lifted polar vertices.
    pub span_dim: usize,
    /// PSD form `A` with `p(v) = s(v)ᵀ A s(v)`.
    pub form: SymMatrix,
    /// Certified factor: `p^{1/2k} ≤ gauge ≤ factor · p^{1/2k}`.
    pub factor: f64,
    pub gap: f64,
}

impl PolynomialNorm for TensorNormSurrogate {
    fn half_degree(&self) -> usize {
        self.k
    }
    fn eval(&self, v: &[f64]) -> f64 {
        self.form.quad_form(&sym_embed(v, self.k))
    }
}

/// Gauge of the symmetric body whose polar has the given vertices.
pub fn gauge_from_polar(polar_vertices: &[Vector], v: &[f64]) -> f64 {
    polar_vertices.iter().map(|l| dot(l, v).abs()).fold(0.0, f64::max)
}

/// Lifts the polar vertices `ℓ` to `±s(ℓ)`, fits the minimum-volume
/// ellipsoid in their span and uses the inscribed ellipsoid `E` (shrunk by
/// the square root of the span dimension) to define `p(v) = h_E(s(v))²`.
pub fn tensor_lift(bpolar_vertices: &[Vector], k: usize, eps: f64) -> Result<TensorNormSurrogate> {
    let d = bpolar_vertices
        .first()
        .map(|v| v.len())
        .ok_or_else(|| Error::InvalidInput("tensor_lift needs polar vertices".into()))?;
    for v in bpolar_vertices {
        check_dim("polar vertex", d, v.len())?;
    }
    if d == 0 || k == 0 {
        return Err(Error::InvalidInput("tensor_lift needs d, k ≥ 1".into()));
    }
    let n = sym_dim(d, k);
    if n > MAX_SYM_DIM {
        return Err(Error::InvalidInput(format!(
            "symmetric tensor space has dimension {n} > {MAX_SYM_DIM}"
        )));
    }
    if Matrix::from_rows(bpolar_vertices)?.rank(1e-10) < d {
        return Err(Error::Degenerate {
            what: "polar vertices do not span, the body is unbounded".into(),
            direction: Matrix::from_rows(bpolar_vertices)?
                .null_space(1e-10)
                .into_iter()
                .next()
                .unwrap_or_default(),
        });
    }
    let lifted: Vec<Vector> = bpolar_vertices.iter().map(|l| sym_embed(l, k)).collect();
    let basis = Matrix::from_cols(&lifted)?.column_space(1e-10);
    let r = basis.len();
    let coords: Vec<Vector> = lifted
        .iter()
        .map(|s| basis.iter().map(|b| dot(b, s)).collect())
        .collect();
    let mvee = loewner_mvee_symmetric(&coords, eps)?;
    let mut form = SymMatrix::zeros(n);
    for (s, &u) in lifted.iter().zip(&mvee.weights) {
        if u > 0.0 {
            form.add_outer(u, s);
        }
    }
    let factor = (r as f64 * (1.0 + mvee.gap)).powf(1.0 / (2 * k) as f64);
    let sur = TensorNormSurrogate {
        d,
        k,
        sym_dim: n,
        span_dim: r,
        form,
        factor,
        gap: mvee.gap,
    };
    if !is_psd(&sur.form, 1e-12) {
        return Err(Error::CertificationFailed("tensor form is not PSD".into()));
    }
    let hi = alpha_bound(d, k) * (1.0 + 1e-2);
    for u in sample_unit_sphere(d, 256, Seed(0x7e57)) {
        let ratio = gauge_from_polar(bpolar_vertices, &u) / sur.norm(&u);
        if !(1.0 - 1e-9..=hi).contains(&ratio) {
            return Err(Error::CertificationFailed(format!(
                "gauge/p^(1/2k) = {ratio} outside [1, {hi}] at {u:?}"
            )));
        }
    }
    Ok(sur)
}

/// `p(x) = Σ xᵢ^{2k}`, a surrogate for the cube within `d^{1/2k}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PowerSumNorm {
    pub d: usize,
    pub k: usize,
}

impl PowerSumNorm {
    pub fn factor(&self) -> f64 {
        (self.d as f64).powf(1.0 / (2 * self.k) as f64)
    }
}

impl PolynomialNorm for PowerSumNorm {
    fn half_degree(&self) -> usize {
        self.k
    }
    fn eval(&self, v: &[f64]) -> f64 {
        v.iter().map(|x| x.powi(2 * self.k as i32)).sum()
    }
}

pub fn power_sum_norm(d: usize, k: usize) -> Result<PowerSumNorm> {
    if d == 0 || k == 0 {
        return Err(Error::InvalidInput("power_sum_norm needs d, k ≥ 1".into()));
    }
    Ok(PowerSumNorm { d, k })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    pub atoms: Vec<(Vector, f64)>,
}

impl EmpiricalMeasure {
    /// Normalizes nonnegative weights to sum 1.
    pub fn new(atoms: Vec<(Vector, f64)>) -> Result<Self> {
        if atoms.iter().any(|(_, w)| !(*w >= 0.0)) {
            return Err(Error::InvalidInput("measure weights must be ≥ 0".into()));
        }
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        if total <= 0.0 {
            return Err(Error::InvalidInput("measure has no mass".into()));
        }
        Ok(EmpiricalMeasure {
            atoms: atoms.into_iter().map(|(p, w)| (p, w / total)).collect(),
        })
    }

    pub fn uniform(points: Vec<Vector>) -> Result<Self> {
        Self::new(points.into_iter().map(|p| (p, 1.0)).collect())
    }

    pub fn weights(&self) -> Vec<f64> {
        self.atoms.iter().map(|(_, w)| *w).collect()
    }
}

/// Share of sampled unit functionals maximized at each vertex of `K`
/// (ties go to the lowest index).
pub fn exterior_angle(k: &Body, n_samples: usize, seed: Seed) -> Result<EmpiricalMeasure> {
    let Rep::VRep { points } = &k.rep else {
        return Err(Error::InvalidInput("exterior_angle needs a V-polytope".into()));
    };
    if n_samples == 0 {
        return Err(Error::InvalidInput("exterior_angle needs samples".into()));
    }
    let mut counts = vec![0usize; points.len()];
    for c in sample_unit_sphere(k.dim(), n_samples, seed) {
        let mut best = 0;
        let mut bv = f64::NEG_INFINITY;
        for (i, p) in points.iter().enumerate() {
            let v = dot(&c, p);
            if v > bv {
                bv = v;
                best = i;
            }
        }
        counts[best] += 1;
    }
    EmpiricalMeasure::new(
        points
            .iter()
            .zip(counts)
            .map(|(p, c)| (p.clone(), c as f64))
            .collect(),
    )
}

/// `p(v) = Σ wᵢ ⟨ℓᵢ, v⟩^{2k}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentNorm {
    pub k: usize,
    pub measure: EmpiricalMeasure,
}

impl PolynomialNorm for MomentNorm {
    fn half_degree(&self) -> usize {
        self.k
    }
    fn eval(&self, v: &[f64]) -> f64 {
        self.measure
            .atoms
            .iter()
            .map(|(l, w)| w * dot(l, v).powi(2 * self.k as i32))
            .sum()
    }
}

pub fn moment_norm(mu: &EmpiricalMeasure, k: usize) -> Result<MomentNorm> {
    if k == 0 {
        return Err(Error::InvalidInput("moment_norm needs k ≥ 1".into()));
    }
    let support: Vec<Vector> = mu
        .atoms
        .iter()
        .filter(|(_, w)| *w > 0.0)
        .map(|(p, _)| p.clone())
        .collect();
    let d = support.first().map(|p| p.len()).unwrap_or(0);
    let m = Matrix::from_rows(&support)?;
    if m.rank(1e-10) < d {
        return Err(Error::Degenerate {
            what: "measure support does not span".into(),
            direction: m.null_space(1e-10).into_iter().next().unwrap_or_default(),
        });
    }
    Ok(MomentNorm {
        k,
        measure: mu.clone(),
    })
}

/// Smallest and largest `gauge(B, u) / p^{1/2k}(u)` over sampled directions.
pub fn sandwich_ratios(p: &dyn PolynomialNorm, b: &Body, n: usize, seed: Seed) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for u in sample_unit_sphere(b.dim(), n, seed) {
        let r = b.gauge(&u)? / p.norm(&u);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok((lo, hi))
}
