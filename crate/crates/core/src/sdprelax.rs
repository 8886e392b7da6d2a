//! Sections of the PSD cone: the unit-diagonal relaxation of the cut
//! polytope, corners of unit-diagonal PSD matrices (`Q_n`) and the forms
//! `q_v(p) = Σ w (1 − ℓ(v)) p(ℓ)²` over a measure on the polar body.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bodies::{make_cut, Body};
use crate::error::{check_dim, Error, Result};
use crate::lp::member_vrep;
use crate::numerics::{
    dot, is_psd, project_psd, psd_threshold, sample_unit_sphere, sym_eigen, Matrix, Seed, SymMatrix, Vector,
};
use crate::polynorm::EmpiricalMeasure;

/// Upper bound on the real Grothendieck constant, `π / (2 ln(1+√2))`.
pub fn grothendieck_bound() -> f64 {
    std::f64::consts::PI / (2.0 * (1.0 + 2f64.sqrt()).ln())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelaxationPoint {
    pub matrix: SymMatrix,
    /// Smallest eigenvalue.
    pub psd_margin: f64,
}

impl RelaxationPoint {
    pub fn new(matrix: SymMatrix) -> Result<Self> {
        check_unit_diagonal(&matrix, 0.0)?;
        let psd_margin = sym_eigen(&matrix, 1e-12)?.min();
        Ok(RelaxationPoint { matrix, psd_margin })
    }
}

fn check_unit_diagonal(x: &SymMatrix, tol: f64) -> Result<()> {
    for i in 0..x.dim() {
        if (x.get(i, i) - 1.0).abs() > tol {
            return Err(Error::InvalidInput(format!(
                "diagonal entry {i} is {} (expected 1)",
                x.get(i, i)
            )));
        }
    }
    Ok(())
}

/// Off-diagonal coordinates `(x_ij)_{i<j}`.
pub fn offdiag(x: &SymMatrix) -> Vector {
    let n = x.dim();
    (0..n).tuple_combinations().map(|(i, j)| x.get(i, j)).collect()
}

fn from_offdiag(n: usize, v: &[f64]) -> SymMatrix {
    let mut x = SymMatrix::identity(n);
    for ((i, j), &val) in (0..n).tuple_combinations().zip(v) {
        x.set(i, j, val);
    }
    x
}

/// Membership in `{X ⪰ 0, diag X = 1}`.
pub fn cut_relax_member(x: &SymMatrix, tol: f64) -> Result<bool> {
    check_unit_diagonal(x, tol)?;
    Ok(is_psd(x, tol))
}

fn cut_vertices_offdiag(n: usize) -> Result<Vec<Vector>> {
    Ok(make_cut(n, false)?
        .iter()
        .map(|m| (0..n).tuple_combinations().map(|(i, j)| m[(i, j)]).collect())
        .collect())
}

/// Exact membership in `CUT_n = conv(x⊗x : x ∈ {±1}^n)`.
pub fn cut_brute_member(x: &SymMatrix, n: usize, feastol: f64) -> Result<bool> {
    check_dim("cut matrix", n, x.dim())?;
    if (0..n).any(|i| (x.get(i, i) - 1.0).abs() > feastol) {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    member_vrep(&offdiag(x), &cut_vertices_offdiag(n)?, feastol)
}

/// Random boundary points `R` of the relaxation, from zero-diagonal
/// perturbations `D` scaled so that `I + sD` is singular.
pub fn relaxation_boundary_samples(n: usize, count: usize, seed: Seed) -> Result<Vec<SymMatrix>> {
    let m = n * (n - 1) / 2;
    let mut out = Vec::with_capacity(count);
    for dir in sample_unit_sphere(m, count, seed) {
        let d = from_offdiag(n, &dir);
        let mut dz = d.clone();
        dz.add_diag(-1.0);
        let lmin = sym_eigen(&dz, 1e-13)?.min();
        // trace 0 and D ≠ 0 force λ_min < 0
        let s = -1.0 / lmin;
        out.push(from_offdiag(n, &dir.iter().map(|v| s * v).collect::<Vec<_>>()));
    }
    Ok(out)
}

/// Largest sampled `t ≥ 1` with `I + (R − I)/t` on the boundary of
/// `CUT_n`, a lower bound on the dilation of the relaxation about `I`.
/// Each `t` is the exact gauge of `R − I` with respect to `CUT_n − I`.
pub fn cut_ratio(n: usize, n_samples: usize, seed: Seed, feastol: f64) -> Result<f64> {
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidInput(format!("cut_ratio needs 2 ≤ n ≤ 6, got {n}")));
    }
    let _ = feastol;
    let cut = Body::vrep(cut_vertices_offdiag(n)?)?;
    let mut worst = 1.0f64;
    for r in relaxation_boundary_samples(n, n_samples, seed)? {
        worst = worst.max(cut.gauge(&offdiag(&r))?);
    }
    Ok(worst)
}

/// `I + (R − I)/t ∈ CUT_n`, for bisection oracles.
pub fn cut_scaled_member(r: &SymMatrix, t: f64, feastol: f64) -> Result<bool> {
    let n = r.dim();
    let v: Vector = offdiag(r).iter().map(|x| x / t).collect();
    cut_brute_member(&from_offdiag(n, &v), n, feastol)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum QStatus {
    /// Completed `2n×2n` matrix with unit diagonal and corner `X` exactly,
    /// smallest eigenvalue `psd_margin ≥ −tol`.
    Feasible { witness: SymMatrix, psd_margin: f64 },
    /// PSD `W` supported on the diagonal and the corner blocks with
    /// `⟨W, Y⟩ < 0` for every completion `Y`.
    Infeasible { certificate: SymMatrix, value: f64 },
    Undetermined { residual: f64, iterations: usize },
}

impl QStatus {
    pub fn is_feasible(&self) -> bool {
        matches!(self, QStatus::Feasible { .. })
    }
}

fn q_affine(y: &SymMatrix, x: &Matrix) -> SymMatrix {
    let n = x.rows();
    let mut out = y.clone();
    for i in 0..2 * n {
        out.set(i, i, 1.0);
    }
    for i in 0..n {
        for j in 0..n {
            out.set(i, n + j, x[(i, j)]);
        }
    }
    out
}

/// Inner product of a certificate with any completion (free entries of `W`
/// are zero).
fn q_certificate_value(w: &SymMatrix, x: &Matrix) -> f64 {
    let n = x.rows();
    let mut v: f64 = (0..2 * n).map(|i| w.get(i, i)).sum();
    for i in 0..n {
        for j in 0..n {
            v += 2.0 * w.get(i, n + j) * x[(i, j)];
        }
    }
    v
}

fn q_infeasibility_certificate(gap: &SymMatrix, x: &Matrix, tol: f64) -> Option<(SymMatrix, f64)> {
    let n = x.rows();
    let mut w = gap.clone();
    w.scale(-1.0);
    let mut w = project_psd(&w).ok()?;
    for i in 0..2 * n {
        for j in (i + 1)..2 * n {
            let corner = i < n && j >= n;
            if !corner {
                w.set(i, j, 0.0);
            }
        }
    }
    let scale = w.max_abs();
    if scale <= 0.0 {
        return None;
    }
    w.scale(1.0 / scale);
    if !is_psd(&w, 1e-12) {
        return None;
    }
    // the certified value must survive the PSD slack of the check
    let value = q_certificate_value(&w, x);
    let slack = 2.0 * n as f64 * psd_threshold(&w, 1e-12);
    (value < -slack - tol).then_some((w, value))
}

/// Is `X` the upper-right corner of a unit-diagonal PSD `2n×2n` matrix?
/// Dykstra's alternating projections between the affine completion set
/// and the PSD cone.
pub fn q_member(x: &Matrix, tol: f64, iter_cap: usize) -> Result<QStatus> {
    let n = x.rows();
    if x.cols() != n {
        return Err(Error::InvalidInput("q_member needs a square matrix".into()));
    }
    if !(1..=20).contains(&n) {
        return Err(Error::InvalidInput(format!("q_member needs 1 ≤ n ≤ 20, got {n}")));
    }
    let mut y = q_affine(&SymMatrix::identity(2 * n), x);
    let mut corr = SymMatrix::zeros(2 * n);
    let mut last = f64::INFINITY;
    let mut residual = f64::INFINITY;
    for it in 0..iter_cap.max(1) {
        let e = sym_eigen(&y, 1e-12)?;
        if e.min() >= -tol {
            return Ok(QStatus::Feasible {
                witness: y,
                psd_margin: e.min(),
            });
        }
        // PSD step with Dykstra correction; the affine step needs none
        let mut shifted = y.clone();
        add_sym(&mut shifted, &corr, 1.0);
        let c = project_psd(&shifted)?;
        corr = shifted;
        add_sym(&mut corr, &c, -1.0);
        let a = q_affine(&c, x);
        let mut gap = a.clone();
        add_sym(&mut gap, &c, -1.0);
        residual = gap.max_abs();
        if it % 25 == 24 {
            if let Some((w, value)) = q_infeasibility_certificate(&gap, x, tol) {
                return Ok(QStatus::Infeasible { certificate: w, value });
            }
            if (last - residual).abs() <= 1e-12 * (1.0 + residual) && residual > tol {
                return Ok(QStatus::Undetermined {
                    residual,
                    iterations: it + 1,
                });
            }
            last = residual;
        }
        y = a;
    }
    Ok(QStatus::Undetermined {
        residual,
        iterations: iter_cap,
    })
}

fn add_sym(a: &mut SymMatrix, b: &SymMatrix, s: f64) {
    let n = a.dim();
    for i in 0..n {
        for j in i..n {
            a.set(i, j, a.get(i, j) + s * b.get(i, j));
        }
    }
}

/// Exact membership in `ACUT_n = conv(x⊗y)` by LP over all sign vectors.
pub fn acut_brute_member(x: &Matrix, feastol: f64) -> Result<bool> {
    let n = x.rows();
    let verts: Vec<Vector> = make_cut(n, true)?.iter().map(flatten).collect();
    member_vrep(&flatten(x), &verts, feastol)
}

fn flatten(m: &Matrix) -> Vector {
    (0..m.rows()).flat_map(|i| (0..m.cols()).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect()
}

/// Random points of `Q_n`: corners of Gram matrices of unit vectors.
pub fn q_samples(n: usize, count: usize, seed: Seed) -> Vec<Matrix> {
    (0..count as u64)
        .map(|s| {
            let vs = sample_unit_sphere(2 * n, 2 * n, seed.derive(s));
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = dot(&vs[i], &vs[n + j]);
                }
            }
            m
        })
        .collect()
}

/// Monomial exponents of total degree ≤ k in `d` variables.
fn monomials_upto(d: usize, k: usize) -> Vec<Vec<usize>> {
    (0..=k)
        .flat_map(|deg| {
            (0..d).combinations_with_replacement(deg).map(move |c| {
                let mut e = vec![0usize; d];
                for j in c {
                    e[j] += 1;
                }
                e
            })
        })
        .collect()
}

fn eval_monomials(exps: &[Vec<usize>], l: &[f64]) -> Vector {
    exps.iter()
        .map(|e| e.iter().zip(l).map(|(&p, x)| x.powi(p as i32)).product())
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QvForm {
    pub v: Vector,
    pub k: usize,
    /// Exponent vectors of the monomial basis.
    pub basis: Vec<Vec<usize>>,
    pub gram: SymMatrix,
    /// Orthonormal basis of the range of the moment matrix; `gram` is only
    /// meaningful on it, polynomials vanishing on every atom being invisible.
    pub range: Vec<Vector>,
}

impl QvForm {
    /// Gram restricted to the range of the moment matrix.
    pub fn reduced_gram(&self) -> SymMatrix {
        let r = self.range.len();
        let mut out = SymMatrix::zeros(r);
        let g: Vec<Vector> = self.range.iter().map(|u| self.gram.mul_vec(u)).collect();
        for i in 0..r {
            for j in i..r {
                out.set(i, j, dot(&self.range[i], &g[j]));
            }
        }
        out
    }
}

fn gram_for(mu: &EmpiricalMeasure, basis: &[Vec<usize>], v: Option<&[f64]>) -> SymMatrix {
    let mut g = SymMatrix::zeros(basis.len());
    for (l, w) in &mu.atoms {
        let weight = w * v.map_or(1.0, |v| 1.0 - dot(l, v));
        if weight != 0.0 {
            g.add_outer(weight, &eval_monomials(basis, l));
        }
    }
    g
}

pub fn qv_form(mu: &EmpiricalMeasure, k: usize, v: &[f64]) -> Result<QvForm> {
    let d = v.len();
    let support: Vec<Vector> = mu
        .atoms
        .iter()
        .filter(|(_, w)| *w > 0.0)
        .map(|(p, _)| p.clone())
        .collect();
    for p in &support {
        check_dim("q_v atom", d, p.len())?;
    }
    let atoms = Matrix::from_rows(&support)?;
    if atoms.rank(1e-10) < d {
        return Err(Error::Degenerate {
            what: "atoms do not span".into(),
            direction: atoms.null_space(1e-10).into_iter().next().unwrap_or_default(),
        });
    }
    let basis = monomials_upto(d, k);
    if basis.len() > 200 {
        return Err(Error::InvalidInput(format!("{} monomials exceed 200", basis.len())));
    }
    let moment = gram_for(mu, &basis, None);
    let e = sym_eigen(&moment, 1e-13)?;
    let cut = 1e-10 * e.max().max(1e-300);
    let range = (0..e.values.len())
        .filter(|&j| e.values[j] > cut)
        .map(|j| e.vectors.col(j))
        .collect();
    Ok(QvForm {
        v: v.to_vec(),
        k,
        gram: gram_for(mu, &basis, Some(v)),
        basis,
        range,
    })
}

/// Is `q_v` positive semidefinite (on polynomials not vanishing on every
/// atom)? Points of the body always pass.
pub fn qv_certify(bpolar_atoms: &EmpiricalMeasure, k: usize, v: &[f64], tol: f64) -> Result<bool> {
    let f = qv_form(bpolar_atoms, k, v)?;
    Ok(is_psd(&f.reduced_gram(), tol))
}
