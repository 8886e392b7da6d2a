//! Symmetric eigendecomposition (cyclic Jacobi) and PSD decisions.

use super::linalg::{Matrix, SymMatrix, Vector};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct Eigen {
    /// Eigenvalues in descending order.
    pub values: Vector,
    /// Column `j` is the unit eigenvector of `values[j]`.
    pub vectors: Matrix,
}

impl Eigen {
    pub fn min(&self) -> f64 {
        *self.values.last().unwrap_or(&0.0)
    }

    pub fn max(&self) -> f64 {
        *self.values.first().unwrap_or(&0.0)
    }

    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.values.len();
        let mut m = SymMatrix::zeros(n);
        for (j, &lam) in self.values.iter().enumerate() {
            m.add_outer(lam, &self.vectors.col(j));
        }
        m
    }
}

/// Cyclic Jacobi eigendecomposition.
///
/// Sweeps until the off-diagonal mass is at rounding level. Fails with
/// [`Error::NonConvergence`] if after the sweep cap the off-diagonal norm
/// still exceeds `tol·(1+‖m‖_max)`.
pub fn sym_eigen(m: &SymMatrix, tol: f64) -> Result<Eigen> {
    let n = m.dim();
    let mut a = m.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let scale = 1.0 + m.max_abs();

    let off = |a: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += a[(i, j)] * a[(i, j)];
            }
        }
        s.sqrt()
    };
    let frob = m.as_matrix().as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        let o = off(&a);
        if o <= 1e-15 * frob || o == 0.0 {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // skip entries already negligible relative to both diagonals
                if sweeps > 4
                    && apq.abs() * 1e18 < app.abs().max(1e-300)
                    && apq.abs() * 1e18 < aqq.abs().max(1e-300)
                {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if off(&a) > tol * scale {
        return Err(Error::NonConvergence {
            what: "Jacobi eigensolver",
            iterations: sweeps,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new)] = v[(k, old)];
        }
    }
    Ok(Eigen { values, vectors })
}

/// Threshold below which a minimum eigenvalue counts as negative:
/// `tol·(1+‖m‖_max)`.
pub fn psd_threshold(m: &SymMatrix, tol: f64) -> f64 {
    tol * (1.0 + m.max_abs())
}

/// PSD decision by shifted Cholesky with symmetric pivoting: `m` is accepted
/// iff `m + τI` is positive definite, `τ = tol·(1+‖m‖_max)`. This is the
/// perturbed Sylvester test and agrees with `min eigenvalue ≥ −τ` away from
/// the measure-zero boundary.
pub fn is_psd(m: &SymMatrix, tol: f64) -> bool {
    let n = m.dim();
    let tau = psd_threshold(m, tol);
    let mut a = m.as_matrix().clone();
    for i in 0..n {
        a[(i, i)] += tau;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        // largest remaining diagonal
        let (best, dmax) = (k..n)
            .map(|i| (i, a[(perm[i], perm[i])]))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if !(dmax > 0.0) {
            return false;
        }
        perm.swap(k, best);
        let pk = perm[k];
        let piv = a[(pk, pk)];
        for i in k + 1..n {
            let pi = perm[i];
            let f = a[(pi, pk)] / piv;
            if f == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let pj = perm[j];
                a[(pi, pj)] -= f * a[(pk, pj)];
            }
        }
    }
    true
}

/// Minimum eigenvalue, via [`sym_eigen`].
pub fn min_eigenvalue(m: &SymMatrix) -> Result<f64> {
    Ok(sym_eigen(m, 1e-10)?.min())
}

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
pub fn project_psd(m: &SymMatrix) -> Result<SymMatrix> {
    let e = sym_eigen(m, 1e-10)?;
    let n = m.dim();
    let mut out = SymMatrix::zeros(n);
    for (j, &lam) in e.values.iter().enumerate() {
        if lam > 0.0 {
            out.add_outer(lam, &e.vectors.col(j));
        }
    }
    Ok(out)
}
