//! Dense vectors and matrices.
//!
//! Vectors are plain `Vec<f64>` / `&[f64]`. [`Matrix`] is a row-major dense
//! matrix, [`SymMatrix`] wraps a square matrix whose symmetry is enforced on
//! every write.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vector = Vec<f64>;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn scaled(a: &[f64], t: f64) -> Vector {
    a.iter().map(|x| x * t).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `y += t * x`
pub fn axpy(y: &mut [f64], t: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += t * xi;
    }
}

pub fn unit(d: usize, i: usize) -> Vector {
    let mut e = vec![0.0; d];
    e[i] = 1.0;
    e
}

pub fn is_finite(a: &[f64]) -> bool {
    a.iter().all(|x| x.is_finite())
}

/// Binomial coefficient as f64 (exact for the small arguments used here).
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vector]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    context: "matrix rows",
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vector]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vector {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `selfᵀ x`
    pub fn tmul_vec(&self, x: &[f64]) -> Vector {
        debug_assert_eq!(x.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, xi) in x.iter().enumerate() {
            if *xi != 0.0 {
                axpy(&mut out, *xi, self.row(i));
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = out.row_mut(i);
                for (d, o) in dst.iter_mut().zip(orow) {
                    *d += a * o;
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        norm_inf(&self.data)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Solve `self · x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Result<Vector> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("solve needs a square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.to_vec();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for c in 0..n {
            let p = (c..n)
                .max_by(|&i, &j| a[(i, c)].abs().total_cmp(&a[(j, c)].abs()))
                .unwrap();
            if a[(p, c)].abs() <= 1e-14 * scale {
                return Err(Error::SingularMap);
            }
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                }
                x.swap(p, c);
            }
            let piv = a[(c, c)];
            for r in c + 1..n {
                let f = a[(r, c)] / piv;
                if f == 0.0 {
                    continue;
                }
                for j in c..n {
                    a[(r, j)] -= f * a[(c, j)];
                }
                x[r] -= f * x[c];
            }
        }
        for c in (0..n).rev() {
            let s: f64 = (c + 1..n).map(|j| a[(c, j)] * x[j]).sum();
            x[c] = (x[c] - s) / a[(c, c)];
        }
        Ok(x)
    }

    /// Gauss–Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("inverse needs a square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for c in 0..n {
            let p = (c..n)
                .max_by(|&i, &j| a[(i, c)].abs().total_cmp(&a[(j, c)].abs()))
                .unwrap();
            if a[(p, c)].abs() <= 1e-14 * scale {
                return Err(Error::SingularMap);
            }
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = a[(c, c)];
            for j in 0..n {
                a[(c, j)] /= piv;
                inv[(c, j)] /= piv;
            }
            for r in 0..n {
                let f = a[(r, c)];
                if r == c || f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[(r, j)] -= f * a[(c, j)];
                    inv[(r, j)] -= f * inv[(c, j)];
                }
            }
        }
        Ok(inv)
    }

    /// Orthonormal basis (as vectors) of the null space `{x : self·x = 0}`,
    /// computed from a Householder QR factorization of `selfᵀ`.
    pub fn null_space(&self, tol: f64) -> Vec<Vector> {
        let (q, rank) = householder_q(&self.transpose(), tol);
        (rank..self.cols).map(|j| q.col(j)).collect()
    }

    /// Orthonormal basis of the column span.
    pub fn column_space(&self, tol: f64) -> Vec<Vector> {
        let (q, rank) = householder_q(self, tol);
        (0..rank).map(|j| q.col(j)).collect()
    }

    pub fn rank(&self, tol: f64) -> usize {
        householder_q(self, tol).1
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Full orthogonal factor `Q` (rows × rows) of a column-pivoted Householder QR
/// of `a`, together with the numerical rank. The first `rank` columns of `Q`
/// span the column space of `a`; the rest span its orthogonal complement.
fn householder_q(a: &Matrix, tol: f64) -> (Matrix, usize) {
    let m = a.rows;
    let n = a.cols;
    let mut r = a.clone();
    let mut q = Matrix::identity(m);
    let scale = a.max_abs().max(1.0);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    for k in 0..m.min(n) {
        // pivot on the remaining column of largest norm
        let (best, best_norm) = (k..n)
            .map(|j| {
                let s: f64 = (k..m).map(|i| r[(i, perm[j])].powi(2)).sum();
                (j, s.sqrt())
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if best_norm <= tol * scale {
            break;
        }
        perm.swap(k, best);
        let c = perm[k];
        let mut v: Vector = (k..m).map(|i| r[(i, c)]).collect();
        let alpha = if v[0] >= 0.0 { -best_norm } else { best_norm };
        v[0] -= alpha;
        let vn = norm2(&v);
        if vn == 0.0 {
            rank += 1;
            continue;
        }
        for x in v.iter_mut() {
            *x /= vn;
        }
        // R <- H R
        for j in 0..n {
            let s: f64 = (k..m).map(|i| v[i - k] * r[(i, j)]).sum();
            for i in k..m {
                r[(i, j)] -= 2.0 * v[i - k] * s;
            }
        }
        // Q <- Q H
        for i in 0..m {
            let s: f64 = (k..m).map(|l| q[(i, l)] * v[l - k]).sum();
            for l in k..m {
                q[(i, l)] -= 2.0 * s * v[l - k];
            }
        }
        rank += 1;
    }
    (q, rank)
}

/// Square matrix with symmetric entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self(Matrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(Matrix::identity(dim))
    }

    /// Symmetrizes by averaging with the transpose; errors on non-square input.
    pub fn from_matrix_symmetrized(m: &Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::InvalidInput("symmetric matrix must be square".into()));
        }
        let n = m.rows;
        let mut s = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)]);
            }
        }
        Ok(Self(s))
    }

    /// Rejects input that is not exactly symmetric.
    pub fn from_rows(rows: &[Vector]) -> Result<Self> {
        Self::try_from(Matrix::from_rows(rows)?)
    }

    pub fn outer(x: &[f64]) -> Self {
        let n = x.len();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = x[i] * x[j];
            }
        }
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Writes both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.0[(i, j)] = v;
        self.0[(j, i)] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.0[(i, j)] += v;
        if i != j {
            self.0[(j, i)] += v;
        }
    }

    /// `self += t · x xᵀ`
    pub fn add_outer(&mut self, t: f64, x: &[f64]) {
        let n = self.dim();
        for i in 0..n {
            let ti = t * x[i];
            if ti == 0.0 {
                continue;
            }
            let row = self.0.row_mut(i);
            for j in 0..n {
                row[j] += ti * x[j];
            }
        }
    }

    pub fn scale(&mut self, t: f64) {
        for x in self.0.data.iter_mut() {
            *x *= t;
        }
    }

    pub fn add_diag(&mut self, t: f64) {
        for i in 0..self.dim() {
            self.0[(i, i)] += t;
        }
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.0.mul_vec(x))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vector {
        self.0.mul_vec(x)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn diag(&self) -> Vector {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diag().iter().sum()
    }

    /// Frobenius inner product.
    pub fn frobenius_dot(&self, other: &SymMatrix) -> f64 {
        dot(&self.0.data, &other.0.data)
    }

    pub fn cholesky(&self) -> Result<Matrix> {
        cholesky_lower(self)
    }

    pub fn inverse(&self) -> Result<SymMatrix> {
        let inv = self.0.inverse()?;
        SymMatrix::from_matrix_symmetrized(&inv)
    }
}

impl TryFrom<Matrix> for SymMatrix {
    type Error = Error;
    fn try_from(m: Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::InvalidInput("symmetric matrix must be square".into()));
        }
        for i in 0..m.rows {
            for j in 0..i {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::InvalidInput(format!(
                        "matrix not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self(m))
    }
}

impl From<SymMatrix> for Matrix {
    fn from(s: SymMatrix) -> Matrix {
        s.0
    }
}

/// Lower Cholesky factor `L` with `L Lᵀ = m`. Fails on a non-positive pivot.
pub fn cholesky_lower(m: &SymMatrix) -> Result<Matrix> {
    let n = m.dim();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = m.get(j, j);
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return Err(Error::Degenerate {
                what: format!("non-positive pivot {d:e} at index {j} in Cholesky"),
                direction: unit(n, j),
            });
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}
