//! Standard bodies: cube, cross-polytope, simplex, balls, TSP and cut polytopes.

use super::{facets_integer, Body, Rep};
use crate::error::{Error, Result};
use crate::lp::Polyhedron;
use crate::numerics::{dot, Matrix, SymMatrix, Vector};

/// `I_d = [-1,1]^d` as an H-polytope.
pub fn cube(d: usize) -> Body {
    Body {
        rep: Rep::HRep {
            polyhedron: Polyhedron::cube(d),
        },
        symmetric: true,
        center: vec![0.0; d],
    }
}

/// `O_d = conv(±e_i)`.
pub fn cross_polytope(d: usize) -> Body {
    let mut points = Vec::with_capacity(2 * d);
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut p = vec![0.0; d];
            p[i] = s;
            points.push(p);
        }
    }
    Body {
        rep: Rep::VRep { points },
        symmetric: true,
        center: vec![0.0; d],
    }
}

/// `conv(0, e_1, …, e_d)` translated so its barycenter is the origin.
pub fn simplex(d: usize) -> Body {
    let bary = 1.0 / (d as f64 + 1.0);
    let mut points = vec![vec![-bary; d]];
    for i in 0..d {
        let mut p = vec![-bary; d];
        p[i] += 1.0;
        points.push(p);
    }
    Body {
        rep: Rep::VRep { points },
        symmetric: false,
        center: vec![0.0; d],
    }
}

pub fn ball(d: usize, radius: f64) -> Body {
    Body {
        rep: Rep::Ball { dim: d, radius },
        symmetric: true,
        center: vec![0.0; d],
    }
}

pub fn lp_ball(d: usize, p: f64, radius: f64) -> Body {
    Body {
        rep: Rep::LpBall { dim: d, p, radius },
        symmetric: true,
        center: vec![0.0; d],
    }
}

/// The traveling-salesman polytope `TSP_n` in intrinsic coordinates.
///
/// Points of the ambient space `V_n` (symmetric, zero diagonal, all row
/// sums 2) are written `A + Σ z_k B_k`, where `A` has off-diagonal entries
/// `2/(n−1)` (the vertex barycenter, which has row sums 2) and the `B_k` are
/// Frobenius-orthonormal. `body` is the V-polytope
/// of the coordinate vectors `z` of all Hamiltonian cycles; its center is the
/// origin, i.e. the matrix `A`.
#[derive(Clone, Debug)]
pub struct Tsp {
    pub n: usize,
    /// Cycles as vertex sequences starting at 0, one per undirected cycle.
    pub cycles: Vec<Vec<usize>>,
    /// Edge list `(i, j)`, `i < j`, in lexicographic order.
    pub edges: Vec<(usize, usize)>,
    /// `|E| × dim` matrix with orthonormal columns spanning the recentred
    /// edge space; `B_k` has entries `edge_basis[e][k] / √2` on both
    /// positions of edge `e`.
    pub edge_basis: Matrix,
    pub center: Matrix,
    pub body: Body,
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Builds `TSP_n` for `4 ≤ n ≤ 8`.
pub fn make_tsp(n: usize) -> Result<Tsp> {
    if n < 4 {
        return Err(Error::InvalidInput(format!("TSP_n needs n ≥ 4, got {n}")));
    }
    if n > 8 {
        return Err(Error::InvalidInput(format!("TSP_n limited to n ≤ 8, got {n}")));
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let edge_index = |i: usize, j: usize| -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        edges.iter().position(|&e| e == (a, b)).unwrap()
    };

    // canonical sequences: start at 0, second vertex smaller than the last
    let mut cycles = Vec::new();
    let mut rest: Vec<usize> = (1..n).collect();
    loop {
        if rest[0] < rest[rest.len() - 1] {
            let mut c = vec![0];
            c.extend_from_slice(&rest);
            cycles.push(c);
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }

    // recentred space: null space of the vertex–edge incidence matrix
    let mut incidence = Matrix::zeros(n, edges.len());
    for (e, &(i, j)) in edges.iter().enumerate() {
        incidence[(i, e)] = 1.0;
        incidence[(j, e)] = 1.0;
    }
    let basis = incidence.null_space(1e-10);
    let edge_basis = Matrix::from_cols(&basis)?;

    let a = 2.0 / (n - 1) as f64;
    let mut center = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                center[(i, j)] = a;
            }
        }
    }

    let sqrt2 = std::f64::consts::SQRT_2;
    let points: Vec<Vector> = cycles
        .iter()
        .map(|c| {
            let mut x = vec![-a; edges.len()];
            for k in 0..n {
                x[edge_index(c[k], c[(k + 1) % n])] += 1.0;
            }
            edge_basis.tmul_vec(&x).into_iter().map(|v| sqrt2 * v).collect()
        })
        .collect();
    let dim = basis.len();
    Ok(Tsp {
        n,
        cycles,
        edges,
        edge_basis,
        center,
        body: Body {
            rep: Rep::VRep { points },
            symmetric: false,
            center: vec![0.0; dim],
        },
    })
}

impl Tsp {
    pub fn dim(&self) -> usize {
        self.edge_basis.cols()
    }

    /// 0/1 edge-indicator vector of cycle `k`.
    pub fn edge_vector(&self, k: usize) -> Vec<i64> {
        let c = &self.cycles[k];
        let n = self.n;
        let mut x = vec![0i64; self.edges.len()];
        for t in 0..n {
            let (i, j) = (c[t], c[(t + 1) % n]);
            let key = if i < j { (i, j) } else { (j, i) };
            let e = self.edges.iter().position(|&q| q == key).unwrap();
            x[e] = 1;
        }
        x
    }

    /// Adjacency matrix of cycle `k`.
    pub fn vertex_matrix(&self, k: usize) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for (e, v) in self.edge_vector(k).into_iter().enumerate() {
            let (i, j) = self.edges[e];
            m[(i, j)] = v as f64;
            m[(j, i)] = v as f64;
        }
        m
    }

    /// Matrix `A + Σ z_k B_k`.
    pub fn to_matrix(&self, z: &[f64]) -> Matrix {
        let x = self.edge_basis.mul_vec(z);
        let mut m = self.center.clone();
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            let v = x[e] / std::f64::consts::SQRT_2;
            m[(i, j)] += v;
            m[(j, i)] += v;
        }
        m
    }

    /// Intrinsic coordinates `z_k = ⟨X − A, B_k⟩_F` of a matrix in `V_n`.
    pub fn to_intrinsic(&self, m: &Matrix) -> Vector {
        let a = 2.0 / (self.n - 1) as f64;
        let x: Vector = self.edges.iter().map(|&(i, j)| m[(i, j)] - a).collect();
        self.edge_basis
            .tmul_vec(&x)
            .into_iter()
            .map(|v| std::f64::consts::SQRT_2 * v)
            .collect()
    }

    /// Facets `a·z ≤ 1` of the polytope in intrinsic coordinates, by exact
    /// double description on the 0/1 edge vectors restricted to a set of
    /// free edges.
    pub fn facets(&self) -> Result<Vec<(Vector, f64)>> {
        let n = self.n;
        let ne = self.edges.len();
        // dependent edges: a column basis of the incidence matrix
        let mut chosen: Vec<usize> = Vec::new();
        let mut cols: Vec<Vector> = Vec::new();
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            let mut col = vec![0.0; n];
            col[i] = 1.0;
            col[j] = 1.0;
            cols.push(col);
            if Matrix::from_cols(&cols)?.rank(1e-9) == cols.len() {
                chosen.push(e);
                if chosen.len() == n {
                    break;
                }
            } else {
                cols.pop();
            }
        }
        let free: Vec<usize> = (0..ne).filter(|e| !chosen.contains(e)).collect();
        let pts: Vec<Vec<i64>> = (0..self.cycles.len())
            .map(|k| {
                let x = self.edge_vector(k);
                free.iter().map(|&e| x[e]).collect()
            })
            .collect();
        let raw = facets_integer(&pts)?;
        let a = 2.0 / (n - 1) as f64;
        let s = std::f64::consts::SQRT_2;
        let mut out: Vec<(Vector, f64)> = Vec::with_capacity(raw.len());
        for h in raw {
            // a·x_F ≤ β with x_F = a_F + E_F z / √2
            let af: Vector = h.normal.iter().map(|&v| v as f64).collect();
            let rhs = h.offset as f64 - a * af.iter().sum::<f64>();
            let mut normal = vec![0.0; self.dim()];
            for (t, &e) in free.iter().enumerate() {
                for k in 0..self.dim() {
                    normal[k] += af[t] * self.edge_basis[(e, k)] / s;
                }
            }
            if rhs <= 0.0 {
                return Err(Error::OriginNotInterior);
            }
            out.push((normal.iter().map(|v| v / rhs).collect(), 1.0));
        }
        // sanity: every vertex satisfies every facet
        if let Rep::VRep { points } = &self.body.rep {
            for (f, _) in &out {
                if points.iter().any(|p| dot(f, p) > 1.0 + 1e-9) {
                    return Err(Error::CertificationFailed("TSP facet violated by a vertex".into()));
                }
            }
        }
        Ok(out)
    }
}

/// Vertices of the cut polytope: `x ⊗ x` for `x ∈ {±1}^n` modulo sign, or
/// in asymmetric mode `x ⊗ y` for `x, y ∈ {±1}^n` modulo the joint sign.
pub fn make_cut(n: usize, asymmetric: bool) -> Result<Vec<Matrix>> {
    if !(2..=10).contains(&n) {
        return Err(Error::InvalidInput(format!("cut polytope needs 2 ≤ n ≤ 10, got {n}")));
    }
    let sign_vec = |bits: u32, len: usize| -> Vector {
        (0..len)
            .map(|i| if bits >> i & 1 == 1 { -1.0 } else { 1.0 })
            .collect()
    };
    let mut out = Vec::new();
    if !asymmetric {
        // first coordinate fixed to +1
        for bits in 0..(1u32 << (n - 1)) {
            let x = sign_vec(bits << 1, n);
            out.push(SymMatrix::outer(&x).as_matrix().clone());
        }
    } else {
        for xb in 0..(1u32 << (n - 1)) {
            let x = sign_vec(xb << 1, n);
            for yb in 0..(1u32 << n) {
                let y = sign_vec(yb, n);
                let mut m = Matrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] = x[i] * y[j];
                    }
                }
                out.push(m);
            }
        }
    }
    Ok(out)
}
