//! Facet enumeration for V-polytopes.
//!
//! Two routes: a floating-point scan over all `d`-subsets of vertices (small
//! dimension only) and an exact double-description method on integer
//! vertices, run in `i128` with gcd normalization.

use itertools::Itertools;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::numerics::{dot, Matrix, Vector};

/// Facets `a·x ≤ 1` of `conv(points)`, which must contain the origin in its
/// interior. Scans all `d`-subsets, so it is limited to `d ≤ 6`.
pub fn facets_bruteforce(points: &[Vector], tol: f64) -> Result<Vec<(Vector, f64)>> {
    let d = points.first().map_or(0, |p| p.len());
    if d == 0 {
        return Err(Error::InvalidInput("facet scan needs points".into()));
    }
    if d > 6 {
        return Err(Error::InvalidInput(format!(
            "subset facet scan is limited to dimension 6, got {d}"
        )));
    }
    let scale = points.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut out: Vec<Vector> = Vec::new();
    for subset in (0..points.len()).combinations(d) {
        let rows: Vec<Vector> = subset.iter().map(|&i| points[i].clone()).collect();
        let m = Matrix::from_rows(&rows)?;
        if m.rank(1e-10 * scale) < d {
            continue;
        }
        let Ok(a) = m.solve(&vec![1.0; d]) else { continue };
        if points.iter().any(|p| dot(&a, p) > 1.0 + tol) {
            continue;
        }
        if !out.iter().any(|f| f.iter().zip(&a).all(|(x, y)| (x - y).abs() <= 1e-7 * (1.0 + x.abs()))) {
            out.push(a);
        }
    }
    if out.len() <= d {
        return Err(Error::OriginNotInterior);
    }
    Ok(out.into_iter().map(|a| (a, 1.0)).collect())
}

/// Integer halfspace `normal·x ≤ offset`, coefficients coprime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfSpace {
    pub normal: Vec<i64>,
    pub offset: i64,
}

fn gcd_normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

fn idot(a: &[i128], b: &[i128]) -> Result<i128> {
    let mut s: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        s = s
            .checked_add(x.checked_mul(*y).ok_or(Error::Overflow)?)
            .ok_or(Error::Overflow)?;
    }
    Ok(s)
}

/// Fraction-free (Bareiss) determinant.
fn bareiss_det(mut m: Vec<Vec<i128>>) -> Result<i128> {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Ok(0);
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j]
                    .checked_mul(m[k][k])
                    .and_then(|a| m[i][k].checked_mul(m[k][j]).and_then(|b| a.checked_sub(b)))
                    .ok_or(Error::Overflow)?;
                m[i][j] = v / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

type Bits = Vec<u64>;

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn popcount(a: &Bits) -> u32 {
    a.iter().map(|x| x.count_ones()).sum()
}

struct Ray {
    v: Vec<i128>,
    zero: Bits,
}

/// All facets of `conv(points)` for full-dimensional integer point sets.
///
/// Runs the double description method on the cone
/// `{(β, a) : β − a·pᵢ ≥ 0}`, whose extreme rays are exactly the facets.
pub fn facets_integer(points: &[Vec<i64>]) -> Result<Vec<HalfSpace>> {
    let d = points.first().map_or(0, |p| p.len());
    if d == 0 {
        return Err(Error::InvalidInput("facet enumeration needs points".into()));
    }
    let rows: Vec<Vec<i128>> = points
        .iter()
        .map(|p| {
            let mut r = vec![1i128];
            r.extend(p.iter().map(|&x| -(x as i128)));
            r
        })
        .collect();
    let nrows = rows.len();
    let words = nrows.div_ceil(64);

    // greedy row basis by fraction-free elimination
    let mut echelon: Vec<(usize, Vec<i128>)> = Vec::new();
    let mut basis_rows = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        for (piv, e) in &echelon {
            if v[*piv] != 0 {
                let (a, b) = (e[*piv], v[*piv]);
                for k in 0..=d {
                    v[k] = v[k]
                        .checked_mul(a)
                        .and_then(|x| e[k].checked_mul(b).and_then(|y| x.checked_sub(y)))
                        .ok_or(Error::Overflow)?;
                }
                gcd_normalize(&mut v);
            }
        }
        if let Some(piv) = v.iter().position(|&x| x != 0) {
            echelon.push((piv, v));
            basis_rows.push(i);
            if basis_rows.len() == d + 1 {
                break;
            }
        }
    }
    if basis_rows.len() < d + 1 {
        return Err(Error::Degenerate {
            what: "point set is not full-dimensional".into(),
            direction: vec![],
        });
    }

    // initial simplicial cone: generalized cross products of d basis rows
    let mut rays: Vec<Ray> = Vec::new();
    for (jj, &j) in basis_rows.iter().enumerate() {
        let others: Vec<&Vec<i128>> = basis_rows
            .iter()
            .enumerate()
            .filter(|&(kk, _)| kk != jj)
            .map(|(_, &k)| &rows[k])
            .collect();
        let mut v = vec![0i128; d + 1];
        for (col, slot) in v.iter_mut().enumerate() {
            let minor: Vec<Vec<i128>> = others
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, &x)| x).collect())
                .collect();
            let det = bareiss_det(minor)?;
            *slot = if col % 2 == 0 { det } else { -det };
        }
        if idot(&rows[j], &v)? < 0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        gcd_normalize(&mut v);
        let mut zero = vec![0u64; words];
        for &k in &basis_rows {
            if k != j {
                bit_set(&mut zero, k);
            }
        }
        rays.push(Ray { v, zero });
    }

    let need = d as u32 - 1; // common tight rows for adjacency in a (d+1)-dim cone
    for (h, row) in rows.iter().enumerate() {
        if basis_rows.contains(&h) {
            continue;
        }
        let vals: Vec<i128> = rays.iter().map(|r| idot(row, &r.v)).collect::<Result<_>>()?;
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        if neg.is_empty() {
            for (r, &s) in rays.iter_mut().zip(&vals) {
                if s == 0 {
                    bit_set(&mut r.zero, h);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = and(&rays[p].zero, &rays[q].zero);
                if popcount(&common) < need {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !subset(&common, &r.zero));
                if !adjacent {
                    continue;
                }
                let (sp, sq) = (vals[p], vals[q]);
                let mut v = Vec::with_capacity(d + 1);
                for k in 0..=d {
                    let x = sp
                        .checked_mul(rays[q].v[k])
                        .and_then(|a| sq.checked_mul(rays[p].v[k]).and_then(|b| a.checked_sub(b)))
                        .ok_or(Error::Overflow)?;
                    v.push(x);
                }
                gcd_normalize(&mut v);
                let mut zero = common;
                bit_set(&mut zero, h);
                fresh.push(Ray { v, zero });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(pos.len() + fresh.len());
        for (i, r) in rays.into_iter().enumerate() {
            if vals[i] > 0 {
                kept.push(r);
            } else if vals[i] == 0 {
                let mut r = r;
                bit_set(&mut r.zero, h);
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }

    let mut out: Vec<HalfSpace> = rays
        .into_iter()
        .map(|r| {
            let to64 = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow);
            Ok(HalfSpace {
                offset: to64(r.v[0])?,
                normal: r.v[1..].iter().map(|&x| to64(x)).collect::<Result<_>>()?,
            })
        })
        .collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}
