//! Body descriptions in JSON.
//!
//! Explicit forms carry a `"type"` tag (`vrep`, `hrep`, `ball`, `ellipsoid`,
//! `projected`, `sectioned`); zoo shorthands carry a `"zoo"` tag (`cube`,
//! `cross`, `simplex`, `ball`, `lpball`, `tsp`, `cut`). Every body may set
//! `"symmetric"` and `"center"`.

use anyhow::{anyhow, bail, Context, Result};
use convex_approx::bodies::{self, Body, Ellipsoid, Rep};
use convex_approx::lp::Polyhedron;
use convex_approx::numerics::{Matrix, SymMatrix, Vector};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VrepSpec {
    #[serde(rename = "type")]
    _tag: String,
    points: Vec<Vector>,
    #[serde(default)]
    symmetric: bool,
    center: Option<Vector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Rows {
    a: Vec<Vector>,
    b: Vector,
    #[serde(default)]
    eq_a: Vec<Vector>,
    #[serde(default)]
    eq_b: Vector,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HrepSpec {
    #[serde(rename = "type")]
    _tag: String,
    a: Vec<Vector>,
    b: Vector,
    #[serde(default)]
    eq_a: Vec<Vector>,
    #[serde(default)]
    eq_b: Vector,
    #[serde(default)]
    symmetric: bool,
    center: Option<Vector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BallSpec {
    #[serde(rename = "type")]
    _tag: String,
    dim: usize,
    #[serde(default = "one")]
    radius: f64,
    center: Option<Vector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EllipsoidSpec {
    #[serde(rename = "type")]
    _tag: String,
    center: Vector,
    form: Vec<Vector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectedSpec {
    #[serde(rename = "type")]
    _tag: String,
    polytope: Rows,
    map: Vec<Vector>,
    offset: Option<Vector>,
    #[serde(default)]
    symmetric: bool,
    center: Option<Vector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SectionedSpec {
    #[serde(rename = "type")]
    _tag: String,
    points: Vec<Vector>,
    basis: Vec<Vector>,
    offset: Option<Vector>,
    #[serde(default)]
    symmetric: bool,
    center: Option<Vector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ZooSpec {
    zoo: String,
    d: Option<usize>,
    n: Option<usize>,
    p: Option<f64>,
    radius: Option<f64>,
    #[serde(default)]
    asymmetric: bool,
}

fn one() -> f64 {
    1.0
}

fn typed<T: DeserializeOwned>(v: Value, kind: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| anyhow!("body of type \"{kind}\": {e}"))
}

fn polyhedron(rows: Rows, what: &str) -> Result<Polyhedron> {
    if rows.a.len() != rows.b.len() {
        bail!("{what}: field `a` has {} rows but `b` has {} entries", rows.a.len(), rows.b.len());
    }
    if rows.eq_a.len() != rows.eq_b.len() {
        bail!(
            "{what}: field `eq_a` has {} rows but `eq_b` has {} entries",
            rows.eq_a.len(),
            rows.eq_b.len()
        );
    }
    let dim = rows
        .a
        .first()
        .or(rows.eq_a.first())
        .map(|r| r.len())
        .ok_or_else(|| anyhow!("{what}: field `a` is empty"))?;
    let ineq = rows.a.into_iter().zip(rows.b).collect();
    let eq = rows.eq_a.into_iter().zip(rows.eq_b).collect();
    Polyhedron::new(dim, ineq, eq).with_context(|| format!("{what}: field `a`"))
}

fn finish(body: Body, center: Option<Vector>) -> Result<Body> {
    let body = match center {
        Some(c) => body.with_center(c).context("field `center`")?,
        None => body,
    };
    if body.center.iter().any(|x| !x.is_finite()) {
        bail!("field `center`: entries must be finite");
    }
    if !body.origin_interior().context("interior check")? {
        bail!("body has empty interior around its center (not a convex body)");
    }
    Ok(body)
}

fn zoo(spec: ZooSpec) -> Result<Body> {
    let need_d = |what: &str| -> Result<usize> {
        let d = spec.d.ok_or_else(|| anyhow!("zoo \"{what}\": missing field `d`"))?;
        if d == 0 {
            bail!("zoo \"{what}\": field `d` must be positive");
        }
        Ok(d)
    };
    let radius = spec.radius.unwrap_or(1.0);
    if !(radius > 0.0 && radius.is_finite()) {
        bail!("field `radius` must be positive and finite");
    }
    let body = match spec.zoo.as_str() {
        "cube" => bodies::cube(need_d("cube")?),
        "cross" => bodies::cross_polytope(need_d("cross")?),
        "simplex" => bodies::simplex(need_d("simplex")?),
        "ball" => bodies::ball(need_d("ball")?, radius),
        "lpball" => {
            let p = spec.p.ok_or_else(|| anyhow!("zoo \"lpball\": missing field `p`"))?;
            if !(p >= 1.0) {
                bail!("zoo \"lpball\": field `p` must be ≥ 1");
            }
            bodies::lp_ball(need_d("lpball")?, p, radius)
        }
        "tsp" => {
            let n = spec.n.ok_or_else(|| anyhow!("zoo \"tsp\": missing field `n`"))?;
            if !(4..=8).contains(&n) {
                bail!("zoo \"tsp\": field `n` must lie in 4..=8, got {n}");
            }
            bodies::make_tsp(n)?.body
        }
        "cut" => {
            let n = spec.n.ok_or_else(|| anyhow!("zoo \"cut\": missing field `n`"))?;
            if !(2..=6).contains(&n) {
                bail!("zoo \"cut\": field `n` must lie in 2..=6, got {n}");
            }
            cut_body(n, spec.asymmetric)?
        }
        other => bail!(
            "field `zoo`: unknown shorthand \"{other}\" (expected cube, cross, simplex, ball, lpball, tsp, cut)"
        ),
    };
    finish(body, None)
}

/// `CUT_n` in off-diagonal coordinates `(x_ij)_{i<j}`, or `ACUT_n` in all
/// `n²` entries.
fn cut_body(n: usize, asymmetric: bool) -> Result<Body> {
    let verts = bodies::make_cut(n, asymmetric)?;
    let points: Vec<Vector> = verts
        .iter()
        .map(|m| {
            if asymmetric {
                m.as_slice().to_vec()
            } else {
                let mut v = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        v.push(m[(i, j)]);
                    }
                }
                v
            }
        })
        .collect();
    Ok(Body::new(Rep::VRep { points }, true)?)
}

/// Parses and validates a body description.
pub fn parse_body(text: &str) -> Result<Body> {
    let v: Value = serde_json::from_str(text).context("body JSON is malformed")?;
    let obj = v
        .as_object()
        .ok_or_else(|| anyhow!("body JSON must be an object"))?;
    if obj.contains_key("zoo") {
        return zoo(typed(v, "zoo")?);
    }
    let kind = obj
        .get("type")
        .ok_or_else(|| anyhow!("missing field `type` (or `zoo`)"))?
        .as_str()
        .ok_or_else(|| anyhow!("field `type` must be a string"))?
        .to_string();
    match kind.as_str() {
        "vrep" => {
            let s: VrepSpec = typed(v, &kind)?;
            if s.points.is_empty() {
                bail!("field `points` is empty");
            }
            let body = Body::new(Rep::VRep { points: s.points }, s.symmetric)
                .context("field `points`")?;
            let center = s.center.or_else(|| Some(barycenter(body.vertices().unwrap())));
            finish(body, center)
        }
        "hrep" => {
            let s: HrepSpec = typed(v, &kind)?;
            let rows = Rows { a: s.a, b: s.b, eq_a: s.eq_a, eq_b: s.eq_b };
            let p = polyhedron(rows, "hrep")?;
            finish(Body::new(Rep::HRep { polyhedron: p }, s.symmetric)?, s.center)
        }
        "ball" => {
            let s: BallSpec = typed(v, &kind)?;
            if s.dim == 0 {
                bail!("field `dim` must be positive");
            }
            if !(s.radius > 0.0 && s.radius.is_finite()) {
                bail!("field `radius` must be positive and finite");
            }
            finish(bodies::ball(s.dim, s.radius), s.center)
        }
        "ellipsoid" => {
            let s: EllipsoidSpec = typed(v, &kind)?;
            if s.form.len() != s.center.len() {
                bail!(
                    "field `form` has {} rows but `center` has dimension {}",
                    s.form.len(),
                    s.center.len()
                );
            }
            let form = SymMatrix::from_rows(&s.form).context("field `form`")?;
            let e = Ellipsoid::new(s.center, form).context("field `form`")?;
            let mut body = Body::ellipsoid(e);
            body.symmetric = true;
            finish(body, None)
        }
        "projected" => {
            let s: ProjectedSpec = typed(v, &kind)?;
            let p = polyhedron(s.polytope, "field `polytope`")?;
            let map = Matrix::from_rows(&s.map).context("field `map`")?;
            if map.cols() != p.dim {
                bail!("field `map` has {} columns but the polytope has dimension {}", map.cols(), p.dim);
            }
            let offset = s.offset.unwrap_or_else(|| vec![0.0; map.rows()]);
            let rep = Rep::Projected { polytope: p, map, offset };
            finish(Body::new(rep, s.symmetric).context("field `offset`")?, s.center)
        }
        "sectioned" => {
            let s: SectionedSpec = typed(v, &kind)?;
            if s.points.is_empty() {
                bail!("field `points` is empty");
            }
            if s.basis.is_empty() {
                bail!("field `basis` is empty");
            }
            let basis = Matrix::from_cols(&s.basis).context("field `basis`")?;
            let offset = s.offset.unwrap_or_else(|| vec![0.0; basis.rows()]);
            let rep = Rep::Sectioned { points: s.points, basis, offset };
            finish(Body::new(rep, s.symmetric).context("field `basis`")?, s.center)
        }
        other => bail!(
            "field `type`: unknown body type \"{other}\" (expected vrep, hrep, ball, ellipsoid, projected, sectioned)"
        ),
    }
}

fn barycenter(points: &[Vector]) -> Vector {
    let d = points[0].len();
    let mut c = vec![0.0; d];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi / points.len() as f64;
        }
    }
    c
}

/// Reads a body from inline JSON or, failing that, from a file path.
pub fn load_body(arg: &str) -> Result<Body> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        parse_body(arg)
    } else {
        let text = std::fs::read_to_string(arg).with_context(|| format!("cannot read body file {arg}"))?;
        parse_body(&text).with_context(|| format!("in body file {arg}"))
    }
}
