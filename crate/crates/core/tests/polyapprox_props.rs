use convex_approx::bodies::{ball, cross_polytope, cube, Body, Ellipsoid, Rep};
use convex_approx::lp::Polyhedron;
use convex_approx::numerics::{sample_unit_sphere, unit, Matrix, Seed, Vector};
use convex_approx::polyapprox::*;
use proptest::prelude::*;

fn assert_same_support(a: &Body, b: &Body, n: usize, tol: f64) {
    for u in sample_unit_sphere(a.dim(), n, Seed(77)) {
        let (ha, hb) = (a.support(&u).unwrap(), b.support(&u).unwrap());
        assert!((ha - hb).abs() <= tol * (1.0 + ha.abs()), "u={u:?}: {ha} vs {hb}");
    }
}

fn projected(p: Polyhedron, map: Matrix) -> Body {
    let k = map.rows();
    Body {
        rep: Rep::Projected {
            polytope: p,
            map,
            offset: vec![0.0; k],
        },
        symmetric: false,
        center: vec![0.0; k],
    }
}

#[test]
fn cross_polytope_section_to_projection() {
    // O₂ as the section z = 1 of conv((±1,0,1), (0,±1,1))
    let pts = vec![
        vec![1.0, 0.0, 1.0],
        vec![-1.0, 0.0, 1.0],
        vec![0.0, 1.0, 1.0],
        vec![0.0, -1.0, 1.0],
    ];
    let sect = Body {
        rep: Rep::Sectioned {
            points: pts,
            basis: Matrix::from_cols(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap(),
            offset: vec![0.0, 0.0, 1.0],
        },
        symmetric: true,
        center: vec![0.0, 0.0],
    };
    let proj = convert_rep(&sect).unwrap();
    let Rep::Projected { polytope, .. } = &proj.rep else { panic!() };
    assert_eq!(polytope.ineq.len(), 4);
    let o2 = cross_polytope(2);
    for k in 0..360 {
        let th = (k as f64).to_radians();
        let u = [th.cos(), th.sin()];
        let h = o2.support(&u).unwrap();
        assert!((proj.support(&u).unwrap() - h).abs() < 1e-9);
        assert!((sect.support(&u).unwrap() - h).abs() < 1e-9);
    }
}

#[test]
fn cube_round_trip() {
    let cubeproj = projected(Polyhedron::cube(3), Matrix::identity(3));
    let sect = convert_rep(&cubeproj).unwrap();
    let Rep::Sectioned { points, .. } = &sect.rep else { panic!() };
    assert!(points.len() <= 6);
    assert_same_support(&cubeproj, &sect, 500, 1e-7);
    let back = convert_rep(&sect).unwrap();
    assert_same_support(&cubeproj, &back, 500, 1e-7);
}

#[test]
fn segment_from_triangle() {
    // triangle x ≥ −1, y ≥ −1, x + y ≤ 1 projected to the first axis: [−1, 2]
    let tri = Polyhedron::new(
        2,
        vec![(vec![-1.0, 0.0], 1.0), (vec![0.0, -1.0], 1.0), (vec![1.0, 1.0], 1.0)],
        vec![],
    )
    .unwrap();
    let q = projected(tri, Matrix::from_rows(&[vec![1.0, 0.0]]).unwrap());
    let s = convert_rep(&q).unwrap();
    let Rep::Sectioned { points, .. } = &s.rep else { panic!() };
    assert!(points.len() <= 3);
    assert!((s.support(&[1.0]).unwrap() - 2.0).abs() < 1e-9);
    assert!((s.support(&[-1.0]).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn disc_net() {
    let disc = Body {
        symmetric: true,
        ..Body::ellipsoid(Ellipsoid::ball(vec![0.0, 0.0], 1.0))
    };
    let r = greedy_net(&disc, 0.25, 4000, 4000, Seed(5)).unwrap();
    assert!(r.points.len() <= 81);
    // angular-grid oracle for the factor of the inscribed polygon
    let mut worst = 0.0f64;
    let hull = Body::vrep(r.points.clone()).unwrap();
    for k in 0..3600 {
        let th = (k as f64 * 0.1).to_radians();
        worst = worst.max(1.0 / hull.support(&[th.cos(), th.sin()]).unwrap());
    }
    assert!(r.cert.alpha <= 4.0 / 3.0 + 1e-3);
    assert!(r.cert.alpha >= worst - 1e-9);
    assert!(r.points.len() as f64 >= ball_net_lower_bound(2, r.cert.alpha));
}

#[test]
fn ball_nets_respect_volume_bound() {
    for d in 2..=4 {
        let b = ball(d, 1.0);
        let r = greedy_net(&b, 0.5, 3000, 3000, Seed(d as u64)).unwrap();
        assert!(r.points.len() as f64 <= net_size_bound(d, 0.5));
        assert!(r.points.len() as f64 >= ball_net_lower_bound(d, r.cert.alpha));
    }
}

#[test]
fn product_of_intervals() {
    let interval = projected(
        Polyhedron::new(1, vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)], vec![]).unwrap(),
        Matrix::identity(1),
    );
    let sq = combine(&interval, &interval, CombineMode::Product).unwrap();
    let Rep::Projected { polytope, .. } = &sq.rep else { panic!() };
    assert_eq!(polytope.ineq.len(), 4);
    assert_same_support(&sq, &cube(2), 100, 1e-9);
}

#[test]
fn self_intersection_is_idempotent() {
    let q = convert_rep(&Body {
        rep: Rep::Sectioned {
            points: cross_polytope(3).vertices().unwrap().to_vec(),
            basis: Matrix::from_cols(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0]]).unwrap(),
            offset: vec![0.0; 3],
        },
        symmetric: true,
        center: vec![0.0; 2],
    })
    .unwrap();
    let qq = combine(&q, &q, CombineMode::Intersect).unwrap();
    for k in 0..100 {
        let x = [-1.2 + 0.024 * k as f64, 0.7 - 0.013 * k as f64];
        assert_eq!(qq.contains(&x, 1e-9).unwrap(), q.contains(&x, 1e-9).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_projection_round_trip(
        rows in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 5..9),
        map in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 2),
    ) {
        // random 3-D polytope (bounded by a cube) projected to the plane
        let mut ineq: Vec<(Vector, f64)> = Polyhedron::cube(3).ineq;
        ineq.extend(rows.into_iter().map(|r| (r, 0.8)));
        let t = Matrix::from_rows(&map).unwrap();
        prop_assume!(t.rank(1e-3) == 2);
        let q = projected(Polyhedron::new(3, ineq, vec![]).unwrap(), t);
        let s = convert_rep(&q).unwrap();
        for u in sample_unit_sphere(2, 500, Seed(3)) {
            let (a, b) = (q.support(&u).unwrap(), s.support(&u).unwrap());
            prop_assert!((a - b).abs() <= 1e-7 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn type2_scale_invariant(
        vs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 1..5),
        t in 0.1f64..10.0,
    ) {
        prop_assume!(vs.iter().all(|v| v.iter().any(|x| x.abs() > 1e-3)));
        for body in [cube(3), cross_polytope(3), ball(3, 1.0)] {
            let a = type2_lower(&body, &vs, Type2Mode::Exact).unwrap();
            let b = type2_lower(&body.scaled(t).unwrap(), &vs, Type2Mode::Exact).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
        }
    }

    #[test]
    fn larger_families_accept_more(c in prop::collection::vec(-1.5f64..1.5, 2)) {
        let x: Vec<Vector> = (0..2).flat_map(|i| [unit(2, i), unit(2, i).iter().map(|v| -v).collect()]).collect();
        let small = LiftFamily::singletons(x.clone()).unwrap();
        let mut fam = small.family.clone();
        fam.extend(LiftFamily::pairs(x.clone()).unwrap().family);
        let big = LiftFamily::new(x, fam).unwrap();
        if lift_member(&c, 1.0, &small, 1e-9).unwrap() {
            prop_assert!(lift_member(&c, 1.0, &big, 1e-9).unwrap());
        }
    }
}
