use convex_approx::bodies::*;
use convex_approx::ellipsoid::{john_inner_symmetric, loewner_mvee};
use convex_approx::numerics::{sample_unit_sphere, Seed, Vector};
use proptest::prelude::*;

/// Random polytope with the origin inside: ±e_i plus extra points.
fn polytope(extra: &[Vec<f64>], d: usize) -> Vec<Vector> {
    let mut pts: Vec<Vector> = cross_polytope(d).vertices().unwrap().to_vec();
    pts.iter_mut().for_each(|p| p.iter_mut().for_each(|x| *x *= 0.5));
    pts.extend(extra.iter().map(|p| p[..d].to_vec()));
    pts
}

#[test]
fn pentagon_double_polar() {
    let pent: Vec<Vector> = (0..5)
        .map(|k| {
            let t = 0.3 + k as f64 * 2.0 * std::f64::consts::PI / 5.0;
            vec![t.cos() + 0.1, 0.8 * t.sin()]
        })
        .collect();
    let b = Body::vrep(pent).unwrap();
    let pp = polar_polytope(&polar_polytope(&b).unwrap()).unwrap();
    for k in 0..360 {
        let th = (k as f64).to_radians();
        let u = [th.cos(), th.sin()];
        assert!((pp.support(&u).unwrap() - b.support(&u).unwrap()).abs() <= 1e-9);
    }
}

#[test]
fn john_factor_bound_for_symmetric_polytopes() {
    let eps = 1e-7;
    for d in 2..=4 {
        {
            let body = cross_polytope(d);
            let e = john_inner_symmetric(&body, eps).unwrap();
            let c = certify_sandwich(&Body::ellipsoid(e), &body, 200, Seed(9), 1e-9).unwrap();
            assert!(c.inner_valid);
            assert!(c.alpha <= (d as f64).sqrt() * (1.0 + 10.0 * eps), "d={d}: {}", c.alpha);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gauge_support_duality(
        extra in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 5), 0..6),
        d in 2usize..=5,
        v in prop::collection::vec(-3.0f64..3.0, 5),
    ) {
        let b = Body::vrep(polytope(&extra, d)).unwrap();
        let polar = polar_polytope(&b).unwrap();
        let v = &v[..d];
        let g = b.gauge(v).unwrap();
        let h = polar.support(v).unwrap();
        prop_assert!((g - h).abs() <= 1e-8 * (1.0 + g));
        // and the H-side closed form against the LP
        let g2 = polar_polytope(&polar).unwrap().gauge(v).unwrap();
        prop_assert!((g - g2).abs() <= 1e-8 * (1.0 + g));
    }

    #[test]
    fn gauge_homogeneous_and_matches_bisection(
        extra in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 3), 0..6),
        v in prop::collection::vec(-3.0f64..3.0, 3),
        t in 0.01f64..100.0,
    ) {
        let b = Body::vrep(polytope(&extra, 3)).unwrap();
        let g = b.gauge(&v).unwrap();
        let tv: Vector = v.iter().map(|x| t * x).collect();
        prop_assert!((b.gauge(&tv).unwrap() - t * g).abs() <= 1e-9 * (1.0 + t * g));
        let gb = b.gauge_bisect(&v, 1e-11).unwrap();
        prop_assert!((gb - g).abs() <= 1e-8 * (1.0 + g));
    }

    #[test]
    fn symmetric_bodies_have_even_gauge(v in prop::collection::vec(-3.0f64..3.0, 4), p in 1.0f64..6.0) {
        let neg: Vector = v.iter().map(|x| -x).collect();
        for b in [cube(4), cross_polytope(4), ball(4, 2.0), lp_ball(4, p, 1.0)] {
            prop_assert!(b.symmetric);
            prop_assert!((b.gauge(&v).unwrap() - b.gauge(&neg).unwrap()).abs() <= 1e-9);
            let mid: Vector = v.iter().map(|x| x / (1.0 + b.gauge(&v).unwrap())).collect();
            let mneg: Vector = mid.iter().map(|x| -x).collect();
            prop_assert_eq!(b.contains(&mid, 0.0).unwrap(), b.contains(&mneg, 0.0).unwrap());
        }
    }

    #[test]
    fn doubling_outer_body_doubles_alpha(
        extra in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 0..5),
    ) {
        let x = Body::vrep(polytope(&extra, 3)).unwrap();
        let b = cube(3).scaled(1.5).unwrap();
        let a1 = certify_sandwich(&x, &b, 64, Seed(1), 1e-9).unwrap().alpha;
        let a2 = certify_sandwich(&x, &b.scaled(2.0).unwrap(), 64, Seed(1), 1e-9).unwrap().alpha;
        prop_assert!((a2 - 2.0 * a1).abs() <= 1e-8 * a2);
    }

    #[test]
    fn mvee_contains_all_points(
        pts in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 3), 6..20),
    ) {
        let r = match loewner_mvee(&pts, 1e-7) {
            Ok(r) => r,
            Err(_) => return Ok(()), // degenerate spans are rejected
        };
        for p in &pts {
            prop_assert!(r.ellipsoid.value(p) <= 1.0 + 1e-7);
        }
        prop_assert!(r.gap <= 1e-7);
    }
}

#[test]
fn sampled_ratio_never_exceeds_alpha() {
    let x = Body::vrep(polytope(&[vec![0.9, 0.9, 0.2]], 3)).unwrap();
    let b = ball(3, 1.0);
    let c = certify_sandwich(&x, &b, 300, Seed(4), 1e-9).unwrap();
    for u in sample_unit_sphere(3, 300, Seed(4)) {
        assert!(b.support(&u).unwrap() / x.support(&u).unwrap() <= c.alpha + 1e-12);
    }
}
