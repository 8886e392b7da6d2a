use convex_approx::bodies::{ball, cube, sample_uniform};
use convex_approx::lp::Polyhedron;
use convex_approx::numerics::{binomial, sample_unit_sphere, Matrix, Seed};
use convex_approx::softapprox::*;
use proptest::prelude::*;

fn scalar_f(k: usize, t: f64) -> f64 {
    1.0 - (1.0 - t / k as f64).powi(k as i32)
}

#[test]
fn zero_functional() {
    let sp = build_soft(&Polyhedron::cube(2), &Matrix::identity(2), 3).unwrap();
    let a = approximant(&sp, &[0.0, 0.0], &cube(2), 200, Seed(1)).unwrap();
    assert!(a.weights.iter().all(|&w| w == 0.0));
    assert_eq!(a.max_error, 0.0);
    let d = accept_test(&sp, &[0.0, 0.0], 0.1, &cube(2), 200, Seed(1)).unwrap();
    assert_eq!(d.verdict, Verdict::Accept);
    assert_eq!(d.distance, 0.0);
}

#[test]
fn scalar_model_k2() {
    let sp = build_soft(&Polyhedron::cube(1), &Matrix::identity(1), 2).unwrap();
    let a = approximant(&sp, &[1.0], &cube(1), 500, Seed(2)).unwrap();
    for j in 0..=40 {
        let t = -1.0 + 0.05 * j as f64;
        let h: f64 = a.weights.iter().zip(sp.eval_generators(&[t], 0).unwrap()).map(|(w, v)| w * v).sum();
        assert!((h - (t - t * t / 4.0)).abs() < 1e-12, "t={t}: {h}");
    }
    assert!((a.error_ratio - 0.25).abs() < 1e-9);
}

#[test]
fn scalar_worst_case_at_minus_one() {
    let oracle_max = |k: usize| {
        (1..=2000)
            .map(|j| -1.0 + 2.0 * j as f64 / 2001.0)
            .map(|t: f64| (t - scalar_f(k, t)).abs() / (t * t))
            .fold(0.0f64, f64::max)
    };
    for k in 2..=10 {
        let worst = (1.0 + 1.0 / k as f64).powi(k as i32) - 2.0;
        assert!(worst <= std::f64::consts::E - 2.0);
        assert!(oracle_max(k) <= worst + 1e-7);
        assert!(((-1.0 - scalar_f(k, -1.0)).abs() - worst).abs() < 1e-12);
        let sp = build_soft(&Polyhedron::cube(1), &Matrix::identity(1), k).unwrap();
        let a = approximant(&sp, &[1.0], &cube(1), 300, Seed(k as u64)).unwrap();
        assert!(a.error_ratio <= worst + 1e-9);
    }
}

#[test]
fn cube_facet_multiple_is_rejected() {
    let sp = build_soft(&Polyhedron::cube(2), &Matrix::identity(2), 3).unwrap();
    let d = accept_test(&sp, &[3.0, 0.0], 0.1, &cube(2), 400, Seed(3)).unwrap();
    assert_eq!(d.verdict, Verdict::Reject);
    assert!(d.distance > d.threshold);
}

#[test]
fn small_functionals_are_accepted() {
    let eps = 0.1;
    let sp = build_soft(&Polyhedron::cube(2), &Matrix::identity(2), 3).unwrap();
    for u in sample_unit_sphere(2, 20, Seed(4)) {
        // ε·B° for the square is ε times the cross polytope
        let l1 = u[0].abs() + u[1].abs();
        let ell = [eps * u[0] / l1, eps * u[1] / l1];
        let d = accept_test(&sp, &ell, eps, &cube(2), 300, Seed(5)).unwrap();
        assert_eq!(d.verdict, Verdict::Accept, "{ell:?}: {} > {}", d.distance, d.threshold);
        assert!(d.witness.iter().all(|&w| w >= 0.0));
        assert!(d.witness.iter().sum::<f64>() <= 1.0 + 1e-12);
    }
}

#[test]
fn quadratic_error_shrinks_with_eps() {
    let sp = build_soft(&Polyhedron::cube(3), &Matrix::identity(3), default_k(3)).unwrap();
    for eps in [0.5, 0.25, 0.1] {
        for u in sample_unit_sphere(3, 10, Seed(6)) {
            let l1: f64 = u.iter().map(|x| x.abs()).sum();
            let ell: Vec<f64> = u.iter().map(|x| eps * x / l1).collect();
            let a = approximant(&sp, &ell, &cube(3), 300, Seed(7)).unwrap();
            assert!(a.max_error <= eps * eps + 1e-12, "eps={eps}: {}", a.max_error);
        }
    }
}

#[test]
fn generators_bounded_on_body() {
    let t = Matrix::from_rows(&[vec![1.6, -1.2], vec![1.2, 1.6]]).unwrap();
    let sp = build_soft(&Polyhedron::cube(2), &t, 4).unwrap();
    // the unit disc lies inside T(cube) since T scales by 2
    let mut worst = f64::MIN;
    for (i, x) in sample_uniform(&ball(2, 1.0), 1000, Seed(8)).unwrap().iter().enumerate() {
        worst = worst.max(sp.eval_generators(x, i as u64).unwrap().into_iter().fold(f64::MIN, f64::max));
    }
    assert!(worst <= 1.0 + 1e-9);
}

#[test]
fn fiber_mode_over_bn_base() {
    let (p, t) = bn_soft_base(2, 4).unwrap();
    let sp = build_soft_fiber(&p, &t, 2, 30, Seed(9)).unwrap();
    for (i, x) in sample_uniform(&ball(2, 1.0), 50, Seed(10)).unwrap().iter().enumerate() {
        let h = sp.eval_generators(x, i as u64).unwrap();
        assert!(h.iter().all(|&v| v <= 1.0 + 1e-9));
    }
    let a = approximant(&sp, &[0.6, -0.8], &ball(2, 1.0), 40, Seed(11)).unwrap();
    assert!(a.error_ratio <= GAMMA);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generator_count_formula(d in 1usize..4, k in 1usize..5) {
        let sp = build_soft(&Polyhedron::cube(d), &Matrix::identity(d), k).unwrap();
        let n = 2 * d;
        let total = binomial((n + k) as u64, k as u64);
        prop_assert_eq!(sp.generators.len() as f64 + 1.0, total);
        prop_assert!(total <= ((n + 1) as f64).powi(k as i32));
    }

    #[test]
    fn frank_wolfe_is_monotone(a in -2.0f64..2.0, b in -2.0f64..2.0, eps in 0.05f64..0.9) {
        let sp = build_soft(&Polyhedron::cube(2), &Matrix::identity(2), 2).unwrap();
        let d = accept_test(&sp, &[a, b], eps, &cube(2), 150, Seed(12)).unwrap();
        for w in d.history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        if d.verdict == Verdict::Accept {
            prop_assert!(d.distance <= d.threshold);
        }
    }
}
