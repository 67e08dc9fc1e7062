mod common;

use nalgebra::DVector;
use proptest::prelude::*;
use tomoslice::bodies::random::{random_ellipsoid, random_simplex};
use tomoslice::bodies::{random_direction, sample_directions, seeded_rng, Body, Ellipsoid, Polytope};
use tomoslice::radon::{fit_homogeneous, moment, range_test, DEFAULT_QUAD_ORDER};

#[test]
fn oracle_self_checks() {
    assert!((common::ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-15);
    assert!((common::ball_volume(2) - std::f64::consts::PI).abs() < 1e-15);
    assert!((common::beta_moment(0.5, 0) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    // ∫(1 − s²) s² ds = 4/15
    assert!((common::beta_moment(1.0, 1) - 4.0 / 15.0).abs() < 1e-15);
}

#[test]
fn ellipsoid_moments_match_closed_form() {
    let mut rng = seeded_rng(31);
    for n in 2..=5 {
        for _ in 0..5 {
            let e = random_ellipsoid(n, &mut rng);
            let body: Body = e.clone().into();
            let xi = random_direction(n, &mut rng);
            for k in 0..=2 {
                let got = moment(&body, &xi, k, DEFAULT_QUAD_ORDER).unwrap();
                let want = common::ellipsoid_moment(&e, &xi, k);
                assert!((got - want).abs() < 1e-11 * want.abs().max(1.0), "n={n} k={k}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn zeroth_moment_is_volume_in_every_direction() {
    let mut rng = seeded_rng(32);
    for n in 2..=4 {
        let e = random_ellipsoid(n, &mut rng);
        let body: Body = e.clone().into();
        let vol = common::ball_volume(n) / e.shape().determinant().sqrt();
        for xi in sample_directions(n, 40, 9) {
            let m0 = moment(&body, &xi, 0, DEFAULT_QUAD_ORDER).unwrap();
            assert!((m0 - vol).abs() < 1e-12 * vol);
        }
    }
    let cube: Body = Polytope::cube(3, 1.0).unwrap().into();
    for xi in sample_directions(3, 40, 9) {
        assert!((moment(&cube, &xi, 0, DEFAULT_QUAD_ORDER).unwrap() - 8.0).abs() < 1e-11);
    }
}

#[test]
fn second_moment_fit_recovers_the_oracle_form() {
    // M₂(ξ) = ξᵀ Σ ξ with Σ read off the closed-form oracle along axis pairs
    let mut rng = seeded_rng(33);
    let e = random_ellipsoid(3, &mut rng);
    let body: Body = e.clone().into();
    let report = range_test(&body, 2, 40, 7, DEFAULT_QUAD_ORDER).unwrap();
    assert!(report.relative_residual < 1e-8);
    let fit = fit_homogeneous(&report.directions, &report.moments, 2).unwrap();
    for xi in sample_directions(3, 10, 77) {
        let predicted: f64 = fit
            .exponents
            .iter()
            .zip(&fit.coefficients)
            .map(|(ex, c)| c * ex.iter().enumerate().map(|(i, &p)| xi[i].powi(p as i32)).product::<f64>())
            .sum();
        let oracle = common::ellipsoid_moment(&e, &xi, 2);
        assert!((predicted - oracle).abs() < 1e-9 * oracle.abs().max(1.0));
    }
}

#[test]
fn polytope_moments_pass_range_test() {
    let mut rng = seeded_rng(34);
    let simplex: Body = random_simplex(3, &mut rng).into();
    for k in 0..=2 {
        let r = range_test(&simplex, k, 60, 3, DEFAULT_QUAD_ORDER).unwrap();
        assert!(r.relative_residual < 1e-6, "k={k}: {}", r.relative_residual);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_parity(seed in 0u64..10_000, k in 0usize..=4) {
        let mut rng = seeded_rng(seed);
        let body: Body = if seed % 2 == 0 {
            random_ellipsoid(3, &mut rng).into()
        } else {
            random_simplex(3, &mut rng).into()
        };
        let xi = random_direction(3, &mut rng);
        let a = moment(&body, &xi, k, DEFAULT_QUAD_ORDER).unwrap();
        let b = moment(&body, &xi.neg(), k, DEFAULT_QUAD_ORDER).unwrap();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() < 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn first_moment_is_volume_times_centroid(seed in 0u64..10_000) {
        let mut rng = seeded_rng(seed);
        let shift = DVector::from_fn(2, |i, _| (seed as f64 * 0.37 + i as f64).sin());
        let e: Ellipsoid = random_ellipsoid(2, &mut rng).translated(&shift);
        let body: Body = e.clone().into();
        let xi = random_direction(2, &mut rng);
        let m0 = moment(&body, &xi, 0, DEFAULT_QUAD_ORDER).unwrap();
        let m1 = moment(&body, &xi, 1, DEFAULT_QUAD_ORDER).unwrap();
        prop_assert!((m1 - m0 * e.center().dot(xi.as_vector())).abs() < 1e-11 * m0);
    }
}
