mod common;

use bifree::contour::{
    contour_radius, mixed_moments_from_cauchy, moments_from_cauchy, DEFAULT_NODES,
};
use bifree::series::{bifree_convolve_moments, free_power_moments, semigroup_moments};
use bifree::{
    atom_evolution, semigroup_eval, semigroup_marginal_eval, Measure1D, PlanarMeasure,
    SemigroupState, SolverConfig,
};
use common::*;
use proptest::prelude::*;

#[test]
fn point_masses_scale() {
    let cfg = SolverConfig::default();
    let (a, b) = (0.7, -1.2);
    for t in [1.0, 1.5, 4.0] {
        let s = SemigroupState::new(PlanarMeasure::dirac(a, b), t).unwrap();
        let (z, w) = (c(0.3, 0.8), c(-2.0, 0.1));
        let g = semigroup_eval(&s, z, w, &cfg).unwrap();
        assert!((g - ((z - t * a) * (w - t * b)).inv()).norm() < 1e-12);
        let g = semigroup_marginal_eval(&Measure1D::dirac(a), t, z, &cfg).unwrap();
        assert!((g - (z - t * a).inv()).norm() < 1e-12);
    }
}

#[test]
fn semigroup_law_on_moments() {
    let order = 4;
    let m = example().mixed_moments(order);
    for (s, t) in [(1.0, 1.0), (1.0, 1.5), (1.5, 1.5)] {
        let direct = semigroup_moments(&m, s + t, order).unwrap();
        let split = bifree_convolve_moments(
            &semigroup_moments(&m, s, order).unwrap(),
            &semigroup_moments(&m, t, order).unwrap(),
            order,
        )
        .unwrap();
        assert!(direct.max_relative_difference(&split) < 1e-8);
    }
}

#[test]
fn transform_moments_match_series() {
    let cfg = SolverConfig::default();
    let order = 4;
    let t = 2.5;
    let eta = example();
    let s = SemigroupState::new(eta.clone(), t).unwrap();
    let r = contour_radius(2.0 * t);
    let m = mixed_moments_from_cauchy(
        |z, w| semigroup_eval(&s, z, w, &cfg),
        (r, r),
        order,
        DEFAULT_NODES,
    )
    .unwrap();
    let expected = semigroup_moments(&eta.mixed_moments(order), t, order).unwrap();
    assert!(m.max_relative_difference(&expected) < 1e-8, "{m:?}");
}

#[test]
fn marginal_evolution_matches_scaled_r() {
    let cfg = SolverConfig::default();
    let mu = Measure1D::atomic(&[(-1.0, 0.25), (0.5, 0.5), (1.0, 0.25)]).unwrap();
    for t in [1.3, 2.0, 3.7] {
        let r = contour_radius(2.0 * t);
        let m = moments_from_cauchy(
            |z| semigroup_marginal_eval(&mu, t, z, &cfg),
            r,
            8,
            DEFAULT_NODES,
        )
        .unwrap();
        let expected = free_power_moments(&mu.moments(9), t, 8).unwrap();
        assert!(max_rel_diff(&m, &expected) < 1e-8, "t = {t}");
    }
}

#[test]
fn atoms_disappear_on_schedule() {
    let count = |t: f64| atom_evolution(&SemigroupState::new(example(), t).unwrap()).len();
    assert_eq!(count(1.1), 3);
    assert_eq!(count(1.2), 2);
    assert_eq!(count(1.34), 1);
    assert_eq!(count(4.0), 0);
}

proptest! {
    #[test]
    fn mass_deficiency(t in 1.000_01..(8.0 / 7.0)) {
        let total: f64 = atom_evolution(&SemigroupState::new(example(), t).unwrap())
            .iter()
            .map(|a| a.0.mass)
            .sum();
        prop_assert!(total < 1.0 - 1e-6, "{total}");
    }

    #[test]
    fn semigroup_maps_upper_to_lower(eta in planar(), t in 1.0..4.0f64, z in upper()) {
        let (mu, _) = eta.marginals();
        let g = semigroup_marginal_eval(&mu, t, z, &SolverConfig::default()).unwrap();
        prop_assert!(g.im < 0.0);
    }
}
