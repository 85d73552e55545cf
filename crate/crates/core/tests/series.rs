mod common;

use bifree::contour::{contour_radius, moments_from_cauchy, DEFAULT_NODES};
use bifree::oracle::{oracle_band_moments, OraclePair};
use bifree::series::{
    bifree_convolve_moments, cfree_r, free_convolve_moments, moments_from_r, partial_bifree_r,
    r_from_moments,
};
use bifree::{cfree_eval, CPair1D, Measure1D, PlanarMeasure, Series1, SolverConfig};
use common::*;
use proptest::prelude::*;

#[test]
fn reversion_of_z_plus_z_squared() {
    let s = Series1::new(vec![0.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
    let r = s.reversion().unwrap();
    assert_eq!(r.coeffs(), &[0.0, 1.0, -1.0, 2.0, -5.0, 14.0]);
}

#[test]
fn classical_r_transforms() {
    let r = r_from_moments(&bernoulli().moments(10), 8).unwrap();
    let expected = [0.0, 1.0, 0.0, -1.0, 0.0, 2.0, 0.0, -5.0, 0.0];
    assert!(max_abs_diff(r.coeffs(), &expected) < 1e-12);
    let sc = Measure1D::semicircle(0.0, 1.0, 20).unwrap();
    let r = r_from_moments(&sc.moments(12), 10).unwrap();
    let mut expected = vec![0.0; 11];
    expected[1] = 1.0;
    assert!(max_abs_diff(r.coeffs(), &expected) < 1e-12);
}

#[test]
fn product_partial_r_is_the_sum_of_marginal_parts() {
    let mu = Measure1D::atomic(&[(0.0, 0.4), (1.0, 0.6)]).unwrap();
    let nu = Measure1D::atomic(&[(-1.0, 0.5), (2.0, 0.5)]).unwrap();
    let order = 5;
    let r = partial_bifree_r(
        &PlanarMeasure::product(&mu, &nu)
            .unwrap()
            .mixed_moments(order),
        order,
    )
    .unwrap();
    let rmu = r_from_moments(&mu.moments(order + 1), order - 1).unwrap();
    let rnu = r_from_moments(&nu.moments(order + 1), order - 1).unwrap();
    for i in 0..=order {
        for j in 0..=order {
            let expected = match (i, j) {
                (0, 0) => 0.0,
                (i, 0) => rmu.coeff(i - 1),
                (0, j) => rnu.coeff(j - 1),
                _ => 0.0,
            };
            assert!((r.get(i, j) - expected).abs() < 1e-12, "({i}, {j})");
        }
    }
}

#[test]
fn example_mixed_moment_matches_oracle() {
    let eta = example();
    let m = bifree_convolve_moments(&eta.mixed_moments(3), &eta.mixed_moments(3), 3).unwrap();
    let pair = OraclePair::try_from(&eta).unwrap();
    let band = oracle_band_moments(&[pair.clone(), pair], 2, 8).unwrap();
    assert!((m.get(1, 1) - band[1][1]).abs() < 1e-12);
    // φ((a₁+a₂)(b₁+b₂)) = 2·¾ + 2·(⅞·¾).
    assert!((band[1][1] - (1.5 + 2.0 * 0.875 * 0.75)).abs() < 1e-15);
}

#[test]
fn one_variable_additivity_against_the_transform() {
    let mu1 = Measure1D::atomic(&[(-1.0, 0.3), (0.5, 0.5), (1.5, 0.2)]).unwrap();
    let mu2 = Measure1D::atomic(&[(0.0, 0.6), (1.0, 0.4)]).unwrap();
    let ev =
        bifree::FreeConvEvaluator::new(mu1.clone(), mu2.clone(), SolverConfig::default()).unwrap();
    let m = moments_from_cauchy(
        |z| ev.eval(z),
        contour_radius(ev.support_radius()),
        9,
        DEFAULT_NODES,
    )
    .unwrap();
    let r =
        &r_from_moments(&mu1.moments(9), 7).unwrap() + &r_from_moments(&mu2.moments(9), 7).unwrap();
    assert!(
        max_rel_diff(
            &r_from_moments(&m, 7).unwrap().coeffs().to_vec(),
            r.coeffs()
        ) < 1e-6
    );
}

#[test]
fn cfree_r_with_trivial_psi_distribution() {
    // K_{δ₀}(z) = 1/z, so R^c(z) = 1/z - F_σ(1/z).
    let sigma = Measure1D::atomic(&[(-1.0, 0.2), (0.5, 0.5), (2.0, 0.3)]).unwrap();
    let rc = cfree_r(&sigma.moments(12), &Measure1D::dirac(0.0).moments(12), 10).unwrap();
    let z = 0.05;
    let exact = 1.0 / z - sigma.reciprocal_cauchy(c(1.0 / z, 0.0)).unwrap().re;
    assert!((rc.eval(&z) - exact).abs() < 1e-10);
}

#[test]
fn cfree_additivity_against_the_transform() {
    let cfg = SolverConfig::default();
    let p1 = CPair1D {
        sigma: Measure1D::atomic(&[(-1.0, 0.3), (0.5, 0.7)]).unwrap(),
        mu: Measure1D::atomic(&[(0.0, 0.4), (1.0, 0.6)]).unwrap(),
    };
    let p2 = CPair1D {
        sigma: Measure1D::atomic(&[(0.2, 0.5), (1.2, 0.5)]).unwrap(),
        mu: Measure1D::atomic(&[(-0.5, 0.5), (0.5, 0.5)]).unwrap(),
    };
    let order = 5;
    let radius = contour_radius(4.0);
    let sigma = moments_from_cauchy(
        |z| Ok(cfree_eval(&p1, &p2, z, &cfg)?.0),
        radius,
        order + 1,
        DEFAULT_NODES,
    )
    .unwrap();
    let mu = moments_from_cauchy(
        |z| Ok(cfree_eval(&p1, &p2, z, &cfg)?.1),
        radius,
        order + 1,
        DEFAULT_NODES,
    )
    .unwrap();
    let rc = cfree_r(&sigma, &mu, order).unwrap();
    let n = order + 1;
    let sum = &cfree_r(&p1.sigma.moments(n), &p1.mu.moments(n), order).unwrap()
        + &cfree_r(&p2.sigma.moments(n), &p2.mu.moments(n), order).unwrap();
    assert!(max_rel_diff(rc.coeffs(), sum.coeffs()) < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moment_round_trip(mu in measure1d()) {
        let m = mu.moments(11);
        let back = moments_from_r(&r_from_moments(&m, 9).unwrap()).unwrap();
        prop_assert!(max_rel_diff(&back, &m) < 1e-12);
    }

    #[test]
    fn free_convolution_is_commutative(a in measure1d(), b in measure1d()) {
        let ab = free_convolve_moments(&a.moments(9), &b.moments(9), 8).unwrap();
        let ba = free_convolve_moments(&b.moments(9), &a.moments(9), 8).unwrap();
        prop_assert!(max_rel_diff(&ab, &ba) < 1e-12);
    }

    #[test]
    fn partial_r_is_additive(eta1 in planar(), eta2 in planar()) {
        let order = 5;
        let m = bifree_convolve_moments(&eta1.mixed_moments(order), &eta2.mixed_moments(order), order)
            .unwrap();
        let r = partial_bifree_r(&m, order).unwrap();
        let sum = &partial_bifree_r(&eta1.mixed_moments(order), order).unwrap()
            + &partial_bifree_r(&eta2.mixed_moments(order), order).unwrap();
        // The coefficients come out of cancellations among the moments, so
        // the tolerance is relative to the largest convolved moment.
        let scale = m.rows().iter().flatten().fold(1.0f64, |acc, v| acc.max(v.abs()));
        for (row, srow) in r.rows().iter().zip(sum.rows()) {
            for (a, b) in row.iter().zip(srow) {
                prop_assert!((a - b).abs() < 1e-12 * scale, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn marginals_of_the_convolution_are_free_convolutions(eta1 in planar(), eta2 in planar()) {
        let order = 6;
        let m = bifree_convolve_moments(&eta1.mixed_moments(order), &eta2.mixed_moments(order), order)
            .unwrap();
        let (mu1, nu1) = eta1.marginals();
        let (mu2, nu2) = eta2.marginals();
        let first = free_convolve_moments(&mu1.moments(order + 1), &mu2.moments(order + 1), order).unwrap();
        let second = free_convolve_moments(&nu1.moments(order + 1), &nu2.moments(order + 1), order).unwrap();
        prop_assert!(max_rel_diff(&m.first_marginal(), &first[..=order]) < 1e-12);
        prop_assert!(max_rel_diff(&m.second_marginal(), &second[..=order]) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn series_route_agrees_with_the_oracle(eta1 in planar(), eta2 in planar()) {
        let degree = 6;
        let m = bifree_convolve_moments(&eta1.mixed_moments(degree), &eta2.mixed_moments(degree), degree)
            .unwrap();
        let pairs = [OraclePair::try_from(&eta1).unwrap(), OraclePair::try_from(&eta2).unwrap()];
        let band = oracle_band_moments(&pairs, degree, degree).unwrap();
        for (i, row) in band.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                prop_assert!((m.get(i, k) - v).abs() < 1e-10 * v.abs().max(1.0));
            }
        }
    }
}
