mod common;

use bifree::bifreeconv::{density2d_smoothed, matrix_cauchy_2x2, UpperTriangular2};
use bifree::series::{bifree_convolve_moments, upper_triangular_r};
use bifree::{
    bifree_eval, bound_check, free_eval, pi1, BiFreeEvaluator, ComplexPoint, Measure1D,
    PlanarMeasure, SolverConfig,
};
use common::*;
use proptest::prelude::*;

fn evaluator(a: PlanarMeasure, b: PlanarMeasure) -> BiFreeEvaluator {
    BiFreeEvaluator::new(a, b, SolverConfig::default()).unwrap()
}

#[test]
fn product_inputs_give_product_of_marginal_convolutions() {
    let mu1 = Measure1D::atomic(&[(0.0, 0.4), (1.0, 0.6)]).unwrap();
    let nu1 = Measure1D::atomic(&[(-1.0, 0.5), (2.0, 0.5)]).unwrap();
    let mu2 = Measure1D::atomic(&[(0.5, 0.3), (-0.5, 0.7)]).unwrap();
    let nu2 = Measure1D::atomic(&[(0.0, 0.9), (1.0, 0.1)]).unwrap();
    let ev = evaluator(
        PlanarMeasure::product(&mu1, &nu1).unwrap(),
        PlanarMeasure::product(&mu2, &nu2).unwrap(),
    );
    let (z, w) = (c(0.0, 2.0), c(0.0, 2.0));
    let g = bifree_eval(&ev, z, w).unwrap().0;
    let expected = free_eval(ev.left(), z).unwrap() * free_eval(ev.right(), w).unwrap();
    assert!((g - expected).norm() < 1e-12);
    // The series route agrees: a product of free convolution moments.
    let m = bifree_convolve_moments(
        &PlanarMeasure::product(&mu1, &nu1).unwrap().mixed_moments(4),
        &PlanarMeasure::product(&mu2, &nu2).unwrap().mixed_moments(4),
        4,
    )
    .unwrap();
    for i in 0..=4 {
        for j in 0..=4 {
            assert!((m.get(i, j) - m.get(i, 0) * m.get(0, j)).abs() < 1e-12);
        }
    }
}

#[test]
fn example_self_convolution_far_out_matches_moments() {
    let ev = evaluator(example(), example());
    let m = bifree_convolve_moments(&example().mixed_moments(4), &example().mixed_moments(4), 4)
        .unwrap();
    let y = 1e3;
    let (z, w) = (c(0.0, y), c(0.0, y));
    let g = bifree_eval(&ev, z, w).unwrap().0;
    let mut series = ComplexPoint::new(0.0, 0.0);
    for i in 0..=4 {
        for j in 0..=4 {
            series += m.get(i, j) / (z.powi(i as i32 + 1) * w.powi(j as i32 + 1));
        }
    }
    assert!((g - series).norm() / series.norm() < 1e-4);
}

#[test]
fn pi1_matches_ratio_of_transforms() {
    let eta1 =
        PlanarMeasure::atomic(&[(0.3, -0.4, 0.5), (-0.8, 0.2, 0.3), (1.0, 1.0, 0.2)]).unwrap();
    let eta2 = PlanarMeasure::atomic(&[(0.0, 0.5, 0.6), (0.7, -0.6, 0.4)]).unwrap();
    let ev = evaluator(eta1.clone(), eta2);
    let (z, w) = (c(0.0, 2.0), c(0.0, 2.0));
    let p = pi1(&ev, z, c(1.0, 0.0), w).unwrap();
    let a = ev.left_face(z).unwrap();
    let b = ev.right_face(w).unwrap();
    let g = bifree_eval(&ev, z, w).unwrap().0;
    let g1 = eta1.cauchy(a.omega1, b.omega1).unwrap();
    assert!((p - g / g1).norm() < 1e-9);
}

#[test]
fn bound_examples() {
    let ev = evaluator(example(), example());
    assert!(bound_check(&ev, c(1.0, 1.0), c(1.0, 1.0)).unwrap() >= 0.0);
    let mu = Measure1D::atomic(&[(0.0, 0.5), (1.0, 0.5)]).unwrap();
    let nu = Measure1D::atomic(&[(-1.0, 0.25), (1.0, 0.75)]).unwrap();
    let p = PlanarMeasure::product(&mu, &nu).unwrap();
    let ev = evaluator(p.clone(), p);
    assert!(bound_check(&ev, c(0.0, 2.0), c(0.0, 2.0)).unwrap() >= 0.0);
}

/// Newton iteration in `w` for a zero of `G_η(z, ·)`.
fn zero_in_w(eta: &PlanarMeasure, z: ComplexPoint, mut w: ComplexPoint) -> ComplexPoint {
    for _ in 0..50 {
        let g = eta.cauchy(z, w).unwrap();
        let h = 1e-7;
        let dg = (eta.cauchy(z, w + h).unwrap() - eta.cauchy(z, w - h).unwrap()) / (2.0 * h);
        w -= g / dg;
    }
    w
}

#[test]
fn zeros_of_a_face_transform_are_zeros_of_the_convolution() {
    let eta = PlanarMeasure::atomic(&[
        (
            0.688_843_703_050_096_2,
            0.515_908_805_880_605,
            0.325_101_495_911_250_9,
        ),
        (
            -0.482_166_499_414_073_3,
            0.022_549_442_737_217_04,
            0.315_539_860_160_729_8,
        ),
        (
            0.567_597_178_069_545_2,
            -0.393_374_547_842_145_1,
            0.359_358_643_928_019_3,
        ),
    ])
    .unwrap();
    let z = c(0.166_764_078_910_062_4, 0.912_707_240_935_568_4);
    let w = zero_in_w(&eta, z, c(0.3087, 0.1096));
    assert!(w.im > 0.0);
    let shift = (0.25, -0.5);
    let ev = evaluator(eta.clone(), PlanarMeasure::dirac(shift.0, shift.1));
    let (g, d) = bifree_eval(&ev, z + shift.0, w + shift.1).unwrap();
    assert!(d.g1.norm() < 1e-12, "{}", d.g1.norm());
    assert!(g.norm() < 1e-10);
}

#[test]
fn smoothing_of_a_point_mass() {
    let ev = evaluator(
        PlanarMeasure::dirac(1.0, 1.0),
        PlanarMeasure::dirac(0.0, 0.0),
    );
    let (eps, delta) = (1e-3, 2e-3);
    let d = density2d_smoothed(&ev, &[1.0], &[1.0], eps, delta).unwrap();
    let expected = 1.0 / (std::f64::consts::PI.powi(2) * eps * delta);
    assert!((d.values[0][0] / expected - 1.0).abs() < 1e-9);
    assert!(d.experimental);
}

#[test]
fn smoothing_of_product_inputs_is_separable() {
    let mu = Measure1D::atomic(&[(0.0, 0.5), (1.0, 0.5)]).unwrap();
    let nu = Measure1D::atomic(&[(-1.0, 0.3), (0.5, 0.7)]).unwrap();
    let ev = evaluator(
        PlanarMeasure::product(&mu, &nu).unwrap(),
        PlanarMeasure::product(&mu, &nu).unwrap(),
    );
    let (eps, delta) = (0.05, 0.07);
    let xs = [0.2, 0.9, 1.7];
    let ys = [-1.1, 0.4];
    let d = density2d_smoothed(&ev, &xs, &ys, eps, delta).unwrap();
    let pois = |g: ComplexPoint| -g.im / std::f64::consts::PI;
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let px = pois(free_eval(ev.left(), c(x, eps)).unwrap());
            let py = pois(free_eval(ev.right(), c(y, delta)).unwrap());
            assert!(
                (d.values[i][j] - px * py).abs() < 1e-10,
                "{} vs {}",
                d.values[i][j],
                px * py
            );
        }
    }
}

#[test]
fn smoothed_example_has_unit_mass() {
    let ev = evaluator(example(), example());
    let (eps, delta) = (1e-2, 1e-2);
    let (lo, hi, n) = (-1.5, 3.5, 1001);
    let h = (hi - lo) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|k| lo + h * k as f64).collect();
    let d = density2d_smoothed(&ev, &grid, &grid, eps, delta).unwrap();
    let total: f64 = d.values.iter().flatten().map(|v| v * h * h).sum();
    assert!((total - 1.0).abs() < 2e-2, "{total}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn marginal_consistency(eta1 in planar(), eta2 in planar(), z in upper(), w in upper()) {
        let ev = evaluator(eta1, eta2);
        let far = c(0.0, 1e8);
        let left = far * bifree_eval(&ev, z, far).unwrap().0;
        prop_assert!((left - free_eval(ev.left(), z).unwrap()).norm() < 1e-6);
        let right = far * bifree_eval(&ev, far, w).unwrap().0;
        prop_assert!((right - free_eval(ev.right(), w).unwrap()).norm() < 1e-6);
    }

    #[test]
    fn assembly_residual(eta1 in planar(), eta2 in planar(), z in upper(), w in upper()) {
        let ev = evaluator(eta1, eta2);
        let (g, d) = bifree_eval(&ev, z, w).unwrap();
        prop_assume!(d.g1.norm() > 1e-6 && d.g2.norm() > 1e-6);
        let residual = g * (d.g1.inv() + d.g2.inv()) - g / (d.gmu * d.gnu) - 1.0;
        prop_assert!(residual.norm() < 1e-9, "{}", residual.norm());
    }

    #[test]
    fn pi1_is_linear_in_zeta(
        eta1 in planar(), eta2 in planar(), z in upper(), w in upper(),
        a in -2.0..2.0f64, b in -2.0..2.0f64,
    ) {
        let ev = evaluator(eta1, eta2);
        let (z1, z2) = (c(0.3, -1.0), c(-0.7, 0.4));
        let (Ok(p1), Ok(p2), Ok(p)) = (
            pi1(&ev, z, z1, w),
            pi1(&ev, z, z2, w),
            pi1(&ev, z, a * z1 + b * z2, w),
        ) else {
            return Ok(());
        };
        let expected = a * p1 + b * p2;
        prop_assert!((p - expected).norm() <= 1e-12 * expected.norm().max(p1.norm()).max(p2.norm()).max(1.0));
    }

    #[test]
    fn bound_holds(eta1 in planar(), eta2 in planar(), z in upper(), w in upper()) {
        let ev = evaluator(eta1, eta2);
        prop_assert!(bound_check(&ev, z, w).unwrap() >= -1e-10);
    }

    #[test]
    fn matrix_transform_maps_into_lower_half(
        eta in planar(), z in upper(), w in upper(), t in 0.0..0.999f64, phase in 0.0..6.3f64,
    ) {
        let zeta = ComplexPoint::from_polar(2.0 * (z.im * w.im).sqrt() * t, phase);
        let arg = UpperTriangular2::new(z, zeta, w);
        prop_assume!(arg.has_positive_imaginary_part());
        let g = matrix_cauchy_2x2(&eta, &arg).unwrap();
        prop_assert!(g.negative_imaginary_part_is_psd(1e-14));
    }

    #[test]
    fn corner_of_product_vanishes(mu in measure1d(), nu in measure1d()) {
        let eta = PlanarMeasure::product(&mu, &nu).unwrap();
        let r = upper_triangular_r(&eta.mixed_moments(5), 4).unwrap();
        for row in r.corner.rows() {
            for v in row {
                prop_assert!(v.abs() < 1e-10);
            }
        }
    }
}
