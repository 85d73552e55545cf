//! Fixtures and proptest strategies shared by the integration tests.
#![allow(dead_code)]

use bifree::{ComplexPoint, Measure1D, PlanarMeasure};
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> ComplexPoint {
    ComplexPoint::new(re, im)
}

pub fn example() -> PlanarMeasure {
    PlanarMeasure::atomic(&[(1.0, 1.0, 0.75), (0.0, 0.0, 0.125), (1.0, 0.0, 0.125)]).unwrap()
}

pub fn bernoulli() -> Measure1D {
    Measure1D::atomic(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap()
}

fn normalized(weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| w / total).collect()
}

/// Atomic probability measures with one to four atoms in `[-2, 2]`.
pub fn measure1d() -> impl Strategy<Value = Measure1D> {
    prop::collection::vec((-2.0..2.0f64, 0.05..1.0f64), 1..=4).prop_map(|atoms| {
        let w = normalized(&atoms.iter().map(|a| a.1).collect::<Vec<_>>());
        let atoms: Vec<(f64, f64)> = atoms.iter().zip(w).map(|(a, m)| (a.0, m)).collect();
        Measure1D::atomic(&atoms).unwrap()
    })
}

/// Atomic planar probability measures with one to four atoms in `[-1.5, 1.5]²`.
pub fn planar() -> impl Strategy<Value = PlanarMeasure> {
    prop::collection::vec((-1.5..1.5f64, -1.5..1.5f64, 0.05..1.0f64), 1..=4).prop_map(|atoms| {
        let w = normalized(&atoms.iter().map(|a| a.2).collect::<Vec<_>>());
        let atoms: Vec<(f64, f64, f64)> = atoms.iter().zip(w).map(|(a, m)| (a.0, a.1, m)).collect();
        PlanarMeasure::atomic(&atoms).unwrap()
    })
}

/// Points of the upper half-plane away from the real axis.
pub fn upper() -> impl Strategy<Value = ComplexPoint> {
    (-4.0..4.0f64, 0.02..4.0f64).prop_map(|(re, im)| c(re, im))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max)
}
