//! Truncated formal power series in one and two variables, and the
//! transforms built on them: free R-transforms, partial bi-free R-transforms,
//! their conditionally free analogues, and the inverse maps back to moments.

mod bivariate;
mod transforms;
mod univariate;

pub use bivariate::Series2;
pub use transforms::*;
pub use univariate::Series1;

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::Num;

use crate::error::{Error, Result};

/// Coefficient field for formal series: `f64`, `Complex64` and exact
/// rationals all qualify.
pub trait Scalar: Num + Clone + Debug + Neg<Output = Self> {}

impl<T: Num + Clone + Debug + Neg<Output = T>> Scalar for T {}

/// Table of mixed moments `m[i][j] = ∫ t^i s^j dη`, square of side
/// `order + 1`, with `m[0][0] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable2D {
    m: Vec<Vec<f64>>,
}

impl MomentTable2D {
    pub fn new(m: Vec<Vec<f64>>) -> Result<Self> {
        let n = m.len();
        if n == 0 || m.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidArgument(
                "moment table must be square and non-empty".into(),
            ));
        }
        if m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "moment table has non-finite entries".into(),
            ));
        }
        if (m[0][0] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "moment table must have m[0][0] = 1, got {}",
                m[0][0]
            )));
        }
        Ok(Self { m })
    }

    /// Table of estimated moments, such as those read off a transform
    /// numerically: only shape and finiteness are checked.
    pub fn from_estimates(m: Vec<Vec<f64>>) -> Result<Self> {
        let n = m.len();
        if n == 0 || m.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidArgument(
                "moment table must be square and non-empty".into(),
            ));
        }
        if m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "moment table has non-finite entries".into(),
            ));
        }
        Ok(Self { m })
    }

    pub fn order(&self) -> usize {
        self.m.len() - 1
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.m
    }

    /// Moments of the first marginal, `m[i][0]`.
    pub fn first_marginal(&self) -> Vec<f64> {
        self.m.iter().map(|row| row[0]).collect()
    }

    /// Moments of the second marginal, `m[0][j]`.
    pub fn second_marginal(&self) -> Vec<f64> {
        self.m[0].clone()
    }

    /// Table truncated to a smaller order.
    pub fn truncated(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::InvalidArgument(format!(
                "cannot extend a moment table of order {} to {order}",
                self.order()
            )));
        }
        Ok(Self {
            m: self.m[..=order]
                .iter()
                .map(|row| row[..=order].to_vec())
                .collect(),
        })
    }

    /// Largest entrywise difference, relative to `max(1, |b|)`.
    pub fn max_relative_difference(&self, other: &Self) -> f64 {
        let n = self.m.len().min(other.m.len());
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (self.m[i][j], other.m[i][j]);
                worst = worst.max((a - b).abs() / b.abs().max(1.0));
            }
        }
        worst
    }
}
