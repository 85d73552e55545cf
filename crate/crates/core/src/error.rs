use thiserror::Error;

/// Errors raised by measure construction, the subordination solvers and the
/// series engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("argument {re}{im:+}i coincides with a pole of the transform")]
    PoleAtArgument { re: f64, im: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("iterate left the upper half-plane at iteration {iteration}")]
    LeftHalfPlaneEscape { iteration: usize },

    #[error("semigroup time must satisfy t >= 1, got {0}")]
    InvalidTime(f64),

    #[error("assembly denominator {magnitude:e} is below threshold relative to scale {scale:e}")]
    DenominatorNearZero { magnitude: f64, scale: f64 },

    #[error("experimental region evaluation failed on {failed} of {total} grid nodes")]
    RegionNotSupported { failed: usize, total: usize },

    #[error("atom at ({x}, {y}): algebraic mass {algebraic:e} disagrees with limit {analytic:e}")]
    InconsistentAtom {
        x: f64,
        y: f64,
        algebraic: f64,
        analytic: f64,
    },

    #[error("series is not invertible: {0}")]
    NonInvertible(&'static str),

    #[error("word length {length} exceeds the free-product truncation cap {cap}")]
    CapExceeded { length: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
