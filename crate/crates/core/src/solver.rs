//! Fixed-point solvers for the subordination equations on the upper
//! half-plane.
//!
//! Both maps solved here are holomorphic self-maps of ℂ⁺ that are not
//! automorphisms, so plain iteration converges to their unique interior
//! fixed point from any starting point. Newton steps on `u - T(u)` are tried
//! first and kept only when they stay in ℂ⁺ and shrink the residual, which
//! restores fast convergence close to the real axis where the contraction
//! rate of the plain iteration approaches one.

use crate::error::{Error, Result};
use crate::measure::{ComplexPoint, Measure1D};

/// Imaginary parts below this trigger the continuation ladder.
pub const NEAR_REAL_THRESHOLD: f64 = 1e-8;
/// Top rung of the continuation ladder.
const LADDER_START: f64 = 1e-4;
/// Highest rung tried, relative to `max(1, |Re z|)`.
const LADDER_CEILING: f64 = 1e4;
/// Number of steps without improvement of the best residual before damping.
const STALL_WINDOW: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Bound on `|T(u) - u| / max(1, |u|)` at the returned point.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Initial relaxation weight in `(0, 1]` for `u ← (1-d)u + d·T(u)`.
    pub damping: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-13,
            max_iterations: 500,
            damping: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument(
                "max_iterations must be at least 1".into(),
            ));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidArgument("damping must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

/// Pair of subordination values for a free additive convolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubordinationResult {
    pub omega1: ComplexPoint,
    pub omega2: ComplexPoint,
    pub residual: f64,
    pub iterations: usize,
}

/// Outcome of a single fixed-point solve.
#[derive(Debug, Clone, Copy)]
struct FixedPoint {
    point: ComplexPoint,
    residual: f64,
    iterations: usize,
}

fn scaled_residual(u: ComplexPoint, tu: ComplexPoint) -> f64 {
    (tu - u).norm() / u.norm().max(1.0)
}

/// Solve `u = T(u)` for a self-map of ℂ⁺ given as `u ↦ (T(u), T'(u))`.
fn iterate<M>(map: M, start: ComplexPoint, cfg: &SolverConfig) -> Result<FixedPoint>
where
    M: Fn(ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)>,
{
    let mut u = start;
    let (mut tu, mut dtu) = map(u)?;
    let mut damping = cfg.damping;
    let mut best = f64::INFINITY;
    let mut since_best = 0;
    for iteration in 1..=cfg.max_iterations {
        let residual = scaled_residual(u, tu);
        if !residual.is_finite() {
            return Err(Error::NoConvergence {
                iterations: iteration,
                residual,
            });
        }
        if residual <= cfg.tolerance {
            return Ok(FixedPoint {
                point: u,
                residual,
                iterations: iteration,
            });
        }
        if residual < 0.99 * best {
            best = residual;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= STALL_WINDOW {
                damping *= 0.5;
                since_best = 0;
            }
        }

        let slope = dtu - 1.0;
        let newton = u - (tu - u) / slope;
        if newton.im > 0.0 && newton.re.is_finite() && newton.im.is_finite() {
            if let Ok((tn, dn)) = map(newton) {
                if scaled_residual(newton, tn) < residual {
                    u = newton;
                    tu = tn;
                    dtu = dn;
                    continue;
                }
            }
        }

        u = u * (1.0 - damping) + tu * damping;
        if !(u.im > 0.0) {
            return Err(Error::LeftHalfPlaneEscape { iteration });
        }
        (tu, dtu) = map(u)?;
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iterations,
        residual: scaled_residual(u, tu),
    })
}

/// Solve at `z`, falling back on continuation in the imaginary part.
///
/// Points with `Im z` below [`NEAR_REAL_THRESHOLD`], and points where the
/// direct solve fails, are reached along a geometric ladder of imaginary
/// parts. The top rung is the first of `LADDER_START`, `10·LADDER_START`, …
/// (or `10·Im z`, … for the fallback) that converges from a cold start; each
/// lower rung is warm-started from the one above.
fn with_ladder<S>(z: ComplexPoint, solve: S) -> Result<FixedPoint>
where
    S: Fn(ComplexPoint, Option<ComplexPoint>) -> Result<FixedPoint>,
{
    let direct_error = if z.im >= NEAR_REAL_THRESHOLD {
        match solve(z, None) {
            Ok(fp) => return Ok(fp),
            Err(e) => Some(e),
        }
    } else {
        None
    };
    let fail = |e: Error| direct_error.clone().unwrap_or(e);
    let ceiling = LADDER_CEILING * z.re.abs().max(1.0);
    let mut y = if z.im < NEAR_REAL_THRESHOLD {
        LADDER_START
    } else {
        10.0 * z.im
    };
    let mut total = 0;
    let mut fp = loop {
        match solve(ComplexPoint::new(z.re, y), None) {
            Ok(fp) => break fp,
            Err(e) if y >= ceiling => return Err(fail(e)),
            Err(_) => y *= 10.0,
        }
    };
    while y > z.im {
        total += fp.iterations;
        y = (0.1 * y).max(z.im);
        fp = solve(ComplexPoint::new(z.re, y), Some(fp.point)).map_err(fail)?;
    }
    Ok(FixedPoint {
        iterations: total + fp.iterations,
        ..fp
    })
}

fn require_upper(z: ComplexPoint) -> Result<()> {
    if z.im > 0.0 && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "argument {z} must lie in the open upper half-plane"
        )))
    }
}

/// Subordination functions of `mu1 ⊞ mu2` at `z ∈ ℂ⁺`.
///
/// Iterates `T(u) = z + h₂(z + h₁(u))` from `u₀ = z`, then returns
/// `ω₁ = u` and `ω₂ = z + h₁(ω₁)`.
pub fn free_subordination(
    mu1: &Measure1D,
    mu2: &Measure1D,
    z: ComplexPoint,
    cfg: &SolverConfig,
) -> Result<SubordinationResult> {
    cfg.validate()?;
    require_upper(z)?;
    let fp = with_ladder(z, |zr, start| {
        let map = |u: ComplexPoint| -> Result<(ComplexPoint, ComplexPoint)> {
            let (h1, dh1) = mu1.h_with_derivative(u)?;
            let v = zr + h1;
            let (h2, dh2) = mu2.h_with_derivative(v)?;
            Ok((zr + h2, dh2 * dh1))
        };
        iterate(map, start.unwrap_or(zr), cfg)
    })?;
    let omega1 = fp.point;
    let omega2 = z + mu1.h(omega1)?;
    Ok(SubordinationResult {
        omega1,
        omega2,
        residual: fp.residual,
        iterations: fp.iterations,
    })
}

/// Subordination function `ω_μ(t, z)` of the free convolution semigroup,
/// the fixed point of `v ↦ z/t + (1 - 1/t)/G_μ(v)`.
pub fn semigroup_subordination(
    mu: &Measure1D,
    t: f64,
    z: ComplexPoint,
    cfg: &SolverConfig,
) -> Result<ComplexPoint> {
    cfg.validate()?;
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::InvalidTime(t));
    }
    require_upper(z)?;
    if t == 1.0 {
        return Ok(z);
    }
    let s = 1.0 - 1.0 / t;
    let fp = with_ladder(z, |zr, start| {
        let map = |v: ComplexPoint| -> Result<(ComplexPoint, ComplexPoint)> {
            // F = v + h, F' = 1 + h'
            let (h, dh) = mu.h_with_derivative(v)?;
            Ok((zr / t + s * (v + h), s * (1.0 + dh)))
        };
        iterate(map, start.unwrap_or(zr), cfg)
    })?;
    Ok(fp.point)
}
