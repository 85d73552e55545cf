//! Free additive convolution `μ₁ ⊞ μ₂` on the real line.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{Atom1D, ComplexPoint, Measure1D, MASS_TOLERANCE};
use crate::solver::{free_subordination, SolverConfig, SubordinationResult};

/// Default distance from the real axis for Stieltjes inversion.
pub const DEFAULT_EPS: f64 = 1e-6;

/// Closed-over evaluator for `G_{μ₁⊞μ₂}`.
#[derive(Debug, Clone)]
pub struct FreeConvEvaluator {
    pub mu1: Measure1D,
    pub mu2: Measure1D,
    pub cfg: SolverConfig,
}

impl FreeConvEvaluator {
    pub fn new(mu1: Measure1D, mu2: Measure1D, cfg: SolverConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { mu1, mu2, cfg })
    }

    /// Subordination functions at any non-real `z`; the lower half-plane is
    /// handled by `ω(z̄) = conj ω(z)`.
    pub fn subordination(&self, z: ComplexPoint) -> Result<SubordinationResult> {
        if z.im == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "argument {z} lies on the real axis"
            )));
        }
        if z.im > 0.0 {
            return free_subordination(&self.mu1, &self.mu2, z, &self.cfg);
        }
        let s = free_subordination(&self.mu1, &self.mu2, z.conj(), &self.cfg)?;
        Ok(SubordinationResult {
            omega1: s.omega1.conj(),
            omega2: s.omega2.conj(),
            ..s
        })
    }

    /// `G_{μ₁⊞μ₂}(z) = G_{μ₁}(ω₁(z))`.
    pub fn eval(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        let s = self.subordination(z)?;
        self.mu1.cauchy(s.omega1)
    }

    /// Upper bound on the radius of the support of the convolution.
    pub fn support_radius(&self) -> f64 {
        self.mu1.radius() + self.mu2.radius()
    }
}

/// `G_{μ₁⊞μ₂}(z)`.
pub fn free_eval(ev: &FreeConvEvaluator, z: ComplexPoint) -> Result<ComplexPoint> {
    ev.eval(z)
}

/// Stieltjes inversion `-Im G(x + i·eps)/π` on a grid. With `richardson`
/// the two-point extrapolation `2d(eps) - d(2·eps)` removes the first-order
/// smoothing bias.
pub fn free_density(
    ev: &FreeConvEvaluator,
    grid: &[f64],
    eps: f64,
    richardson: bool,
) -> Result<Vec<(f64, f64)>> {
    stieltjes_inversion(|z| ev.eval(z), grid, eps, richardson)
}

/// Stieltjes inversion of an arbitrary one-variable Cauchy transform.
pub fn stieltjes_inversion<G>(
    g: G,
    grid: &[f64],
    eps: f64,
    richardson: bool,
) -> Result<Vec<(f64, f64)>>
where
    G: Fn(ComplexPoint) -> Result<ComplexPoint> + Sync,
{
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let density = |x: f64, e: f64| -> Result<f64> {
        Ok(-g(ComplexPoint::new(x, e))?.im / std::f64::consts::PI)
    };
    grid.par_iter()
        .map(|&x| {
            let d = density(x, eps)?;
            let d = if richardson {
                2.0 * d - density(x, 2.0 * eps)?
            } else {
                d
            };
            Ok((x, d))
        })
        .collect()
}

/// Atoms of `μ₁ ⊞ μ₂`: a pair of atoms `ξ₁`, `ξ₂` with
/// `μ₁({ξ₁}) + μ₂({ξ₂}) > 1` gives an atom at `ξ₁ + ξ₂` of mass
/// `μ₁({ξ₁}) + μ₂({ξ₂}) - 1`, and there are no others.
pub fn free_atoms(mu1: &Measure1D, mu2: &Measure1D) -> Vec<Atom1D> {
    let mut out: Vec<Atom1D> = mu1
        .atoms()
        .iter()
        .flat_map(|a| {
            mu2.atoms().iter().filter_map(move |b| {
                let excess = a.mass + b.mass - 1.0;
                (excess > MASS_TOLERANCE).then(|| Atom1D::new(a.location + b.location, excess))
            })
        })
        .collect();
    out.sort_by(|a, b| a.location.total_cmp(&b.location));
    out
}
