//! Partial bi-free convolution semigroups `η_t`, `t ≥ 1`.

use serde::Serialize;

use crate::bifreeconv::DENOMINATOR_THRESHOLD;
use crate::error::{Error, Result};
use crate::measure::{Atom1D, ComplexPoint, Measure1D, PlanarAtom, PlanarMeasure, MASS_TOLERANCE};
use crate::solver::{semigroup_subordination, SolverConfig};

/// `η` together with a time `t ≥ 1`.
#[derive(Debug, Clone)]
pub struct SemigroupState {
    pub eta: PlanarMeasure,
    pub t: f64,
    mu: Measure1D,
    nu: Measure1D,
}

impl SemigroupState {
    pub fn new(eta: PlanarMeasure, t: f64) -> Result<Self> {
        if !(t >= 1.0 && t.is_finite()) {
            return Err(Error::InvalidTime(t));
        }
        let (mu, nu) = eta.marginals();
        Ok(Self { eta, t, mu, nu })
    }

    pub fn marginals(&self) -> (&Measure1D, &Measure1D) {
        (&self.mu, &self.nu)
    }
}

/// `ω_μ(t, z)` for any non-real `z`, reflecting across the real axis.
fn subordination(
    mu: &Measure1D,
    t: f64,
    z: ComplexPoint,
    cfg: &SolverConfig,
) -> Result<ComplexPoint> {
    if z.im > 0.0 {
        semigroup_subordination(mu, t, z, cfg)
    } else if z.im < 0.0 {
        Ok(semigroup_subordination(mu, t, z.conj(), cfg)?.conj())
    } else {
        Err(Error::InvalidArgument(format!(
            "argument {z} lies on the real axis"
        )))
    }
}

/// `G_{μ_t}(z) = G_μ(ω_μ(t, z))` for the free convolution power `μ_t = μ^{⊞t}`.
pub fn semigroup_marginal_eval(
    mu: &Measure1D,
    t: f64,
    z: ComplexPoint,
    cfg: &SolverConfig,
) -> Result<ComplexPoint> {
    mu.cauchy(subordination(mu, t, z, cfg)?)
}

/// `G_{η_t}(z, w) = 1 / (t/G_η(ω_μ, ω_ν) + (1-t)/(G_μ(ω_μ) G_ν(ω_ν)))`,
/// evaluated as `G_η G_μ G_ν / (t G_μ G_ν + (1-t) G_η)`.
pub fn semigroup_eval(
    s: &SemigroupState,
    z: ComplexPoint,
    w: ComplexPoint,
    cfg: &SolverConfig,
) -> Result<ComplexPoint> {
    let om = subordination(&s.mu, s.t, z, cfg)?;
    let on = subordination(&s.nu, s.t, w, cfg)?;
    let geta = s.eta.cauchy(om, on)?;
    let gmg = s.mu.cauchy(om)? * s.nu.cauchy(on)?;
    let denominator = s.t * gmg + (1.0 - s.t) * geta;
    let scale = gmg.norm().max(geta.norm()).max(1.0);
    if denominator.norm() < DENOMINATOR_THRESHOLD * scale {
        return Err(Error::DenominatorNearZero {
            magnitude: denominator.norm(),
            scale,
        });
    }
    Ok(geta * gmg / denominator)
}

/// Marginal masses of an evolved atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolvedAtom {
    pub first_marginal_mass: f64,
    pub second_marginal_mass: f64,
}

/// Atoms of `η_t`. An atom `(x, y)` of `η` survives at `(tx, ty)` while
/// `μ_t({tx}) = tμ({x}) + 1 - t` and `ν_t({ty}) = tν({y}) + 1 - t` stay
/// positive; its mass `m` solves
/// `μ_t({tx}) ν_t({ty}) / m = t μ({x}) ν({y}) / η({(x, y)}) + 1 - t`.
pub fn atom_evolution(s: &SemigroupState) -> Vec<(PlanarAtom, EvolvedAtom)> {
    let t = s.t;
    let mut out: Vec<(PlanarAtom, EvolvedAtom)> = s
        .eta
        .atoms()
        .iter()
        .filter_map(|a| {
            let (mx, ny) = (s.mu.mass_at(a.x), s.nu.mass_at(a.y));
            let mt = t * mx + 1.0 - t;
            let nt = t * ny + 1.0 - t;
            let rhs = t * mx * ny / a.mass + 1.0 - t;
            if mt <= MASS_TOLERANCE || nt <= MASS_TOLERANCE || rhs <= 0.0 {
                return None;
            }
            let m = mt * nt / rhs;
            (m > MASS_TOLERANCE).then(|| {
                (
                    PlanarAtom::new(t * a.x, t * a.y, m),
                    EvolvedAtom {
                        first_marginal_mass: mt,
                        second_marginal_mass: nt,
                    },
                )
            })
        })
        .collect();
    out.sort_by(|a, b| a.0.x.total_cmp(&b.0.x).then(a.0.y.total_cmp(&b.0.y)));
    out
}

/// Atoms of the free convolution power `μ^{⊞t}`: `tx` with mass
/// `tμ({x}) - (t - 1)` whenever that is positive.
pub fn marginal_atom_evolution(mu: &Measure1D, t: f64) -> Result<Vec<Atom1D>> {
    if !(t >= 1.0 && t.is_finite()) {
        return Err(Error::InvalidTime(t));
    }
    Ok(mu
        .atoms()
        .iter()
        .filter_map(|a| {
            let m = t * a.mass + 1.0 - t;
            (m > MASS_TOLERANCE).then(|| Atom1D::new(t * a.location, m))
        })
        .collect())
}
