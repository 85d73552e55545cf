//! Boolean, bi-Boolean, conditionally free and conditionally bi-free
//! additive convolutions.
//!
//! Boolean convolution adds `h = F - z`, bi-Boolean convolution adds
//! `Ẽ = G_η/(G_μ G_ν) - 1`, and the conditionally free versions evaluate the
//! same quantities at the subordination points of the `ψ`-distributions.

use crate::bifreeconv::{BiFreeEvaluator, DENOMINATOR_THRESHOLD};
use crate::error::{Error, Result};
use crate::freeconv::FreeConvEvaluator;
use crate::measure::{Atom1D, ComplexPoint, Measure1D, PlanarMeasure};
use crate::solver::SolverConfig;

/// Distributions `(σ, μ)` of one variable under the states `φ` and `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CPair1D {
    pub sigma: Measure1D,
    pub mu: Measure1D,
}

/// Planar distributions `(θ, η)` of a two-faced pair under `φ` and `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CPair2D {
    pub theta: PlanarMeasure,
    pub eta: PlanarMeasure,
}

/// `h_μ(z) = 1/G_μ(z) - z`.
pub fn h_function(m: &Measure1D, z: ComplexPoint) -> Result<ComplexPoint> {
    m.h(z)
}

/// `G_{μ₁⊎μ₂}(z) = 1/(z + h₁(z) + h₂(z))`.
pub fn boolean_eval(mu1: &Measure1D, mu2: &Measure1D, z: ComplexPoint) -> Result<ComplexPoint> {
    Ok((z + mu1.h(z)? + mu2.h(z)?).inv())
}

/// `F(x)` and `F'(x)` at a real point for an atomic measure, stable at and
/// near atoms: numerator and denominator are scaled by the distance to the
/// nearest atom.
fn real_reciprocal_cauchy(mu: &Measure1D, x: f64) -> (f64, f64) {
    let atoms = mu.atoms();
    let nearest = atoms
        .iter()
        .map(|a| x - a.location)
        .min_by(|a, b| a.abs().total_cmp(&b.abs()))
        .expect("a probability measure has at least one atom");
    let (mut s1, mut s2) = (0.0, 0.0);
    for a in atoms {
        let d = x - a.location;
        let r = if d == nearest { 1.0 } else { nearest / d };
        s1 += a.mass * r;
        s2 += a.mass * r * r;
    }
    (nearest / s1, s2 / (s1 * s1))
}

/// Real zeros of `G_μ`, one between each pair of consecutive atoms.
fn cauchy_zeros(mu: &Measure1D) -> Vec<f64> {
    mu.atoms()
        .windows(2)
        .map(|w| {
            let (mut lo, mut hi) = (w[0].location, w[1].location);
            // G decreases from +∞ to -∞ across the gap.
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let g: f64 = mu.atoms().iter().map(|a| a.mass / (mid - a.location)).sum();
                if g > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Atoms of `μ₁ ⊎ μ₂` for purely atomic inputs: the zeros of the increasing
/// function `F(x) = x + h₁(x) + h₂(x)` between its poles, each of mass
/// `1/F'(x)`.
pub fn boolean_atoms(mu1: &Measure1D, mu2: &Measure1D) -> Result<Vec<Atom1D>> {
    if !mu1.is_atomic() || !mu2.is_atomic() {
        return Err(Error::InvalidArgument(
            "Boolean atoms are computed for purely atomic inputs".into(),
        ));
    }
    let f = |x: f64| {
        let (f1, d1) = real_reciprocal_cauchy(mu1, x);
        let (f2, d2) = real_reciprocal_cauchy(mu2, x);
        (f1 + f2 - x, d1 + d2 - 1.0)
    };
    let mut poles: Vec<f64> = cauchy_zeros(mu1);
    poles.extend(cauchy_zeros(mu2));
    poles.sort_by(f64::total_cmp);
    poles.dedup();

    let reach = 1.0 + mu1.radius() + mu2.radius();
    let mut bounds = Vec::with_capacity(poles.len() + 2);
    bounds.push(None);
    bounds.extend(poles.iter().copied().map(Some));
    bounds.push(None);

    let mut atoms = Vec::new();
    for gap in bounds.windows(2) {
        let mut lo = match gap[0] {
            Some(p) => p,
            None => {
                let mut l = -reach;
                while f(l).0 >= 0.0 {
                    l *= 2.0;
                }
                l
            }
        };
        let mut hi = match gap[1] {
            Some(p) => p,
            None => {
                let mut h = reach;
                while f(h).0 <= 0.0 {
                    h *= 2.0;
                }
                h
            }
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid).0 < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = 0.5 * (lo + hi);
        atoms.push(Atom1D::new(x, 1.0 / f(x).1));
    }
    Ok(atoms)
}

/// Rejects a denominator that vanishes numerically.
fn guard(value: ComplexPoint) -> Result<ComplexPoint> {
    if value.norm() < DENOMINATOR_THRESHOLD {
        return Err(Error::DenominatorNearZero {
            magnitude: value.norm(),
            scale: 1.0,
        });
    }
    Ok(value)
}

/// `Ẽ_η(z, w) = G_η(z, w)/(G_μ(z) G_ν(w)) - 1`.
fn e_tilde(
    eta: &PlanarMeasure,
    mu: &Measure1D,
    nu: &Measure1D,
    z: ComplexPoint,
    w: ComplexPoint,
) -> Result<ComplexPoint> {
    let gm = guard(mu.cauchy(z)?)?;
    let gn = guard(nu.cauchy(w)?)?;
    Ok(eta.cauchy(z, w)? / (gm * gn) - 1.0)
}

/// `G_{η₁⊎⊎η₂}(z, w) = G_{μ₁⊎μ₂}(z) G_{ν₁⊎ν₂}(w) (1 + Ẽ_{η₁} + Ẽ_{η₂})`.
pub fn bi_boolean_eval(
    eta1: &PlanarMeasure,
    eta2: &PlanarMeasure,
    z: ComplexPoint,
    w: ComplexPoint,
) -> Result<ComplexPoint> {
    let (mu1, nu1) = eta1.marginals();
    let (mu2, nu2) = eta2.marginals();
    let e = e_tilde(eta1, &mu1, &nu1, z, w)? + e_tilde(eta2, &mu2, &nu2, z, w)?;
    Ok(boolean_eval(&mu1, &mu2, z)? * boolean_eval(&nu1, &nu2, w)? * (1.0 + e))
}

/// `(G_σ(z), G_{μ₁⊞μ₂}(z))` for `(σ, μ) = (σ₁, μ₁) ⊞_c (σ₂, μ₂)`, where
/// `h_σ(z) = h_{σ₁}(ω₁(z)) + h_{σ₂}(ω₂(z))`.
pub fn cfree_eval(
    p1: &CPair1D,
    p2: &CPair1D,
    z: ComplexPoint,
    cfg: &SolverConfig,
) -> Result<(ComplexPoint, ComplexPoint)> {
    let ev = FreeConvEvaluator::new(p1.mu.clone(), p2.mu.clone(), *cfg)?;
    let s = ev.subordination(z)?;
    let g_sigma = cfree_phi_transform(&p1.sigma, &p2.sigma, z, s.omega1, s.omega2)?;
    Ok((g_sigma, p1.mu.cauchy(s.omega1)?))
}

fn cfree_phi_transform(
    sigma1: &Measure1D,
    sigma2: &Measure1D,
    z: ComplexPoint,
    omega1: ComplexPoint,
    omega2: ComplexPoint,
) -> Result<ComplexPoint> {
    Ok((z + sigma1.h(omega1)? + sigma2.h(omega2)?).inv())
}

/// `(G_θ(z, w), G_η(z, w))` for `(θ, η) = (θ₁, η₁) ⊞⊞_c (θ₂, η₂)`, from
/// `Ẽ_θ/G_η = Σ_j Ẽ_{θ_j}(ω_{a_j}, ω_{b_j}) / G_{η_j}(ω_{a_j}, ω_{b_j})` and
/// `G_θ = G_σ G_τ (1 + Ẽ_θ)`.
pub fn cbifree_eval(
    p1: &CPair2D,
    p2: &CPair2D,
    z: ComplexPoint,
    w: ComplexPoint,
    cfg: &SolverConfig,
) -> Result<(ComplexPoint, ComplexPoint)> {
    let ev = BiFreeEvaluator::new(p1.eta.clone(), p2.eta.clone(), *cfg)?;
    let a = ev.left_face(z)?;
    let b = ev.right_face(w)?;
    let (g_eta, d) = ev.assemble(&a, &b)?;
    let (s1, t1) = p1.theta.marginals();
    let (s2, t2) = p2.theta.marginals();
    let g_sigma = cfree_phi_transform(&s1, &s2, z, a.omega1, a.omega2)?;
    let g_tau = cfree_phi_transform(&t1, &t2, w, b.omega1, b.omega2)?;
    let ratio1 = e_tilde(&p1.theta, &s1, &t1, a.omega1, b.omega1)? / guard(d.g1)?;
    let ratio2 = e_tilde(&p2.theta, &s2, &t2, a.omega2, b.omega2)? / guard(d.g2)?;
    let e_theta = g_eta * (ratio1 + ratio2);
    Ok((g_sigma * g_tau * (1.0 + e_theta), g_eta))
}
