//! Bi-free additive convolution `η₁ ⊞⊞ η₂` of planar measures.
//!
//! The two faces are handled by the one-variable subordination functions of
//! the marginal convolutions `μ₁ ⊞ μ₂` (left) and `ν₁ ⊞ ν₂` (right). With
//! `G_j = G_{η_j}(ω_{a_j}(z), ω_{b_j}(w))` the transform of the convolution is
//!
//! ```text
//! G(z, w) = G₁G₂ / (G₁ + G₂ - G₁G₂ / (G_{μ₁⊞μ₂}(z) G_{ν₁⊞ν₂}(w)))
//! ```
//!
//! which stays analytic through the zeros of `G₁` and `G₂`.

use rayon::prelude::*;
use serde::Serialize;

use crate::contour::{circle_nodes, contour_radius, mixed_moments_from_samples};
use crate::error::{Error, Result};
use crate::freeconv::{free_atoms, FreeConvEvaluator};
use crate::limits::{planar_atom_mass_limit, ATOM_LADDER};
use crate::measure::{ComplexPoint, PlanarAtom, PlanarMeasure, MASS_TOLERANCE};
use crate::series::{upper_triangular_r, MomentTable2D, UpperTriangularR};
use crate::solver::SolverConfig;

/// Relative size below which an assembly denominator counts as zero.
pub const DENOMINATOR_THRESHOLD: f64 = 1e-14;
/// Largest accepted gap between algebraic and analytic atom masses.
pub const ATOM_CONSISTENCY_TOLERANCE: f64 = 1e-4;
/// Largest fraction of failed nodes tolerated by the smoothed density.
pub const MAX_FAILED_FRACTION: f64 = 0.01;

/// Evaluator for `G_{η₁⊞⊞η₂}` with its marginal free convolutions.
#[derive(Debug, Clone)]
pub struct BiFreeEvaluator {
    pub eta1: PlanarMeasure,
    pub eta2: PlanarMeasure,
    pub cfg: SolverConfig,
    left: FreeConvEvaluator,
    right: FreeConvEvaluator,
}

/// Subordination data of one face at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceSubordination {
    pub point: ComplexPoint,
    pub omega1: ComplexPoint,
    pub omega2: ComplexPoint,
    /// Cauchy transform of the marginal free convolution at `point`.
    pub cauchy: ComplexPoint,
}

/// Intermediate quantities of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiEvalDiagnostics {
    pub g1: ComplexPoint,
    pub g2: ComplexPoint,
    pub gmu: ComplexPoint,
    pub gnu: ComplexPoint,
    pub denominator: ComplexPoint,
    /// The arguments lie in opposite half-planes, where the assembly is
    /// used without a proof of validity.
    pub experimental: bool,
}

impl BiFreeEvaluator {
    pub fn new(eta1: PlanarMeasure, eta2: PlanarMeasure, cfg: SolverConfig) -> Result<Self> {
        let (mu1, nu1) = eta1.marginals();
        let (mu2, nu2) = eta2.marginals();
        Ok(Self {
            left: FreeConvEvaluator::new(mu1, mu2, cfg)?,
            right: FreeConvEvaluator::new(nu1, nu2, cfg)?,
            eta1,
            eta2,
            cfg,
        })
    }

    /// Evaluator of the first marginals, `μ₁ ⊞ μ₂`.
    pub fn left(&self) -> &FreeConvEvaluator {
        &self.left
    }

    /// Evaluator of the second marginals, `ν₁ ⊞ ν₂`.
    pub fn right(&self) -> &FreeConvEvaluator {
        &self.right
    }

    /// Support radii of the convolution along each axis.
    pub fn support_radii(&self) -> (f64, f64) {
        (self.left.support_radius(), self.right.support_radius())
    }

    /// Mixed moments up to `order` per variable read off the transform on a
    /// torus outside the support. Each face is solved once per node; the
    /// pairs with opposite imaginary parts are experimental evaluations.
    pub fn mixed_moments(&self, order: usize, nodes: usize) -> Result<MomentTable2D> {
        let (rx, ry) = self.support_radii();
        let zs: Vec<ComplexPoint> = circle_nodes(contour_radius(rx), nodes)
            .into_iter()
            .take(nodes / 2)
            .collect();
        let ws = circle_nodes(contour_radius(ry), nodes);
        let left: Vec<FaceSubordination> = zs
            .par_iter()
            .map(|&z| self.left_face(z))
            .collect::<Result<_>>()?;
        let right: Vec<FaceSubordination> = ws
            .par_iter()
            .map(|&w| self.right_face(w))
            .collect::<Result<_>>()?;
        let values = left
            .par_iter()
            .map(|a| {
                right
                    .iter()
                    .map(|b| Ok(self.assemble(a, b)?.0))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        mixed_moments_from_samples(&zs, &ws, &values, order)
    }

    fn face(ev: &FreeConvEvaluator, point: ComplexPoint) -> Result<FaceSubordination> {
        let s = ev.subordination(point)?;
        Ok(FaceSubordination {
            point,
            omega1: s.omega1,
            omega2: s.omega2,
            cauchy: ev.mu1.cauchy(s.omega1)?,
        })
    }

    /// `ω_{a₁}(z)`, `ω_{a₂}(z)` and `G_{μ₁⊞μ₂}(z)`.
    pub fn left_face(&self, z: ComplexPoint) -> Result<FaceSubordination> {
        Self::face(&self.left, z)
    }

    /// `ω_{b₁}(w)`, `ω_{b₂}(w)` and `G_{ν₁⊞ν₂}(w)`.
    pub fn right_face(&self, w: ComplexPoint) -> Result<FaceSubordination> {
        Self::face(&self.right, w)
    }

    /// `G_j` at the subordinated arguments, `j = 1, 2`.
    fn face_values(
        &self,
        a: &FaceSubordination,
        b: &FaceSubordination,
    ) -> Result<(ComplexPoint, ComplexPoint)> {
        Ok((
            self.eta1.cauchy(a.omega1, b.omega1)?,
            self.eta2.cauchy(a.omega2, b.omega2)?,
        ))
    }

    /// Assemble `G_{η₁⊞⊞η₂}` from precomputed face data.
    pub fn assemble(
        &self,
        a: &FaceSubordination,
        b: &FaceSubordination,
    ) -> Result<(ComplexPoint, BiEvalDiagnostics)> {
        let (g1, g2) = self.face_values(a, b)?;
        let (gmu, gnu) = (a.cauchy, b.cauchy);
        let denominator = g1 + g2 - g1 * g2 / (gmu * gnu);
        let scale = g1.norm().max(g2.norm()).max(1.0);
        if denominator.norm() < DENOMINATOR_THRESHOLD * scale {
            return Err(Error::DenominatorNearZero {
                magnitude: denominator.norm(),
                scale,
            });
        }
        let diagnostics = BiEvalDiagnostics {
            g1,
            g2,
            gmu,
            gnu,
            denominator,
            experimental: (a.point.im > 0.0) != (b.point.im > 0.0),
        };
        Ok((g1 * g2 / denominator, diagnostics))
    }
}

/// `G_{η₁⊞⊞η₂}(z, w)` with its diagnostics. Arguments in opposite
/// half-planes are evaluated through the reflected subordination functions
/// and flagged as experimental.
pub fn bifree_eval(
    ev: &BiFreeEvaluator,
    z: ComplexPoint,
    w: ComplexPoint,
) -> Result<(ComplexPoint, BiEvalDiagnostics)> {
    let a = ev.left_face(z)?;
    let b = ev.right_face(w)?;
    ev.assemble(&a, &b)
}

fn require_upper(z: ComplexPoint, w: ComplexPoint) -> Result<()> {
    if z.im > 0.0 && w.im > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "arguments ({z}, {w}) must both lie in the upper half-plane"
        )))
    }
}

/// Scalar `Π₁(z, ζ, w)`:
/// `(ζ/G₁) / (1/G₁ + 1/G₂ - 1/(G_{μ₁}(ω_{a₁}) G_{ν₁}(ω_{b₁})))`.
pub fn pi1(
    ev: &BiFreeEvaluator,
    z: ComplexPoint,
    zeta: ComplexPoint,
    w: ComplexPoint,
) -> Result<ComplexPoint> {
    require_upper(z, w)?;
    let a = ev.left_face(z)?;
    let b = ev.right_face(w)?;
    let (g1, g2) = ev.face_values(&a, &b)?;
    let scale = g2.norm().max(1.0);
    if g1.norm() < DENOMINATOR_THRESHOLD * scale || g2.norm() < DENOMINATOR_THRESHOLD {
        return Err(Error::DenominatorNearZero {
            magnitude: g1.norm().min(g2.norm()),
            scale,
        });
    }
    let gmu1 = ev.left.mu1.cauchy(a.omega1)?;
    let gnu1 = ev.right.mu1.cauchy(b.omega1)?;
    let inner = g1.inv() + g2.inv() - (gmu1 * gnu1).inv();
    if inner.norm() < DENOMINATOR_THRESHOLD * g1.inv().norm().max(g2.inv().norm()) {
        return Err(Error::DenominatorNearZero {
            magnitude: inner.norm(),
            scale,
        });
    }
    Ok(zeta / g1 / inner)
}

/// Slack of the inequality
/// `Im ω_{a_j}·Im ω_{b_j}·|G_j|² ≥ Im z·Im w·|G|²`, minimised over `j`.
pub fn bound_check(ev: &BiFreeEvaluator, z: ComplexPoint, w: ComplexPoint) -> Result<f64> {
    require_upper(z, w)?;
    let a = ev.left_face(z)?;
    let b = ev.right_face(w)?;
    let (g, d) = ev.assemble(&a, &b)?;
    let rhs = z.im * w.im * g.norm_sqr();
    let slack1 = a.omega1.im * b.omega1.im * d.g1.norm_sqr() - rhs;
    let slack2 = a.omega2.im * b.omega2.im * d.g2.norm_sqr() - rhs;
    Ok(slack1.min(slack2))
}

/// Data behind one atom of a bi-free convolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiAtomDiagnostics {
    /// Mass of the first marginal of the convolution at the atom.
    pub first_marginal_mass: f64,
    /// Mass of the second marginal of the convolution at the atom.
    pub second_marginal_mass: f64,
    /// `Σ_j μ_j({ξ_j}) ν_j({ζ_j}) / η_j({(ξ_j, ζ_j)})`.
    pub ratio_sum: f64,
    /// Mass obtained from the mass identity.
    pub algebraic: f64,
    /// Mass obtained as the boundary limit of the transform.
    pub analytic: f64,
}

/// Candidate atoms `(ξ, ζ, μ⊞-mass, ν⊞-mass, ratio sum)` from the mass law.
fn atom_candidates(eta1: &PlanarMeasure, eta2: &PlanarMeasure) -> Vec<(f64, f64, f64, f64, f64)> {
    let (mu1, nu1) = eta1.marginals();
    let (mu2, nu2) = eta2.marginals();
    let mut out = Vec::new();
    for p in eta1.atoms() {
        for q in eta2.atoms() {
            let (m1, m2) = (mu1.mass_at(p.x), mu2.mass_at(q.x));
            let (n1, n2) = (nu1.mass_at(p.y), nu2.mass_at(q.y));
            let mu_mass = m1 + m2 - 1.0;
            let nu_mass = n1 + n2 - 1.0;
            if mu_mass <= MASS_TOLERANCE || nu_mass <= MASS_TOLERANCE {
                continue;
            }
            let ratio_sum = m1 * n1 / p.mass + m2 * n2 / q.mass;
            out.push((p.x + q.x, p.y + q.y, mu_mass, nu_mass, ratio_sum));
        }
    }
    out
}

/// Atoms of `η₁ ⊞⊞ η₂` from the identity
/// `1 + μ⊞({ξ})·ν⊞({ζ}) / m = Σ_j μ_j({ξ_j}) ν_j({ζ_j}) / η_j({(ξ_j, ζ_j)})`,
/// each verified against `lim (iy)² G(ξ + iy, ζ + iy)`.
pub fn bifree_atoms(
    eta1: &PlanarMeasure,
    eta2: &PlanarMeasure,
    cfg: &SolverConfig,
) -> Result<Vec<(PlanarAtom, BiAtomDiagnostics)>> {
    let ev = BiFreeEvaluator::new(eta1.clone(), eta2.clone(), *cfg)?;
    let mut out = Vec::new();
    for (x, y, mu_mass, nu_mass, ratio_sum) in atom_candidates(eta1, eta2) {
        let excess = ratio_sum - 1.0;
        if excess <= 0.0 {
            continue;
        }
        let algebraic = mu_mass * nu_mass / excess;
        let analytic =
            planar_atom_mass_limit(|z, w| Ok(bifree_eval(&ev, z, w)?.0), x, y, &ATOM_LADDER)?;
        if (analytic - algebraic).abs() > ATOM_CONSISTENCY_TOLERANCE {
            return Err(Error::InconsistentAtom {
                x,
                y,
                algebraic,
                analytic,
            });
        }
        out.push((
            PlanarAtom::new(x, y, algebraic),
            BiAtomDiagnostics {
                first_marginal_mass: mu_mass,
                second_marginal_mass: nu_mass,
                ratio_sum,
                algebraic,
                analytic,
            },
        ));
    }
    out.sort_by(|a, b| a.0.x.total_cmp(&b.0.x).then(a.0.y.total_cmp(&b.0.y)));
    Ok(out)
}

/// Marginal atoms of the two faces, for reporting next to planar atoms.
pub fn marginal_atoms(
    eta1: &PlanarMeasure,
    eta2: &PlanarMeasure,
) -> (Vec<crate::Atom1D>, Vec<crate::Atom1D>) {
    let (mu1, nu1) = eta1.marginals();
    let (mu2, nu2) = eta2.marginals();
    (free_atoms(&mu1, &mu2), free_atoms(&nu1, &nu2))
}

/// Double-Poisson smoothing of `η₁ ⊞⊞ η₂` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedDensity {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `values[i][j]` at `(x[i], y[j])`; `NaN` where the evaluation failed.
    pub values: Vec<Vec<f64>>,
    pub failed_nodes: usize,
    /// Always set: the smoothing uses arguments in opposite half-planes.
    pub experimental: bool,
}

fn check_smoothing(eps: f64, delta: f64) -> Result<()> {
    if eps > 0.0 && delta > 0.0 && eps.is_finite() && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "eps and delta must be positive".into(),
        ))
    }
}

/// Collect per-node results, tolerating degenerate assemblies up to
/// [`MAX_FAILED_FRACTION`] of the grid.
fn collect_smoothed(
    xs: &[f64],
    ys: &[f64],
    rows: Vec<Vec<Option<f64>>>,
) -> Result<SmoothedDensity> {
    let failed = rows.iter().flatten().filter(|v| v.is_none()).count();
    let total = xs.len() * ys.len();
    if total > 0 && failed as f64 > MAX_FAILED_FRACTION * total as f64 {
        return Err(Error::RegionNotSupported { failed, total });
    }
    Ok(SmoothedDensity {
        x: xs.to_vec(),
        y: ys.to_vec(),
        values: rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect())
            .collect(),
        failed_nodes: failed,
        experimental: true,
    })
}

fn smoothed_value(lower: Result<ComplexPoint>, upper: Result<ComplexPoint>) -> Result<Option<f64>> {
    let scale = 0.5 / (std::f64::consts::PI * std::f64::consts::PI);
    match (lower, upper) {
        (Ok(gl), Ok(gu)) => Ok(Some(scale * (gl - gu).re)),
        (Err(Error::DenominatorNearZero { .. }), _)
        | (_, Err(Error::DenominatorNearZero { .. })) => Ok(None),
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

/// Double-Poisson smoothing of any planar measure from its Cauchy transform:
/// `h(x, y) = (1/(2π²))·Re[G(x + iε, y - iδ) - G(x + iε, y + iδ)]`.
pub fn double_poisson_smoothing<G>(
    g: G,
    xs: &[f64],
    ys: &[f64],
    eps: f64,
    delta: f64,
) -> Result<SmoothedDensity>
where
    G: Fn(ComplexPoint, ComplexPoint) -> Result<ComplexPoint> + Sync,
{
    check_smoothing(eps, delta)?;
    let rows = xs
        .par_iter()
        .map(|&x| {
            let z = ComplexPoint::new(x, eps);
            ys.iter()
                .map(|&y| {
                    smoothed_value(
                        g(z, ComplexPoint::new(y, -delta)),
                        g(z, ComplexPoint::new(y, delta)),
                    )
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    collect_smoothed(xs, ys, rows)
}

/// Double-Poisson smoothing of `η₁ ⊞⊞ η₂`, solving each face once per grid line.
pub fn density2d_smoothed(
    ev: &BiFreeEvaluator,
    xs: &[f64],
    ys: &[f64],
    eps: f64,
    delta: f64,
) -> Result<SmoothedDensity> {
    check_smoothing(eps, delta)?;
    let left: Vec<FaceSubordination> = xs
        .par_iter()
        .map(|&x| ev.left_face(ComplexPoint::new(x, eps)))
        .collect::<Result<_>>()?;
    let right: Vec<(FaceSubordination, FaceSubordination)> = ys
        .par_iter()
        .map(|&y| {
            Ok((
                ev.right_face(ComplexPoint::new(y, -delta))?,
                ev.right_face(ComplexPoint::new(y, delta))?,
            ))
        })
        .collect::<Result<_>>()?;
    let rows = left
        .par_iter()
        .map(|a| {
            right
                .iter()
                .map(|(below, above)| {
                    smoothed_value(
                        ev.assemble(a, below).map(|r| r.0),
                        ev.assemble(a, above).map(|r| r.0),
                    )
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    collect_smoothed(xs, ys, rows)
}

/// Upper-triangular 2×2 matrix `[[z, ζ], [0, w]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperTriangular2 {
    pub z: ComplexPoint,
    pub zeta: ComplexPoint,
    pub w: ComplexPoint,
}

impl UpperTriangular2 {
    pub fn new(z: ComplexPoint, zeta: ComplexPoint, w: ComplexPoint) -> Self {
        Self { z, zeta, w }
    }

    /// `Im M = (M - M*)/(2i)` is positive definite.
    pub fn has_positive_imaginary_part(&self) -> bool {
        self.z.im > 0.0 && self.w.im > 0.0 && 4.0 * self.z.im * self.w.im > self.zeta.norm_sqr()
    }

    /// `-Im M` is positive semidefinite, up to an absolute slack `tol`.
    pub fn negative_imaginary_part_is_psd(&self, tol: f64) -> bool {
        let (a, d) = (-self.z.im, -self.w.im);
        a >= -tol && d >= -tol && a * d - 0.25 * self.zeta.norm_sqr() >= -tol
    }

    pub fn conj(&self) -> Self {
        Self::new(self.z.conj(), self.zeta.conj(), self.w.conj())
    }
}

/// Matrix-valued Cauchy transform of `diag(a, b)` at an upper-triangular
/// argument: diagonal `(G_μ(z), G_ν(w))`, corner `-ζ·G_η(z, w)`.
pub fn matrix_cauchy_2x2(eta: &PlanarMeasure, arg: &UpperTriangular2) -> Result<UpperTriangular2> {
    let (mu, nu) = eta.marginals();
    Ok(UpperTriangular2::new(
        mu.cauchy(arg.z)?,
        -arg.zeta * eta.cauchy(arg.z, arg.w)?,
        nu.cauchy(arg.w)?,
    ))
}

/// R-transform of `diag(a, b)` on upper-triangular arguments, every series
/// truncated at `order`.
pub fn matrix_r_2x2(eta: &PlanarMeasure, order: usize) -> Result<UpperTriangularR> {
    upper_triangular_r(&eta.mixed_moments(order + 1), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Measure1D;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    fn example() -> PlanarMeasure {
        PlanarMeasure::atomic(&[(1.0, 1.0, 0.75), (0.0, 0.0, 0.125), (1.0, 0.0, 0.125)]).unwrap()
    }

    fn skewed() -> PlanarMeasure {
        PlanarMeasure::atomic(&[(-1.0, 0.5, 0.3), (0.4, -0.2, 0.45), (1.2, 1.0, 0.25)]).unwrap()
    }

    fn evaluator(a: PlanarMeasure, b: PlanarMeasure) -> BiFreeEvaluator {
        BiFreeEvaluator::new(a, b, SolverConfig::default()).unwrap()
    }

    #[test]
    fn point_mass_translates() {
        let eta = skewed();
        let ev = evaluator(PlanarMeasure::dirac(0.5, -1.0), eta.clone());
        for (z, w) in [(c(0.2, 0.5), c(-1.0, 2.0)), (c(3.0, 0.1), c(0.0, 0.3))] {
            let (g, _) = bifree_eval(&ev, z, w).unwrap();
            let expected = eta.cauchy(z - 0.5, w + 1.0).unwrap();
            assert!((g - expected).norm() < 1e-11 * expected.norm().max(1.0));
        }
    }

    #[test]
    fn product_inputs_factorize() {
        let mu1 = Measure1D::atomic(&[(0.0, 0.4), (1.0, 0.6)]).unwrap();
        let nu1 = Measure1D::atomic(&[(-1.0, 0.5), (2.0, 0.5)]).unwrap();
        let mu2 = Measure1D::atomic(&[(0.5, 0.3), (-0.5, 0.7)]).unwrap();
        let nu2 = Measure1D::atomic(&[(0.0, 0.9), (1.0, 0.1)]).unwrap();
        let ev = evaluator(
            PlanarMeasure::product(&mu1, &nu1).unwrap(),
            PlanarMeasure::product(&mu2, &nu2).unwrap(),
        );
        let (z, w) = (c(0.3, 0.4), c(-0.7, 1.1));
        let (g, _) = bifree_eval(&ev, z, w).unwrap();
        let expected = ev.left().eval(z).unwrap() * ev.right().eval(w).unwrap();
        assert!((g - expected).norm() < 1e-11);
    }

    #[test]
    fn conjugate_region_by_symmetry() {
        let ev = evaluator(example(), skewed());
        let (z, w) = (c(0.3, 0.4), c(-0.7, 1.1));
        let (g, d) = bifree_eval(&ev, z, w).unwrap();
        let (gc, dc) = bifree_eval(&ev, z.conj(), w.conj()).unwrap();
        assert!((gc - g.conj()).norm() < 1e-15);
        assert!(!d.experimental && !dc.experimental);
        let (_, mixed) = bifree_eval(&ev, z, w.conj()).unwrap();
        assert!(mixed.experimental);
    }

    #[test]
    fn assembly_identity_residual() {
        let ev = evaluator(example(), skewed());
        let (g, d) = bifree_eval(&ev, c(0.5, 0.3), c(0.2, 0.8)).unwrap();
        let residual = g * (d.g1.inv() + d.g2.inv()) - g / (d.gmu * d.gnu) - 1.0;
        assert!(residual.norm() < 1e-9);
    }

    #[test]
    fn pi1_forms_agree() {
        let ev = evaluator(example(), skewed());
        let (z, w) = (c(0.0, 2.0), c(0.0, 2.0));
        let p = pi1(&ev, z, c(1.0, 0.0), w).unwrap();
        let (g, d) = bifree_eval(&ev, z, w).unwrap();
        assert!((p - g / d.g1).norm() < 1e-9);
        assert_eq!(pi1(&ev, z, c(0.0, 0.0), w).unwrap(), c(0.0, 0.0));
        let identity = evaluator(example(), PlanarMeasure::dirac(0.0, 0.0));
        let zeta = c(0.7, -0.2);
        assert!((pi1(&identity, z, zeta, w).unwrap() - zeta).norm() < 1e-12);
    }

    #[test]
    fn bound_slack_is_nonnegative() {
        let ev = evaluator(example(), example());
        assert!(bound_check(&ev, c(1.0, 1.0), c(1.0, 1.0)).unwrap() >= -1e-10);
        let trivial = evaluator(
            PlanarMeasure::dirac(0.0, 0.0),
            PlanarMeasure::dirac(0.0, 0.0),
        );
        assert!(
            bound_check(&trivial, c(0.3, 0.5), c(-1.0, 2.0))
                .unwrap()
                .abs()
                < 1e-14
        );
    }

    #[test]
    fn generic_smoothing_matches_the_face_cached_one() {
        let ev = evaluator(example(), skewed());
        let (xs, ys) = ([0.1, 0.8, 1.9], [-0.3, 0.6]);
        let a = density2d_smoothed(&ev, &xs, &ys, 0.05, 0.05).unwrap();
        let b =
            double_poisson_smoothing(|z, w| Ok(bifree_eval(&ev, z, w)?.0), &xs, &ys, 0.05, 0.05)
                .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn contour_moments_match_series() {
        let ev = evaluator(example(), skewed());
        let m = ev.mixed_moments(3, crate::contour::DEFAULT_NODES).unwrap();
        let expected = crate::series::bifree_convolve_moments(
            &example().mixed_moments(3),
            &skewed().mixed_moments(3),
            3,
        )
        .unwrap();
        assert!(m.max_relative_difference(&expected) < 1e-8, "{m:?}");
    }

    #[test]
    fn atoms_of_example_self_convolution() {
        let atoms = bifree_atoms(&example(), &example(), &SolverConfig::default()).unwrap();
        assert_eq!(atoms.len(), 1);
        let (atom, diag) = atoms[0];
        assert_eq!((atom.x, atom.y), (2.0, 2.0));
        assert!((atom.mass - 0.5).abs() < 1e-12);
        assert!((diag.analytic - 0.5).abs() < 1e-6, "{}", diag.analytic);
    }

    #[test]
    fn atoms_of_point_masses() {
        let atoms = bifree_atoms(
            &PlanarMeasure::dirac(1.0, 2.0),
            &PlanarMeasure::dirac(-3.0, 0.5),
            &SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0].0, PlanarAtom::new(-2.0, 2.5, 1.0));
    }

    #[test]
    fn smoothing_of_a_point_mass() {
        let ev = evaluator(
            PlanarMeasure::dirac(1.0, 1.0),
            PlanarMeasure::dirac(0.0, 0.0),
        );
        let (eps, delta) = (1e-2, 2e-2);
        let d = density2d_smoothed(&ev, &[1.0], &[1.0], eps, delta).unwrap();
        let expected = 1.0 / (std::f64::consts::PI.powi(2) * eps * delta);
        assert!((d.values[0][0] / expected - 1.0).abs() < 1e-9);
        assert!(d.experimental);
    }

    #[test]
    fn matrix_transform_examples() {
        let m = matrix_cauchy_2x2(
            &example(),
            &UpperTriangular2::new(c(2.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)),
        )
        .unwrap();
        assert!((m.z - c(0.9375, 0.0)).norm() < 1e-15);
        assert!((m.zeta - c(-0.84375, 0.0)).norm() < 1e-15);
        assert!((m.w - c(0.875, 0.0)).norm() < 1e-15);
        let arg = UpperTriangular2::new(c(0.3, 1.0), c(0.5, 0.2), c(-0.4, 0.7));
        let origin = matrix_cauchy_2x2(&PlanarMeasure::dirac(0.0, 0.0), &arg).unwrap();
        assert!((origin.zeta + arg.zeta / (arg.z * arg.w)).norm() < 1e-15);
        let mc = matrix_cauchy_2x2(&skewed(), &arg.conj()).unwrap();
        let m = matrix_cauchy_2x2(&skewed(), &arg).unwrap();
        assert!((mc.zeta - m.zeta.conj()).norm() < 1e-15);
    }

    #[test]
    fn matrix_r_of_simple_measures() {
        let r = matrix_r_2x2(&PlanarMeasure::dirac(0.0, 0.0), 3).unwrap();
        assert!(r.corner.rows().iter().flatten().all(|c| c.abs() < 1e-14));
        assert!(r.first.coeffs().iter().all(|c| c.abs() < 1e-14));
        let mu = Measure1D::atomic(&[(0.0, 0.4), (1.0, 0.6)]).unwrap();
        let nu = Measure1D::atomic(&[(-1.0, 0.5), (2.0, 0.5)]).unwrap();
        let r = matrix_r_2x2(&PlanarMeasure::product(&mu, &nu).unwrap(), 4).unwrap();
        assert!(r.corner.rows().iter().flatten().all(|c| c.abs() < 1e-10));
    }
}
