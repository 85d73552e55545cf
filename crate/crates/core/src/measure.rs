//! Compactly supported probability measures on the line and in the plane,
//! together with their one- and two-variable Cauchy transforms.
//!
//! A measure is a finite list of atoms plus an optional list of quadrature
//! nodes carrying the density part. Every transform is a plain weighted sum
//! over atoms and nodes, so evaluation is exact up to floating point for the
//! atomic part and exactly as accurate as the supplied quadrature for the rest.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::MomentTable2D;

/// A point of the complex plane. Used for every spectral argument.
pub type ComplexPoint = Complex64;

/// Tolerance on the total mass of a probability measure.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Atoms closer than this are merged at construction.
pub const ATOM_MERGE_DISTANCE: f64 = 1e-12;

/// Positions closer than this are treated as the same point when looking up
/// atom masses.
const LOOKUP_DISTANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom1D {
    pub location: f64,
    pub mass: f64,
}

impl Atom1D {
    pub fn new(location: f64, mass: f64) -> Self {
        Self { location, mass }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarAtom {
    pub x: f64,
    pub y: f64,
    pub mass: f64,
}

impl PlanarAtom {
    pub fn new(x: f64, y: f64, mass: f64) -> Self {
        Self { x, y, mass }
    }
}

/// Construction options shared by [`Measure1D`] and [`PlanarMeasure`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MeasureOptions {
    /// Rescale all weights so the total mass is exactly one instead of
    /// rejecting inputs whose mass is off by more than [`MASS_TOLERANCE`].
    pub renormalize: bool,
    /// Declared support interval. Computed from atoms and nodes when absent.
    pub support: Option<(f64, f64)>,
}

impl MeasureOptions {
    pub fn renormalized() -> Self {
        Self {
            renormalize: true,
            support: None,
        }
    }
}

fn check_finite(value: f64, what: &str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidMeasure(format!("{what} is not finite")))
    }
}

fn normalize_total(total: f64, renormalize: bool) -> Result<f64> {
    if !(total > 0.0) {
        return Err(Error::InvalidMeasure("total mass must be positive".into()));
    }
    if renormalize {
        Ok(1.0 / total)
    } else if (total - 1.0).abs() > MASS_TOLERANCE {
        Err(Error::InvalidMeasure(format!(
            "total mass {total} differs from 1 by more than {MASS_TOLERANCE:e}"
        )))
    } else {
        Ok(1.0)
    }
}

/// Probability measure on ℝ: atoms plus quadrature samples of a density.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure1D {
    atoms: Vec<Atom1D>,
    density: Vec<(f64, f64)>,
    support: (f64, f64),
}

impl Measure1D {
    pub fn new(atoms: Vec<Atom1D>, density: Vec<(f64, f64)>) -> Result<Self> {
        Self::with_options(atoms, density, MeasureOptions::default())
    }

    pub fn with_options(
        atoms: Vec<Atom1D>,
        density: Vec<(f64, f64)>,
        options: MeasureOptions,
    ) -> Result<Self> {
        for atom in &atoms {
            check_finite(atom.location, "atom location")?;
            check_finite(atom.mass, "atom mass")?;
            if atom.mass <= 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "atom at {} has non-positive mass {}",
                    atom.location, atom.mass
                )));
            }
        }
        for &(node, weight) in &density {
            check_finite(node, "density node")?;
            check_finite(weight, "density weight")?;
            if weight < 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "negative density weight {weight} at {node}"
                )));
            }
        }
        let total: f64 =
            atoms.iter().map(|a| a.mass).sum::<f64>() + density.iter().map(|d| d.1).sum::<f64>();
        let scale = normalize_total(total, options.renormalize)?;

        let mut atoms: Vec<Atom1D> = atoms
            .into_iter()
            .map(|a| Atom1D::new(a.location, a.mass * scale))
            .collect();
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        let atoms = merge_sorted_atoms(atoms);
        let density: Vec<(f64, f64)> = density
            .into_iter()
            .filter(|d| d.1 > 0.0)
            .map(|(x, w)| (x, w * scale))
            .collect();

        let lo = atoms
            .iter()
            .map(|a| a.location)
            .chain(density.iter().map(|d| d.0))
            .fold(f64::INFINITY, f64::min);
        let hi = atoms
            .iter()
            .map(|a| a.location)
            .chain(density.iter().map(|d| d.0))
            .fold(f64::NEG_INFINITY, f64::max);
        let support = match options.support {
            Some((a, b)) => {
                if !(a <= lo && hi <= b) {
                    return Err(Error::InvalidMeasure(format!(
                        "content [{lo}, {hi}] lies outside declared support [{a}, {b}]"
                    )));
                }
                (a, b)
            }
            None => (lo, hi),
        };
        Ok(Self {
            atoms,
            density,
            support,
        })
    }

    /// Point mass at `x`.
    pub fn dirac(x: f64) -> Self {
        Self {
            atoms: vec![Atom1D::new(x, 1.0)],
            density: Vec::new(),
            support: (x, x),
        }
    }

    /// Purely atomic measure from `(location, mass)` pairs.
    pub fn atomic(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            atoms.iter().map(|&(x, m)| Atom1D::new(x, m)).collect(),
            Vec::new(),
        )
    }

    /// Trapezoid-rule discretisation of `density` on `n` equispaced nodes of
    /// `[a, b]`. The result is renormalised, since the trapezoid sum of a unit
    /// mass density is only approximately one.
    pub fn from_density_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 || !(b > a) {
            return Err(Error::InvalidArgument(
                "trapezoid grid needs n >= 2 and b > a".into(),
            ));
        }
        let h = (b - a) / (n - 1) as f64;
        let density = (0..n)
            .map(|k| {
                let x = a + h * k as f64;
                let end = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                (x, end * h * f(x))
            })
            .collect();
        Self::with_options(
            Vec::new(),
            density,
            MeasureOptions {
                renormalize: true,
                support: Some((a, b)),
            },
        )
    }

    /// Wigner semicircle law with the given center and variance, discretised
    /// by `n`-point Gauss–Chebyshev quadrature of the second kind. Moments up
    /// to order `2n - 1` are reproduced exactly.
    pub fn semicircle(center: f64, variance: f64, n: usize) -> Result<Self> {
        if !(variance > 0.0) || n == 0 {
            return Err(Error::InvalidArgument(
                "semicircle needs positive variance and at least one node".into(),
            ));
        }
        let radius = 2.0 * variance.sqrt();
        let np1 = (n + 1) as f64;
        let mut density: Vec<(f64, f64)> = (1..=n)
            .map(|k| {
                let theta = k as f64 * std::f64::consts::PI / np1;
                let s = theta.sin();
                (center + radius * theta.cos(), 2.0 / np1 * s * s)
            })
            .collect();
        density.reverse();
        Self::with_options(
            Vec::new(),
            density,
            MeasureOptions {
                renormalize: true,
                support: Some((center - radius, center + radius)),
            },
        )
    }

    pub fn atoms(&self) -> &[Atom1D] {
        &self.atoms
    }

    pub fn density(&self) -> &[(f64, f64)] {
        &self.density
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn is_atomic(&self) -> bool {
        self.density.is_empty()
    }

    /// Largest absolute value of a point of the support.
    pub fn radius(&self) -> f64 {
        self.support.0.abs().max(self.support.1.abs())
    }

    /// Mass of the atom at `x`, zero if there is none.
    pub fn mass_at(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .find(|a| (a.location - x).abs() <= LOOKUP_DISTANCE * (1.0 + x.abs()))
            .map_or(0.0, |a| a.mass)
    }

    fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.atoms
            .iter()
            .map(|a| (a.location, a.mass))
            .chain(self.density.iter().copied())
    }

    fn check_pole(&self, z: ComplexPoint) -> Result<()> {
        if z.im == 0.0 && self.points().any(|(x, _)| x == z.re) {
            return Err(Error::PoleAtArgument { re: z.re, im: z.im });
        }
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite argument".into()));
        }
        Ok(())
    }

    /// `G(z) = ∫ dμ(t) / (z - t)`.
    pub fn cauchy(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        self.check_pole(z)?;
        Ok(self.points().map(|(x, m)| m / (z - x)).sum())
    }

    /// `G'(z) = -∫ dμ(t) / (z - t)²`.
    pub fn cauchy_derivative(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        self.check_pole(z)?;
        Ok(-self
            .points()
            .map(|(x, m)| {
                let d = z - x;
                m / (d * d)
            })
            .sum::<ComplexPoint>())
    }

    /// Reciprocal Cauchy transform `F = 1/G`.
    pub fn reciprocal_cauchy(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        let g = self.cauchy(z)?;
        if g == ComplexPoint::new(0.0, 0.0) {
            return Err(Error::PoleAtArgument { re: z.re, im: z.im });
        }
        Ok(g.inv())
    }

    /// `h(z) = 1/G(z) - z` together with `h'(z)`.
    ///
    /// Uses `1 - zG(z) = -∫ t dμ(t)/(z - t)`, which avoids the cancellation
    /// of the naive difference when `|z|` is large.
    pub fn h_with_derivative(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        self.check_pole(z)?;
        let mut g = ComplexPoint::new(0.0, 0.0);
        let mut dg = ComplexPoint::new(0.0, 0.0);
        let mut first = ComplexPoint::new(0.0, 0.0);
        for (x, m) in self.points() {
            let r = (z - x).inv();
            g += m * r;
            dg -= m * r * r;
            first += m * x * r;
        }
        if g == ComplexPoint::new(0.0, 0.0) {
            return Err(Error::PoleAtArgument { re: z.re, im: z.im });
        }
        let h = -first / g;
        let dh = -dg / (g * g) - 1.0;
        Ok((h, dh))
    }

    pub fn h(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        self.h_with_derivative(z).map(|(h, _)| h)
    }

    /// Moments `m_0, …, m_order`.
    pub fn moments(&self, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        for (x, m) in self.points() {
            let mut p = m;
            for slot in out.iter_mut() {
                *slot += p;
                p *= x;
            }
        }
        out
    }

    /// Image of the measure under `x ↦ x + shift`.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom1D::new(a.location + shift, a.mass))
                .collect(),
            density: self.density.iter().map(|&(x, w)| (x + shift, w)).collect(),
            support: (self.support.0 + shift, self.support.1 + shift),
        }
    }
}

fn merge_sorted_atoms(atoms: Vec<Atom1D>) -> Vec<Atom1D> {
    let mut out: Vec<Atom1D> = Vec::with_capacity(atoms.len());
    for atom in atoms {
        match out.last_mut() {
            Some(last) if (atom.location - last.location).abs() < ATOM_MERGE_DISTANCE => {
                last.mass += atom.mass;
            }
            _ => out.push(atom),
        }
    }
    out
}

/// Rectangular grid of density weights; `weights[i][j]` sits at `(x[i], y[j])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    #[serde(rename = "w")]
    pub weights: Vec<Vec<f64>>,
}

impl DensityGrid {
    fn validate(&self) -> Result<()> {
        if self.weights.len() != self.x.len()
            || self.weights.iter().any(|r| r.len() != self.y.len())
        {
            return Err(Error::InvalidMeasure(
                "density grid weights must have shape len(x) × len(y)".into(),
            ));
        }
        for v in self.x.iter().chain(self.y.iter()) {
            check_finite(*v, "grid coordinate")?;
        }
        for w in self.weights.iter().flatten() {
            check_finite(*w, "grid weight")?;
            if *w < 0.0 {
                return Err(Error::InvalidMeasure(format!("negative grid weight {w}")));
            }
        }
        Ok(())
    }

    fn total(&self) -> f64 {
        self.weights.iter().flatten().sum()
    }
}

/// Probability measure on ℝ²: atoms plus an optional rectangular density grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarMeasure {
    atoms: Vec<PlanarAtom>,
    grid: Option<DensityGrid>,
    nodes: Vec<(f64, f64, f64)>,
    support: [(f64, f64); 2],
}

impl PlanarMeasure {
    pub fn new(atoms: Vec<PlanarAtom>, grid: Option<DensityGrid>) -> Result<Self> {
        Self::with_options(atoms, grid, false)
    }

    pub fn with_options(
        atoms: Vec<PlanarAtom>,
        grid: Option<DensityGrid>,
        renormalize: bool,
    ) -> Result<Self> {
        for a in &atoms {
            check_finite(a.x, "atom x")?;
            check_finite(a.y, "atom y")?;
            check_finite(a.mass, "atom mass")?;
            if a.mass <= 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "planar atom at ({}, {}) has non-positive mass {}",
                    a.x, a.y, a.mass
                )));
            }
        }
        if let Some(g) = &grid {
            g.validate()?;
        }
        let total =
            atoms.iter().map(|a| a.mass).sum::<f64>() + grid.as_ref().map_or(0.0, |g| g.total());
        let scale = normalize_total(total, renormalize)?;

        let mut atoms: Vec<PlanarAtom> = atoms
            .into_iter()
            .map(|a| PlanarAtom::new(a.x, a.y, a.mass * scale))
            .collect();
        atoms.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        let mut merged: Vec<PlanarAtom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.iter_mut().find(|m| {
                (m.x - a.x).abs() < ATOM_MERGE_DISTANCE && (m.y - a.y).abs() < ATOM_MERGE_DISTANCE
            }) {
                Some(m) => m.mass += a.mass,
                None => merged.push(a),
            }
        }
        let grid = grid.map(|mut g| {
            g.weights.iter_mut().flatten().for_each(|w| *w *= scale);
            g
        });
        let nodes: Vec<(f64, f64, f64)> = grid
            .as_ref()
            .map(|g| {
                g.x.iter()
                    .enumerate()
                    .flat_map(|(i, &x)| {
                        g.y.iter()
                            .enumerate()
                            .map(move |(j, &y)| (x, y, g.weights[i][j]))
                    })
                    .filter(|n| n.2 > 0.0)
                    .collect()
            })
            .unwrap_or_default();

        let mut support = [(f64::INFINITY, f64::NEG_INFINITY); 2];
        for (x, y) in merged
            .iter()
            .map(|a| (a.x, a.y))
            .chain(nodes.iter().map(|n| (n.0, n.1)))
        {
            support[0] = (support[0].0.min(x), support[0].1.max(x));
            support[1] = (support[1].0.min(y), support[1].1.max(y));
        }
        Ok(Self {
            atoms: merged,
            grid,
            nodes,
            support,
        })
    }

    pub fn dirac(x: f64, y: f64) -> Self {
        Self {
            atoms: vec![PlanarAtom::new(x, y, 1.0)],
            grid: None,
            nodes: Vec::new(),
            support: [(x, x), (y, y)],
        }
    }

    /// Purely atomic measure from `(x, y, mass)` triples.
    pub fn atomic(atoms: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(
            atoms
                .iter()
                .map(|&(x, y, m)| PlanarAtom::new(x, y, m))
                .collect(),
            None,
        )
    }

    /// Product measure `μ × ν`. Atomic factors give atoms, density factors
    /// give a grid; mixing an atomic factor with a density factor would
    /// produce a line measure, which this representation does not hold.
    pub fn product(mu: &Measure1D, nu: &Measure1D) -> Result<Self> {
        let mixed = (!mu.atoms.is_empty() && !nu.density.is_empty())
            || (!mu.density.is_empty() && !nu.atoms.is_empty());
        if mixed {
            return Err(Error::InvalidArgument(
                "product of an atomic and a density factor is not representable".into(),
            ));
        }
        let atoms = mu
            .atoms
            .iter()
            .flat_map(|a| {
                nu.atoms
                    .iter()
                    .map(move |b| PlanarAtom::new(a.location, b.location, a.mass * b.mass))
            })
            .collect();
        let grid = if mu.density.is_empty() {
            None
        } else {
            Some(DensityGrid {
                x: mu.density.iter().map(|d| d.0).collect(),
                y: nu.density.iter().map(|d| d.0).collect(),
                weights: mu
                    .density
                    .iter()
                    .map(|a| nu.density.iter().map(|b| a.1 * b.1).collect())
                    .collect(),
            })
        };
        Self::with_options(atoms, grid, true)
    }

    pub fn atoms(&self) -> &[PlanarAtom] {
        &self.atoms
    }

    pub fn grid(&self) -> Option<&DensityGrid> {
        self.grid.as_ref()
    }

    pub fn support(&self) -> [(f64, f64); 2] {
        self.support
    }

    pub fn is_atomic(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest absolute coordinate of the support along each axis.
    pub fn radii(&self) -> (f64, f64) {
        let [(a, b), (c, d)] = self.support;
        (a.abs().max(b.abs()), c.abs().max(d.abs()))
    }

    pub fn mass_at(&self, x: f64, y: f64) -> f64 {
        self.atoms
            .iter()
            .find(|a| {
                (a.x - x).abs() <= LOOKUP_DISTANCE * (1.0 + x.abs())
                    && (a.y - y).abs() <= LOOKUP_DISTANCE * (1.0 + y.abs())
            })
            .map_or(0.0, |a| a.mass)
    }

    fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.atoms
            .iter()
            .map(|a| (a.x, a.y, a.mass))
            .chain(self.nodes.iter().copied())
    }

    /// `G(z, w) = ∫ dη(t, s) / ((z - t)(w - s))`.
    pub fn cauchy(&self, z: ComplexPoint, w: ComplexPoint) -> Result<ComplexPoint> {
        if !(z.re.is_finite() && z.im.is_finite() && w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite argument".into()));
        }
        let mut acc = ComplexPoint::new(0.0, 0.0);
        for (x, y, m) in self.points() {
            if (z.im == 0.0 && z.re == x) || (w.im == 0.0 && w.re == y) {
                return Err(Error::PoleAtArgument {
                    re: if z.im == 0.0 && z.re == x { z.re } else { w.re },
                    im: 0.0,
                });
            }
            acc += m / ((z - x) * (w - y));
        }
        Ok(acc)
    }

    /// Projections onto the first and second coordinate.
    pub fn marginals(&self) -> (Measure1D, Measure1D) {
        let first_atoms = self
            .atoms
            .iter()
            .map(|a| Atom1D::new(a.x, a.mass))
            .collect();
        let second_atoms = self
            .atoms
            .iter()
            .map(|a| Atom1D::new(a.y, a.mass))
            .collect();
        let (first_density, second_density) = match &self.grid {
            Some(g) => (
                g.x.iter()
                    .zip(&g.weights)
                    .map(|(&x, row)| (x, row.iter().sum()))
                    .collect(),
                g.y.iter()
                    .enumerate()
                    .map(|(j, &y)| (y, g.weights.iter().map(|row| row[j]).sum()))
                    .collect(),
            ),
            None => (Vec::new(), Vec::new()),
        };
        // The planar measure already has unit mass; projection only reorders
        // the same weights, so renormalisation here is a rounding correction.
        let opts = MeasureOptions::renormalized();
        let first = Measure1D::with_options(first_atoms, first_density, opts)
            .expect("projection of a valid planar measure");
        let second = Measure1D::with_options(second_atoms, second_density, opts)
            .expect("projection of a valid planar measure");
        (first, second)
    }

    /// Mixed moments `∫ t^m s^n dη` for `m, n ≤ max_order`.
    pub fn mixed_moments(&self, max_order: usize) -> MomentTable2D {
        let n = max_order + 1;
        let mut table = vec![vec![0.0; n]; n];
        let mut xs = vec![0.0; n];
        let mut ys = vec![0.0; n];
        for (x, y, m) in self.points() {
            xs[0] = 1.0;
            ys[0] = 1.0;
            for k in 1..n {
                xs[k] = xs[k - 1] * x;
                ys[k] = ys[k - 1] * y;
            }
            for (i, row) in table.iter_mut().enumerate() {
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot += m * xs[i] * ys[j];
                }
            }
        }
        MomentTable2D::new(table).expect("moment table of a probability measure")
    }

    /// Image under `(x, y) ↦ (x + a, y + b)`.
    pub fn shifted(&self, a: f64, b: f64) -> Self {
        let grid = self.grid.as_ref().map(|g| DensityGrid {
            x: g.x.iter().map(|x| x + a).collect(),
            y: g.y.iter().map(|y| y + b).collect(),
            weights: g.weights.clone(),
        });
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|p| PlanarAtom::new(p.x + a, p.y + b, p.mass))
                .collect(),
            grid,
            nodes: self
                .nodes
                .iter()
                .map(|&(x, y, m)| (x + a, y + b, m))
                .collect(),
            support: [
                (self.support[0].0 + a, self.support[0].1 + a),
                (self.support[1].0 + b, self.support[1].1 + b),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    fn example_eta() -> PlanarMeasure {
        PlanarMeasure::atomic(&[(1.0, 1.0, 0.75), (0.0, 0.0, 0.125), (1.0, 0.0, 0.125)]).unwrap()
    }

    #[test]
    fn dirac_at_origin() {
        let g = Measure1D::dirac(0.0).cauchy(c(0.0, 1.0)).unwrap();
        assert!((g - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn symmetric_bernoulli() {
        let mu = Measure1D::atomic(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let g = mu.cauchy(c(0.0, 2.0)).unwrap();
        assert!((g - c(0.0, -0.4)).norm() < 1e-15);
    }

    #[test]
    fn example_marginal_on_real_axis() {
        let mu = Measure1D::atomic(&[(0.0, 0.125), (1.0, 0.875)]).unwrap();
        let g = mu.cauchy(c(2.0, 0.0)).unwrap();
        assert!((g.re - 0.9375).abs() < 1e-15 && g.im == 0.0);
    }

    #[test]
    fn pole_at_atom() {
        let mu = Measure1D::atomic(&[(0.0, 0.5), (1.0, 0.5)]).unwrap();
        assert!(matches!(
            mu.cauchy(c(1.0, 0.0)),
            Err(Error::PoleAtArgument { .. })
        ));
        let eta = example_eta();
        assert!(matches!(
            eta.cauchy(c(0.0, 0.0), c(3.0, 1.0)),
            Err(Error::PoleAtArgument { .. })
        ));
    }

    #[test]
    fn planar_examples() {
        let g = PlanarMeasure::dirac(1.0, 1.0)
            .cauchy(c(2.0, 0.0), c(2.0, 0.0))
            .unwrap();
        assert!((g - c(1.0, 0.0)).norm() < 1e-15);
        let g = example_eta().cauchy(c(2.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!((g.re - 0.84375).abs() < 1e-15);
    }

    #[test]
    fn product_factorises() {
        let mu = Measure1D::atomic(&[(-1.0, 0.3), (0.5, 0.7)]).unwrap();
        let nu = Measure1D::atomic(&[(2.0, 0.6), (0.0, 0.4)]).unwrap();
        let eta = PlanarMeasure::product(&mu, &nu).unwrap();
        let (z, w) = (c(0.3, 0.7), c(-1.0, 0.2));
        let lhs = eta.cauchy(z, w).unwrap();
        let rhs = mu.cauchy(z).unwrap() * nu.cauchy(w).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
        let m = eta.mixed_moments(3);
        let (a, b) = (mu.moments(3), nu.moments(3));
        for i in 0..=3 {
            for j in 0..=3 {
                assert!((m.get(i, j) - a[i] * b[j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn marginals_of_example() {
        let (mu, nu) = example_eta().marginals();
        assert_eq!(
            mu.atoms(),
            &[Atom1D::new(0.0, 0.125), Atom1D::new(1.0, 0.875)]
        );
        assert_eq!(
            nu.atoms(),
            &[Atom1D::new(0.0, 0.25), Atom1D::new(1.0, 0.75)]
        );
        let (mu, nu) = PlanarMeasure::dirac(1.0, 1.0).marginals();
        assert_eq!(mu, Measure1D::dirac(1.0));
        assert_eq!(nu, Measure1D::dirac(1.0));
    }

    #[test]
    fn uniform_grid_has_uniform_marginals() {
        let n = 11;
        let xs: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
        let w = 1.0 / (n * n) as f64;
        let grid = DensityGrid {
            x: xs.clone(),
            y: xs.clone(),
            weights: vec![vec![w; n]; n],
        };
        let eta = PlanarMeasure::new(Vec::new(), Some(grid)).unwrap();
        let (mu, nu) = eta.marginals();
        for (d, e) in mu.density().iter().zip(nu.density()) {
            assert!((d.1 - 1.0 / n as f64).abs() < 1e-15);
            assert_eq!(d, e);
        }
        assert_eq!(mu.support(), (0.0, 1.0));
    }

    #[test]
    fn mixed_moment_examples() {
        let m = PlanarMeasure::dirac(2.0, 3.0).mixed_moments(2);
        assert_eq!(m.get(1, 1), 6.0);
        assert_eq!(m.get(0, 0), 1.0);
        assert!((example_eta().mixed_moments(2).get(1, 1) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn validation_and_merging() {
        assert!(Measure1D::atomic(&[(0.0, 0.5), (1.0, 0.4)]).is_err());
        assert!(Measure1D::atomic(&[(0.0, 1.5), (1.0, -0.5)]).is_err());
        let mu = Measure1D::with_options(
            vec![Atom1D::new(0.0, 1.0), Atom1D::new(1.0, 1.0)],
            Vec::new(),
            MeasureOptions::renormalized(),
        )
        .unwrap();
        assert_eq!(mu.mass_at(1.0), 0.5);
        let mu = Measure1D::atomic(&[(0.0, 0.5), (1e-13, 0.5)]).unwrap();
        assert_eq!(mu.atoms().len(), 1);
        assert!(Measure1D::with_options(
            vec![Atom1D::new(3.0, 1.0)],
            Vec::new(),
            MeasureOptions {
                renormalize: false,
                support: Some((0.0, 1.0))
            }
        )
        .is_err());
    }

    #[test]
    fn h_matches_naive_difference() {
        let mu = Measure1D::atomic(&[(-1.0, 0.2), (0.5, 0.3), (2.0, 0.5)]).unwrap();
        let z = c(0.4, 1.3);
        let (h, dh) = mu.h_with_derivative(z).unwrap();
        let naive = mu.cauchy(z).unwrap().inv() - z;
        assert!((h - naive).norm() < 1e-14);
        let eps = 1e-6;
        let fd = (mu.h(z + eps).unwrap() - mu.h(z - eps).unwrap()) / (2.0 * eps);
        assert!((dh - fd).norm() < 1e-8);
    }

    #[test]
    fn semicircle_quadrature_moments() {
        let s = Measure1D::semicircle(0.0, 1.0, 40).unwrap();
        let m = s.moments(8);
        let expected = [1.0, 0.0, 1.0, 0.0, 2.0, 0.0, 5.0, 0.0, 14.0];
        for (a, b) in m.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}
