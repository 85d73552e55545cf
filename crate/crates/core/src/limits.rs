//! Boundary limits of Cauchy transforms, used to read atom masses
//! analytically and to cross-check the algebraic mass laws.

use crate::error::{Error, Result};
use crate::measure::ComplexPoint;

/// Default ladder of imaginary parts for atom limits.
pub const ATOM_LADDER: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];

/// Value at `y = 0` of the interpolating polynomial through `(y_k, f_k)`,
/// by Neville's scheme.
pub fn extrapolate_to_zero(ys: &[f64], values: &[ComplexPoint]) -> Result<ComplexPoint> {
    if ys.is_empty() || ys.len() != values.len() {
        return Err(Error::InvalidArgument(
            "extrapolation needs matching, non-empty node and value lists".into(),
        ));
    }
    let mut p = values.to_vec();
    let n = ys.len();
    for level in 1..n {
        for i in 0..n - level {
            let (a, b) = (ys[i], ys[i + level]);
            p[i] = (p[i + 1] * a - p[i] * b) / (a - b);
        }
    }
    Ok(p[0])
}

/// Decades searched by the sliding-window limits, from `1e-1` to `1e-8`.
pub const DEEP_LADDER: [f64; 8] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];

/// Extrapolation over sliding windows of four consecutive rungs of `ladder`.
/// Returns the estimate whose change from the previous window is smallest,
/// which picks the window that first reaches the asymptotic regime while
/// staying clear of rounding at the smallest `y`. Useful when an atom sits
/// next to continuous mass and `f` only becomes polynomial in `y` late.
pub fn sliding_limit(
    f: impl Fn(f64) -> Result<ComplexPoint>,
    ladder: &[f64],
) -> Result<ComplexPoint> {
    const WINDOW: usize = 4;
    if ladder.len() <= WINDOW {
        return extrapolate_to_zero(
            ladder,
            &ladder.iter().map(|&y| f(y)).collect::<Result<Vec<_>>>()?,
        );
    }
    let values = ladder.iter().map(|&y| f(y)).collect::<Result<Vec<_>>>()?;
    let estimates = (0..=ladder.len() - WINDOW)
        .map(|k| extrapolate_to_zero(&ladder[k..k + WINDOW], &values[k..k + WINDOW]))
        .collect::<Result<Vec<_>>>()?;
    let best = (1..estimates.len())
        .min_by(|&a, &b| {
            let da = (estimates[a] - estimates[a - 1]).norm();
            let db = (estimates[b] - estimates[b - 1]).norm();
            da.total_cmp(&db)
        })
        .unwrap_or(0);
    Ok(estimates[best])
}

/// `lim_{y↓0} iy·G(x + iy)`, the mass of a point `x` under the measure with
/// Cauchy transform `g`.
pub fn atom_mass_limit(
    g: impl Fn(ComplexPoint) -> Result<ComplexPoint>,
    x: f64,
    ladder: &[f64],
) -> Result<f64> {
    let values = ladder
        .iter()
        .map(|&y| Ok(ComplexPoint::new(0.0, y) * g(ComplexPoint::new(x, y))?))
        .collect::<Result<Vec<_>>>()?;
    Ok(extrapolate_to_zero(ladder, &values)?.re)
}

/// `lim_{y↓0} (iy)²·G(x + iy, y₀ + iy)`, the mass of the point `(x, y₀)`
/// under the planar measure with Cauchy transform `g`.
pub fn planar_atom_mass_limit(
    g: impl Fn(ComplexPoint, ComplexPoint) -> Result<ComplexPoint>,
    x: f64,
    y: f64,
    ladder: &[f64],
) -> Result<f64> {
    let values = ladder
        .iter()
        .map(|&s| Ok(-s * s * g(ComplexPoint::new(x, s), ComplexPoint::new(y, s))?))
        .collect::<Result<Vec<_>>>()?;
    Ok(extrapolate_to_zero(ladder, &values)?.re)
}

/// [`planar_atom_mass_limit`] with [`sliding_limit`] over `ladder`.
pub fn planar_atom_mass_sliding_limit(
    g: impl Fn(ComplexPoint, ComplexPoint) -> Result<ComplexPoint>,
    x: f64,
    y: f64,
    ladder: &[f64],
) -> Result<f64> {
    let f = |s: f64| Ok(-s * s * g(ComplexPoint::new(x, s), ComplexPoint::new(y, s))?);
    Ok(sliding_limit(f, ladder)?.re)
}
