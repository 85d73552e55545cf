//! Moments read off a Cauchy transform from its expansion at infinity.
//!
//! On a circle `|z| = r` outside the support, `G(z) z^{k+1}` has mean value
//! `m_k`, so the trapezoidal rule on `N` equally spaced nodes returns `m_k`
//! up to an aliasing error of order `(R/r)^N` where `R` is the support
//! radius. Rounding contributes roughly `ε·(r/R)^k` relative error, so the
//! radius is kept a small multiple of the support radius.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::ComplexPoint;
use crate::series::MomentTable2D;

/// Default number of trapezoidal nodes on each circle.
pub const DEFAULT_NODES: usize = 64;

/// Contour radius for a support of the given radius.
pub fn contour_radius(support_radius: f64) -> f64 {
    2.0 * support_radius.max(0.5)
}

fn nodes(radius: f64, n: usize) -> Vec<ComplexPoint> {
    (0..n)
        .map(|l| {
            let theta = std::f64::consts::TAU * (l as f64 + 0.5) / n as f64;
            ComplexPoint::from_polar(radius, theta)
        })
        .collect()
}

fn check_nodes(n: usize, order: usize) -> Result<()> {
    if n < 2 * (order + 1) || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "{n} contour nodes cannot resolve moments up to order {order}"
        )));
    }
    Ok(())
}

/// Moments `m_0 … m_order` of a real measure from its Cauchy transform,
/// sampled only on the upper half of the circle and mirrored by `G(z̄) = conj G(z)`.
pub fn moments_from_cauchy<G>(g: G, radius: f64, order: usize, n: usize) -> Result<Vec<f64>>
where
    G: Fn(ComplexPoint) -> Result<ComplexPoint> + Sync,
{
    check_nodes(n, order)?;
    let upper: Vec<ComplexPoint> = nodes(radius, n).into_iter().take(n / 2).collect();
    let values = upper
        .par_iter()
        .map(|&z| g(z))
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![0.0; order + 1];
    for (z, gz) in upper.iter().zip(values) {
        let mut p = gz * z;
        for slot in out.iter_mut() {
            *slot += p.re;
            p *= z;
        }
    }
    Ok(out.into_iter().map(|s| 2.0 * s / n as f64).collect())
}

/// Trapezoidal nodes `r·e^{iθ_l}`, `θ_l = 2π(l + ½)/n`. The first `n/2`
/// nodes lie in the upper half-plane and the rest are their conjugates.
pub fn circle_nodes(radius: f64, n: usize) -> Vec<ComplexPoint> {
    nodes(radius, n)
}

/// Mixed moments up to `order` per variable from samples of a two-variable
/// Cauchy transform: `values[l][k] = G(zs[l], ws[k])` for the upper-half
/// nodes `zs` (the first `n/2` of [`circle_nodes`]) and all nodes `ws`.
/// The remaining samples follow from `G(z̄, w̄) = conj G(z, w)`.
pub fn mixed_moments_from_samples(
    zs: &[ComplexPoint],
    ws: &[ComplexPoint],
    values: &[Vec<ComplexPoint>],
    order: usize,
) -> Result<MomentTable2D> {
    let n = ws.len();
    check_nodes(n, order)?;
    if zs.len() * 2 != n || values.len() != zs.len() || values.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument(
            "sample table does not match the torus nodes".into(),
        ));
    }
    let mut m = vec![vec![0.0; order + 1]; order + 1];
    for (&z, row_values) in zs.iter().zip(values) {
        for (&w, &gzw) in ws.iter().zip(row_values) {
            let mut zp = gzw * z * w;
            for row in m.iter_mut() {
                let mut p = zp;
                for slot in row.iter_mut() {
                    *slot += p.re;
                    p *= w;
                }
                zp *= z;
            }
        }
    }
    let scale = 2.0 / (n * n) as f64;
    MomentTable2D::from_estimates(
        m.into_iter()
            .map(|row| row.into_iter().map(|s| s * scale).collect())
            .collect(),
    )
}

/// Mixed moments up to `order` per variable from a two-variable Cauchy
/// transform sampled on a torus of radii `radii`. Points with the two
/// imaginary parts of opposite sign are needed, so `g` must be valid there.
pub fn mixed_moments_from_cauchy<G>(
    g: G,
    radii: (f64, f64),
    order: usize,
    n: usize,
) -> Result<MomentTable2D>
where
    G: Fn(ComplexPoint, ComplexPoint) -> Result<ComplexPoint> + Sync,
{
    check_nodes(n, order)?;
    let zs: Vec<ComplexPoint> = nodes(radii.0, n).into_iter().take(n / 2).collect();
    let ws = nodes(radii.1, n);
    let values = zs
        .par_iter()
        .map(|&z| ws.iter().map(|&w| g(z, w)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    mixed_moments_from_samples(&zs, &ws, &values, order)
}
