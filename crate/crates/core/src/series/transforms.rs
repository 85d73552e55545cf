//! Moment ↔ transform conversions.
//!
//! Every transform is expanded around infinity through the substitution
//! `u = 1/z`. With `M(u) = Σ m_k u^k` the Cauchy transform reads
//! `G(1/u) = u·M(u)`, so the reciprocal of the compositional inverse,
//! `u(z) = 1/K(z)`, is the reversion of `u·M(u)` and `1 + zR(z) = z/u(z)`.
//! Two-variable transforms only ever substitute these marginal series
//! coordinate-wise.

use super::{MomentTable2D, Series1, Series2};
use crate::error::{Error, Result};

/// Default truncation order for one-variable transforms.
pub const DEFAULT_ORDER_1D: usize = 16;
/// Default truncation order (per variable) for two-variable transforms.
pub const DEFAULT_ORDER_2D: usize = 8;

const EDGE_TOLERANCE: f64 = 1e-9;

fn need(moments: &[f64], count: usize) -> Result<()> {
    if moments.len() < count {
        return Err(Error::InvalidArgument(format!(
            "{count} moments required, {} supplied",
            moments.len()
        )));
    }
    if (moments[0] - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(
            "moment sequence must start with m_0 = 1".into(),
        ));
    }
    Ok(())
}

/// `Σ_{k ≤ degree} m_k u^k`.
fn moment_series(moments: &[f64], degree: usize) -> Series1 {
    Series1::new(moments[..=degree].to_vec())
}

/// `u(z) = 1/K(z)` to the given degree, from moments `m_0 … m_{degree-1}`.
fn reciprocal_inverse(moments: &[f64], degree: usize) -> Result<Series1> {
    need(moments, degree.max(1))?;
    let g = moment_series(moments, degree.saturating_sub(1))
        .with_order(degree)
        .shift_up();
    g.reversion()
}

/// `z/u(z) = 1 + zR(z)` to the given degree, from moments `m_0 … m_degree`.
fn one_plus_z_r(moments: &[f64], degree: usize) -> Result<Series1> {
    let u = reciprocal_inverse(moments, degree + 1)?;
    u.shift_down()?.reciprocal()
}

/// Free R-transform `R(z) = K(z) - 1/z` to `z^order`, from the moments
/// `m_0 … m_{order+1}`.
pub fn r_from_moments(moments: &[f64], order: usize) -> Result<Series1> {
    need(moments, order + 2)?;
    one_plus_z_r(moments, order + 1)?
        .with_order(order + 1)
        .shift_down_lossy()
}

/// Moments `m_0 … m_{order+1}` of the measure whose R-transform is `r`.
pub fn moments_from_r(r: &Series1) -> Result<Vec<f64>> {
    let n = r.order();
    let a = &Series1::one(n + 1) + &r.with_order(n + 1).shift_up();
    let g = marginal_g_at_infinity(&a, n + 2)?;
    Ok(g.shift_down()?.coeffs().to_vec())
}

/// From `A(z) = 1 + zR(z)` to the series `u·M(u)` of degree `degree`, which
/// uses the coefficients of `A` up to `z^{degree-1}`.
fn marginal_g_at_infinity(a: &Series1, degree: usize) -> Result<Series1> {
    let utilde = a.with_order(degree.saturating_sub(1)).reciprocal()?;
    let u = utilde.with_order(degree).shift_up();
    u.reversion()
}

/// Moments `m_0 … m_n` of `μ₁ ⊞ μ₂` from those of the factors.
pub fn free_convolve_moments(m1: &[f64], m2: &[f64], n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(vec![1.0]);
    }
    let r = &r_from_moments(m1, n - 1)? + &r_from_moments(m2, n - 1)?;
    moments_from_r(&r)
}

/// Moments `m_0 … m_n` of the free convolution power `μ^{⊞t}`.
pub fn free_power_moments(m: &[f64], t: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(vec![1.0]);
    }
    moments_from_r(&r_from_moments(m, n - 1)?.scale(&t))
}

/// Partial bi-free R-transform
/// `R(z, w) = 1 + zR_μ(z) + wR_ν(w) - zw / G_η(K_μ(z), K_ν(w))`
/// truncated to `z^order`, `w^order`.
pub fn partial_bifree_r(m: &MomentTable2D, order: usize) -> Result<Series2> {
    let table = m.truncated(order)?;
    let orders = (order, order);
    let mu = table.first_marginal();
    let nu = table.second_marginal();
    let a = Series2::from_z(&one_plus_z_r(&mu, order)?, orders);
    let b = Series2::from_w(&one_plus_z_r(&nu, order)?, orders);
    let hc = composed_moment_series(&table, &mu, &nu, order)?;
    let one = Series2::one(orders);
    let r = &(&(&a + &b) - &one) - &(&(&a * &b) * &hc.reciprocal()?);
    Ok(zero_constant(r))
}

/// `H(u(z), v(w))` where `H(u, v) = Σ m_ij u^i v^j`.
fn composed_moment_series(
    table: &MomentTable2D,
    mu: &[f64],
    nu: &[f64],
    order: usize,
) -> Result<Series2> {
    let h = Series2::new(table.rows().to_vec());
    let u = reciprocal_inverse(mu, order)?;
    let v = reciprocal_inverse(nu, order)?;
    h.compose_coordinatewise(&u, &v)
}

fn zero_constant(r: Series2) -> Series2 {
    let mut rows = r.rows().to_vec();
    rows[0][0] = 0.0;
    Series2::new(rows)
}

/// Mixed moments (up to `order` per variable) of the planar measure whose
/// partial bi-free R-transform is `r`.
pub fn moments_from_partial_r(r: &Series2, order: usize) -> Result<MomentTable2D> {
    let orders = (order, order);
    let r = r.with_orders(orders);
    let a1 = &Series1::one(order) + &r.restrict_w_zero();
    let b1 = &Series1::one(order) + &r.restrict_z_zero();
    let gz = marginal_g_at_infinity(&a1, order + 1)?.with_order(order);
    let gw = marginal_g_at_infinity(&b1, order + 1)?.with_order(order);
    let a = Series2::from_z(&a1, orders);
    let b = Series2::from_w(&b1, orders);
    let one = Series2::one(orders);
    let denom = &(&(&a + &b) - &one) - &r;
    let p = &(&a * &b) * &denom.reciprocal()?;
    let h = p.compose_coordinatewise(&gz, &gw)?;
    MomentTable2D::new(h.rows().to_vec())
}

/// Mixed moments of `η₁ ⊞⊞ η₂` through additivity of the partial bi-free
/// R-transform.
pub fn bifree_convolve_moments(
    m1: &MomentTable2D,
    m2: &MomentTable2D,
    order: usize,
) -> Result<MomentTable2D> {
    let r = &partial_bifree_r(m1, order)? + &partial_bifree_r(m2, order)?;
    moments_from_partial_r(&r, order)
}

/// Mixed moments of `η_t`, the member of the partial bi-free convolution
/// semigroup with `R_{η_t} = t·R_η`.
pub fn semigroup_moments(m: &MomentTable2D, t: f64, order: usize) -> Result<MomentTable2D> {
    moments_from_partial_r(&partial_bifree_r(m, order)?.scale(&t), order)
}

/// Conditionally free R-transform `K_μ(z) - 1/G_σ(K_μ(z))` to `z^order`,
/// from `σ` moments up to `order + 1` and `μ` moments up to `order`.
pub fn cfree_r(sigma: &[f64], mu: &[f64], order: usize) -> Result<Series1> {
    need(sigma, order + 2)?;
    let q = cfree_q(sigma, order)?;
    let u = reciprocal_inverse(mu, order)?;
    q.compose(&u)
}

/// `q(u) = (1 - 1/M_σ(u)) / u` to degree `order`.
fn cfree_q(sigma: &[f64], order: usize) -> Result<Series1> {
    let ms = moment_series(sigma, order + 1);
    (&Series1::one(order + 1) - &ms.reciprocal()?).shift_down()
}

/// `σ` moments `m_0 … m_{order+1}` recovered from a conditionally free
/// R-transform of order `order` and the `μ` moments.
pub fn phi_moments_from_cfree_r(rc: &Series1, mu: &[f64]) -> Result<Vec<f64>> {
    let n = rc.order();
    need(mu, n.max(1))?;
    // z(u) = u·M_μ(u)
    let zu = moment_series(mu, n.saturating_sub(1))
        .with_order(n)
        .shift_up();
    let q = rc.compose(&zu)?;
    let uq = q.with_order(n + 1).shift_up();
    let ms = (&Series1::one(n + 1) - &uq).reciprocal()?;
    Ok(ms.coeffs().to_vec())
}

/// Moments (`σ` to order `n`, `μ` to order `n`) of the conditionally free
/// convolution `(σ₁, μ₁) ⊞_c (σ₂, μ₂)`.
pub fn cfree_convolve_moments(
    p1: (&[f64], &[f64]),
    p2: (&[f64], &[f64]),
    n: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Ok((vec![1.0], vec![1.0]));
    }
    let mu = free_convolve_moments(p1.1, p2.1, n)?;
    let rc = &cfree_r(p1.0, p1.1, n - 1)? + &cfree_r(p2.0, p2.1, n - 1)?;
    let sigma = phi_moments_from_cfree_r(&rc, &mu)?;
    Ok((sigma, mu))
}

/// Partial conditionally bi-free R-transform
/// `zR^c_{(σ,μ)}(z) + wR^c_{(τ,ν)}(w) + R̃(z, w)` truncated at `order`.
pub fn partial_cbifree_r(
    theta: &MomentTable2D,
    eta: &MomentTable2D,
    order: usize,
) -> Result<Series2> {
    let orders = (order, order);
    let theta = theta.truncated(order)?;
    let eta = eta.truncated(order)?;
    let (sigma, tau) = (theta.first_marginal(), theta.second_marginal());
    let (mu, nu) = (eta.first_marginal(), eta.second_marginal());

    let marginal_part = |phi: &[f64], psi: &[f64]| -> Result<Series1> {
        if order == 0 {
            return Ok(Series1::zero(0));
        }
        Ok(cfree_r(phi, psi, order - 1)?.with_order(order).shift_up())
    };
    let zrc = Series2::from_z(&marginal_part(&sigma, &mu)?, orders);
    let wrc = Series2::from_w(&marginal_part(&tau, &nu)?, orders);

    // R̃ = A(z)B(w)·[Θ/(M_σ M_τ H) - 1/H](u(z), v(w))
    let a = Series2::from_z(&one_plus_z_r(&mu, order)?, orders);
    let b = Series2::from_w(&one_plus_z_r(&nu, order)?, orders);
    let h_inv = Series2::new(eta.rows().to_vec()).reciprocal()?;
    let th = Series2::new(theta.rows().to_vec());
    let ms_inv = Series2::from_z(&moment_series(&sigma, order).reciprocal()?, orders);
    let mt_inv = Series2::from_w(&moment_series(&tau, order).reciprocal()?, orders);
    let bracket = &(&(&(&th * &ms_inv) * &mt_inv) * &h_inv) - &h_inv;
    let u = reciprocal_inverse(&mu, order)?;
    let v = reciprocal_inverse(&nu, order)?;
    let rtilde = &(&a * &b) * &bracket.compose_coordinatewise(&u, &v)?;
    Ok(zero_constant(&(&zrc + &wrc) + &rtilde))
}

/// `θ` moments recovered from a partial conditionally bi-free R-transform and
/// the mixed moments of the accompanying `η`.
pub fn theta_moments_from_partial_cbifree_r(
    r: &Series2,
    eta: &MomentTable2D,
    order: usize,
) -> Result<MomentTable2D> {
    let orders = (order, order);
    let r = r.with_orders(orders);
    let eta = eta.truncated(order)?;
    let (mu, nu) = (eta.first_marginal(), eta.second_marginal());
    if order == 0 {
        return MomentTable2D::new(vec![vec![1.0]]);
    }
    let zr = r.restrict_w_zero();
    let wr = r.restrict_z_zero();
    let sigma = phi_moments_from_cfree_r(&zr.shift_down()?, &mu)?;
    let tau = phi_moments_from_cfree_r(&wr.shift_down()?, &nu)?;
    let rtilde = &(&r - &Series2::from_z(&zr, orders)) - &Series2::from_w(&wr, orders);

    // Θ = M_σ M_τ (1 + H·R̃(z(u), w(v)) / (M_μ M_ν))
    let zu = moment_series(&mu, order - 1).with_order(order).shift_up();
    let wv = moment_series(&nu, order - 1).with_order(order).shift_up();
    let rt = rtilde.compose_coordinatewise(&zu, &wv)?;
    let h = Series2::new(eta.rows().to_vec());
    let mmu_inv = Series2::from_z(&moment_series(&mu, order).reciprocal()?, orders);
    let mnu_inv = Series2::from_w(&moment_series(&nu, order).reciprocal()?, orders);
    let inner = &Series2::one(orders) + &(&(&(&h * &rt) * &mmu_inv) * &mnu_inv);
    let ms = Series2::from_z(&Series1::new(sigma[..=order].to_vec()), orders);
    let mt = Series2::from_w(&Series1::new(tau[..=order].to_vec()), orders);
    let theta = &(&ms * &mt) * &inner;
    MomentTable2D::new(theta.rows().to_vec())
}

/// Mixed moments `(θ, η)` of the conditionally bi-free convolution of two
/// pairs of moment tables.
pub fn cbifree_convolve_moments(
    p1: (&MomentTable2D, &MomentTable2D),
    p2: (&MomentTable2D, &MomentTable2D),
    order: usize,
) -> Result<(MomentTable2D, MomentTable2D)> {
    let eta = bifree_convolve_moments(p1.1, p2.1, order)?;
    let r = &partial_cbifree_r(p1.0, p1.1, order)? + &partial_cbifree_r(p2.0, p2.1, order)?;
    let theta = theta_moments_from_partial_cbifree_r(&r, &eta, order)?;
    Ok((theta, eta))
}

/// R-transform of `diag(a, b)` restricted to upper triangular arguments
/// `[[z, ζ], [0, w]]`: the diagonal is `(R_μ, R_ν)` and the corner is
/// `ζ·C(z, w)` with `C = (R_η - zR_μ - wR_ν) / (zw)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperTriangularR {
    pub first: Series1,
    pub corner: Series2,
    pub second: Series1,
}

/// [`UpperTriangularR`] with every component truncated at `order`; needs a
/// moment table of order at least `order + 1`.
pub fn upper_triangular_r(m: &MomentTable2D, order: usize) -> Result<UpperTriangularR> {
    let r = partial_bifree_r(m, order + 1)?;
    let orders = (order + 1, order + 1);
    let zr = r.restrict_w_zero();
    let wr = r.restrict_z_zero();
    let rest = &(&r - &Series2::from_z(&zr, orders)) - &Series2::from_w(&wr, orders);
    let corner = rest.divide_by_zw(|c| c.abs() < EDGE_TOLERANCE)?;
    Ok(UpperTriangularR {
        first: zr.shift_down()?,
        corner,
        second: wr.shift_down()?,
    })
}

impl Series1 {
    /// Division by `z` discarding the constant term.
    fn shift_down_lossy(&self) -> Result<Series1> {
        let mut c = self.coeffs().to_vec();
        c[0] = 0.0;
        Series1::new(c).shift_down()
    }
}
