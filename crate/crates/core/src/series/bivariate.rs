use std::ops::{Add, Mul, Neg, Sub};

use super::{Scalar, Series1};
use crate::error::{Error, Result};

/// Power series `Σ c_{ij} z^i w^j` truncated to `i ≤ orders.0`, `j ≤ orders.1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series2<T: Scalar = f64> {
    coeffs: Vec<Vec<T>>,
}

impl<T: Scalar> Series2<T> {
    pub fn new(coeffs: Vec<Vec<T>>) -> Self {
        assert!(
            !coeffs.is_empty()
                && !coeffs[0].is_empty()
                && coeffs.iter().all(|r| r.len() == coeffs[0].len()),
            "bivariate series needs a non-empty rectangular coefficient table"
        );
        Self { coeffs }
    }

    pub fn zero(orders: (usize, usize)) -> Self {
        Self::new(vec![vec![T::zero(); orders.1 + 1]; orders.0 + 1])
    }

    pub fn constant(c: T, orders: (usize, usize)) -> Self {
        let mut s = Self::zero(orders);
        s.coeffs[0][0] = c;
        s
    }

    pub fn one(orders: (usize, usize)) -> Self {
        Self::constant(T::one(), orders)
    }

    /// Embed a series in `z` as a bivariate series independent of `w`.
    pub fn from_z(s: &Series1<T>, orders: (usize, usize)) -> Self {
        let mut out = Self::zero(orders);
        for i in 0..=orders.0 {
            out.coeffs[i][0] = s.coeff(i);
        }
        out
    }

    /// Embed a series in `w` as a bivariate series independent of `z`.
    pub fn from_w(s: &Series1<T>, orders: (usize, usize)) -> Self {
        let mut out = Self::zero(orders);
        for j in 0..=orders.1 {
            out.coeffs[0][j] = s.coeff(j);
        }
        out
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.coeffs.len() - 1, self.coeffs[0].len() - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.coeffs
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.coeffs
    }

    pub fn with_orders(&self, orders: (usize, usize)) -> Self {
        Self::new(
            (0..=orders.0)
                .map(|i| (0..=orders.1).map(|j| self.get(i, j)).collect())
                .collect(),
        )
    }

    /// `self(z, 0)` as a series in `z`.
    pub fn restrict_w_zero(&self) -> Series1<T> {
        Series1::new(self.coeffs.iter().map(|r| r[0].clone()).collect())
    }

    /// `self(0, w)` as a series in `w`.
    pub fn restrict_z_zero(&self) -> Series1<T> {
        Series1::new(self.coeffs[0].clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|r| r.iter().map(|a| a.clone() * c.clone()).collect())
                .collect(),
        )
    }

    /// `1 / self`, requiring an invertible constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let a00 = self.coeffs[0][0].clone();
        if a00.is_zero() {
            return Err(Error::NonInvertible(
                "bivariate reciprocal needs a nonzero constant term",
            ));
        }
        let (n1, n2) = self.orders();
        let inv = T::one() / a00;
        let mut b = vec![vec![T::zero(); n2 + 1]; n1 + 1];
        for i in 0..=n1 {
            for j in 0..=n2 {
                if i == 0 && j == 0 {
                    b[0][0] = inv.clone();
                    continue;
                }
                let mut acc = T::zero();
                for k in 0..=i {
                    for l in 0..=j {
                        if k == 0 && l == 0 {
                            continue;
                        }
                        acc = acc + self.coeffs[k][l].clone() * b[i - k][j - l].clone();
                    }
                }
                b[i][j] = -(acc * inv.clone());
            }
        }
        Ok(Self::new(b))
    }

    /// `self(u(z), v(w))` for series `u`, `v` with zero constant term.
    pub fn compose_coordinatewise(&self, u: &Series1<T>, v: &Series1<T>) -> Result<Self> {
        if !u.coeff(0).is_zero() || !v.coeff(0).is_zero() {
            return Err(Error::NonInvertible(
                "coordinatewise substitution needs inner series with zero constant term",
            ));
        }
        let (n1, n2) = self.orders();
        let powers = |s: &Series1<T>, n: usize| -> Vec<Series1<T>> {
            let s = s.with_order(n);
            let mut out = vec![Series1::one(n)];
            for k in 1..=n {
                let next = &out[k - 1] * &s;
                out.push(next);
            }
            out
        };
        let up = powers(u, n1);
        let vp = powers(v, n2);
        // out[a][b] = Σ_{i,j} c_ij [z^a] u^i [w^b] v^j, done as two matrix products.
        let mut partial = vec![vec![T::zero(); n2 + 1]; n1 + 1];
        for (i, row) in self.coeffs.iter().enumerate() {
            for b in 0..=n2 {
                let mut acc = T::zero();
                for (j, c) in row.iter().enumerate() {
                    acc = acc + c.clone() * vp[j].coeff(b);
                }
                partial[i][b] = acc;
            }
        }
        let mut out = vec![vec![T::zero(); n2 + 1]; n1 + 1];
        for (a, out_row) in out.iter_mut().enumerate() {
            for (b, slot) in out_row.iter_mut().enumerate() {
                let mut acc = T::zero();
                for (i, prow) in partial.iter().enumerate() {
                    acc = acc + up[i].coeff(a) * prow[b].clone();
                }
                *slot = acc;
            }
        }
        Ok(Self::new(out))
    }

    /// Division by `zw`. Every coefficient with `i = 0` or `j = 0` must vanish
    /// to within `tol` in absolute value (as judged by `is_small`); both
    /// orders drop by one.
    pub fn divide_by_zw(&self, is_small: impl Fn(&T) -> bool) -> Result<Self> {
        let (n1, n2) = self.orders();
        if n1 == 0 || n2 == 0 {
            return Err(Error::NonInvertible("division by zw of an order-0 series"));
        }
        let edge_ok =
            self.coeffs[0].iter().all(&is_small) && self.coeffs.iter().all(|r| is_small(&r[0]));
        if !edge_ok {
            return Err(Error::NonInvertible(
                "division by zw needs vanishing edge coefficients",
            ));
        }
        Ok(Self::new(
            self.coeffs[1..].iter().map(|r| r[1..].to_vec()).collect(),
        ))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Series2<U> {
        Series2::new(
            self.coeffs
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        )
    }

    fn common_orders(&self, other: &Self) -> (usize, usize) {
        let (a, b) = self.orders();
        let (c, d) = other.orders();
        (a.min(c), b.min(d))
    }
}

impl<T: Scalar> Add for &Series2<T> {
    type Output = Series2<T>;
    fn add(self, rhs: Self) -> Series2<T> {
        let (n1, n2) = self.common_orders(rhs);
        Series2::new(
            (0..=n1)
                .map(|i| (0..=n2).map(|j| self.get(i, j) + rhs.get(i, j)).collect())
                .collect(),
        )
    }
}

impl<T: Scalar> Sub for &Series2<T> {
    type Output = Series2<T>;
    fn sub(self, rhs: Self) -> Series2<T> {
        let (n1, n2) = self.common_orders(rhs);
        Series2::new(
            (0..=n1)
                .map(|i| (0..=n2).map(|j| self.get(i, j) - rhs.get(i, j)).collect())
                .collect(),
        )
    }
}

impl<T: Scalar> Mul for &Series2<T> {
    type Output = Series2<T>;
    fn mul(self, rhs: Self) -> Series2<T> {
        let (n1, n2) = self.common_orders(rhs);
        let mut out = vec![vec![T::zero(); n2 + 1]; n1 + 1];
        for i in 0..=n1 {
            for j in 0..=n2 {
                let a = &self.coeffs[i][j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..=n1 - i {
                    for l in 0..=n2 - j {
                        out[i + k][j + l] =
                            out[i + k][j + l].clone() + a.clone() * rhs.coeffs[k][l].clone();
                    }
                }
            }
        }
        Series2::new(out)
    }
}

impl<T: Scalar> Neg for &Series2<T> {
    type Output = Series2<T>;
    fn neg(self) -> Series2<T> {
        self.map(|c| -c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    #[test]
    fn reciprocal_of_one_minus_z_minus_w() {
        let mut s = Series2::<Q>::one((4, 4));
        let mut c = s.rows().to_vec();
        c[1][0] = Q::from_integer(-1);
        c[0][1] = Q::from_integer(-1);
        s = Series2::new(c);
        let r = s.reciprocal().unwrap();
        // 1/(1 - z - w) = Σ binom(i+j, i) z^i w^j
        assert_eq!(r.get(2, 2), Q::from_integer(6));
        assert_eq!(r.get(3, 1), Q::from_integer(4));
        let p = &s * &r;
        assert_eq!(p, Series2::one((4, 4)));
    }

    #[test]
    fn coordinatewise_composition_of_product() {
        let a = Series1::<f64>::new(vec![1.0, 2.0, 3.0, 0.5]);
        let b = Series1::new(vec![-1.0, 0.5, 0.0, 1.0]);
        let u = Series1::new(vec![0.0, 1.0, -0.5, 0.25]);
        let v = Series1::new(vec![0.0, 2.0, 1.0, 0.0]);
        let prod = &Series2::from_z(&a, (3, 3)) * &Series2::from_w(&b, (3, 3));
        let lhs = prod.compose_coordinatewise(&u, &v).unwrap();
        let rhs = &Series2::from_z(&a.compose(&u).unwrap(), (3, 3))
            * &Series2::from_w(&b.compose(&v).unwrap(), (3, 3));
        for i in 0..=3 {
            for j in 0..=3 {
                assert!((lhs.get(i, j) - rhs.get(i, j)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn divide_by_zw_checks_edges() {
        let s = Series2::<f64>::new(vec![vec![0.0, 0.0], vec![0.0, 3.0]]);
        assert_eq!(
            s.divide_by_zw(|c: &f64| c.abs() < 1e-14).unwrap().get(0, 0),
            3.0
        );
        let s = Series2::<f64>::new(vec![vec![0.0, 1.0], vec![0.0, 3.0]]);
        assert!(s.divide_by_zw(|c: &f64| c.abs() < 1e-14).is_err());
    }
}
