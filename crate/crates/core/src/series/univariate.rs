use std::ops::{Add, Mul, Neg, Sub};

use super::Scalar;
use crate::error::{Error, Result};

/// Power series `Σ c_k z^k` truncated after `z^order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series1<T: Scalar = f64> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Series1<T> {
    /// Series from its coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a truncated series has at least one coefficient"
        );
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![T::zero(); order + 1])
    }

    pub fn constant(c: T, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(T::one(), order)
    }

    /// The series `z`.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = T::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// Same series at a different order: truncates or pads with zeros.
    pub fn with_order(&self, order: usize) -> Self {
        Self::new((0..=order).map(|k| self.coeff(k)).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiplication by `z`; the order is kept, so the top coefficient drops.
    pub fn shift_up(&self) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for k in 1..=n {
            out.coeffs[k] = self.coeffs[k - 1].clone();
        }
        out
    }

    /// Division by `z`. Requires a vanishing constant term; the order drops
    /// by one.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonInvertible(
                "division by z needs a zero constant term",
            ));
        }
        if self.order() == 0 {
            return Err(Error::NonInvertible("division by z of an order-0 series"));
        }
        Ok(Self::new(self.coeffs[1..].to_vec()))
    }

    /// `1 / self`, requiring an invertible constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0].clone();
        if a0.is_zero() {
            return Err(Error::NonInvertible(
                "reciprocal needs a nonzero constant term",
            ));
        }
        let n = self.order();
        let inv0 = T::one() / a0.clone();
        let mut b: Vec<T> = Vec::with_capacity(n + 1);
        b.push(inv0.clone());
        for k in 1..=n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * b[k - j].clone();
            }
            b.push(-(acc * inv0.clone()));
        }
        Ok(Self::new(b))
    }

    /// `self(inner(z))`, requiring `inner(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonInvertible(
                "composition needs an inner series with zero constant term",
            ));
        }
        let n = self.order().min(inner.order());
        let inner = inner.with_order(n);
        // Horner: c0 + g(c1 + g(c2 + …))
        let mut acc = Self::constant(self.coeff(n), n);
        for k in (0..n).rev() {
            acc = &(&acc * &inner) + &Self::constant(self.coeff(k), n);
        }
        Ok(acc)
    }

    /// Compositional inverse `g` with `self(g(z)) = z`, by Lagrange inversion.
    /// Requires a zero constant term and an invertible linear term.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonInvertible("reversion needs a zero constant term"));
        }
        let n = self.order();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        if self.coeffs[1].is_zero() {
            return Err(Error::NonInvertible(
                "reversion needs a nonzero linear term",
            ));
        }
        // φ(w) = w / f(w); [z^k] g = (1/k) [w^{k-1}] φ(w)^k
        let phi = self.shift_down()?.reciprocal()?;
        let mut out = Self::zero(n);
        let mut power = Self::one(n - 1);
        for k in 1..=n {
            power = &power * &phi;
            let kk = (0..k).fold(T::zero(), |acc, _| acc + T::one());
            out.coeffs[k] = power.coeff(k - 1) / kk;
        }
        Ok(out)
    }

    /// Evaluate the truncated polynomial at `x`.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Apply `f` to every coefficient.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Series1<U> {
        Series1::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Scalar> Add for &Series1<T> {
    type Output = Series1<T>;
    fn add(self, rhs: Self) -> Series1<T> {
        let n = self.order().min(rhs.order());
        Series1::new(
            (0..=n)
                .map(|k| self.coeffs[k].clone() + rhs.coeffs[k].clone())
                .collect(),
        )
    }
}

impl<T: Scalar> Sub for &Series1<T> {
    type Output = Series1<T>;
    fn sub(self, rhs: Self) -> Series1<T> {
        let n = self.order().min(rhs.order());
        Series1::new(
            (0..=n)
                .map(|k| self.coeffs[k].clone() - rhs.coeffs[k].clone())
                .collect(),
        )
    }
}

impl<T: Scalar> Mul for &Series1<T> {
    type Output = Series1<T>;
    fn mul(self, rhs: Self) -> Series1<T> {
        let n = self.order().min(rhs.order());
        let mut out = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Series1::new(out)
    }
}

impl<T: Scalar> Neg for &Series1<T> {
    type Output = Series1<T>;
    fn neg(self) -> Series1<T> {
        Series1::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}
