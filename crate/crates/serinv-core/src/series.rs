//! Truncated univariate power series.

use crate::coeff::Coeff;
use crate::error::{InversionError, Result};

/// A power series truncated at a fixed degree (inclusive). `coeffs[j]` holds
/// the coefficient of `z^j`; the length is always `order + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series1<F> {
    coeffs: Vec<F>,
}

impl<F: Coeff> Series1<F> {
    /// Series from an explicit coefficient list; the order is `len - 1`.
    pub fn new(coeffs: Vec<F>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Series1 { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series1 {
            coeffs: vec![F::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = F::one();
        s
    }

    /// The identity series z, at the given order.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order.max(1));
        s.coeffs[1] = F::one();
        s
    }

    pub fn monomial(degree: usize, c: F, order: usize) -> Self {
        assert!(degree <= order);
        let mut s = Self::zero(order);
        s.coeffs[degree] = c;
        s
    }

    /// Build from sparse (degree, coefficient) pairs.
    pub fn from_terms(terms: &[(usize, F)], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (d, c) in terms {
            if *d <= order {
                s.coeffs[*d] = s.coeffs[*d].clone() + c.clone();
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> F {
        self.coeffs.get(j).cloned().unwrap_or_else(F::zero)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Degree of the highest nonzero coefficient, or `None` for the zero
    /// series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Truncate to a lower order (no-op if already at or below it).
    pub fn truncated(&self, order: usize) -> Self {
        let end = order.min(self.order());
        Series1 {
            coeffs: self.coeffs[..=end].to_vec(),
        }
    }

    /// Pad with zero coefficients up to `order` (never truncates). Only
    /// meaningful when the stored coefficients are exact (e.g. the series is
    /// a polynomial).
    pub fn extended(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < order + 1 {
            coeffs.resize(order + 1, F::zero());
        }
        Series1 { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|j| self.coeff(j) + other.coeff(j))
            .collect();
        Series1 { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|j| self.coeff(j) - other.coeff(j))
            .collect();
        Series1 { coeffs }
    }

    pub fn neg(&self) -> Self {
        Series1 {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Series1 {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Cauchy product truncated at the smaller operand order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![F::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Series1 { coeffs }
    }

    /// Truncated ring power.
    pub fn pow(&self, m: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..m {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse by the triangular recurrence. Requires a
    /// nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeff(0);
        let inv0 = a0.inverse().ok_or(InversionError::ZeroConstantTerm)?;
        let order = self.order();
        let mut r = vec![F::zero(); order + 1];
        r[0] = inv0.clone();
        for n in 1..=order {
            let mut acc = F::zero();
            for k in 1..=n {
                let a = self.coeff(k);
                if a.is_zero() {
                    continue;
                }
                acc = acc + a * r[n - k].clone();
            }
            r[n] = -(inv0.clone() * acc);
        }
        Ok(Series1 { coeffs: r })
    }

    /// Composition `self(inner)` in the truncated ring (Horner). The inner
    /// series must vanish at the origin.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeff(0).is_zero() {
            return Err(InversionError::InnerConstantNonzero);
        }
        let order = self.order().min(inner.order());
        let mut acc = Series1::zero(order);
        for j in (0..=self.order()).rev() {
            acc = acc.mul(&inner.truncated(order));
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeff(j);
        }
        Ok(acc)
    }

    /// Term-wise derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = (1..=self.order())
            .map(|j| self.coeff(j) * F::from_int(j as i64))
            .collect();
        Series1 { coeffs }
    }

    /// Multiply by z, raising the order by one.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(F::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Series1 { coeffs }
    }

    /// Evaluate at a point (Horner). Exact for polynomials.
    pub fn eval(&self, z: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.abs_f64())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let order = self.order().max(other.order());
        (0..=order).all(|j| self.coeff(j).approx_eq(&other.coeff(j), tol))
    }

    /// Drop float coefficients below `tol` in absolute value. Explicit only;
    /// arithmetic never cleans up implicitly.
    pub fn cleanup(&self, tol: f64) -> Self {
        Series1 {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    if !F::EXACT && c.abs_f64() < tol {
                        F::zero()
                    } else {
                        c.clone()
                    }
                })
                .collect(),
        }
    }
}
