//! Coefficient fields for series arithmetic.
//!
//! Two fields are supported: exact rationals (`num::BigRational`) and
//! double-precision floats. Rational mode is the default for inversion work;
//! float mode exists for inputs with irrational coefficients such as
//! `cos(pi/4)`.

use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

/// Default comparison tolerance in float mode.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Threshold below which float coefficients are dropped by explicit cleanup.
pub const CLEANUP_TOL: f64 = 1e-14;

/// A coefficient field. Closed under the ring operations plus inversion of
/// nonzero elements.
pub trait Coeff:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_int(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Multiplicative inverse; `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Equality up to `tol` in float mode; exact equality in rational mode.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Coeff for BigRational {
    const EXACT: bool = true;

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Falls back to a quotient of approximations for huge operands.
            let n = self.numer().to_f64().unwrap_or(f64::INFINITY);
            let d = self.denom().to_f64().unwrap_or(f64::INFINITY);
            n / d
        })
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn abs_f64(&self) -> f64 {
        Coeff::to_f64(&self.abs())
    }
}

impl Coeff for f64 {
    const EXACT: bool = false;

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn inverse(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
}

/// n! as a field element.
pub fn factorial<F: Coeff>(n: usize) -> F {
    let mut acc = F::one();
    for k in 2..=n {
        acc = acc * F::from_int(k as i64);
    }
    acc
}

/// Binomial coefficient C(n, k) as a field element, computed by the
/// multiplicative formula so it stays exact in rational mode.
pub fn binomial<F: Coeff>(n: usize, k: usize) -> F {
    if k > n {
        return F::zero();
    }
    let k = k.min(n - k);
    let mut acc = F::one();
    for i in 1..=k {
        acc = acc * F::from_int((n - k + i) as i64);
        let d = F::from_int(i as i64);
        acc = acc * d.inverse().expect("nonzero divisor");
    }
    acc
}
