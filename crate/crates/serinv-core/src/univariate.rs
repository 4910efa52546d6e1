//! Local inversion of one analytic function via the raising operator
//! Y = X W(D), W = 1/V'.
//!
//! Iterating Y on the constant polynomial 1 produces the canonical
//! polynomials y_n; the coefficient of x^m/m! in y_n is the coefficient of
//! v^n/n! in U(v)^m, where U is the compositional inverse of V.

use std::collections::BTreeMap;

use crate::coeff::{factorial, Coeff};
use crate::error::{InversionError, Result};
use crate::series::Series1;

/// Which computation route produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Operator,
    Pwq,
    MatrixOp,
    Lagrange,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Operator => "operator",
            Method::Pwq => "pwq",
            Method::MatrixOp => "matrix-op",
            Method::Lagrange => "lagrange",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "operator" => Ok(Method::Operator),
            "pwq" => Ok(Method::Pwq),
            "matrix-op" => Ok(Method::MatrixOp),
            "lagrange" => Ok(Method::Lagrange),
            other => Err(format!("unknown method: {other}")),
        }
    }
}

/// Table of canonical polynomials y_0..y_N. Row k holds the coefficients of
/// y_k(x) in the monomial basis, padded to length N+1.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalBasis<F> {
    order: usize,
    rows: Vec<Vec<F>>,
}

impl<F: Coeff> CanonicalBasis<F> {
    pub fn from_rows(order: usize, rows: Vec<Vec<F>>) -> Self {
        assert_eq!(rows.len(), order + 1);
        assert!(rows.iter().all(|r| r.len() == order + 1));
        CanonicalBasis { order, rows }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient c_j^{(k)} of x^j in y_k.
    pub fn coeff(&self, k: usize, j: usize) -> F {
        self.rows[k].get(j).cloned().unwrap_or_else(F::zero)
    }

    pub fn row(&self, k: usize) -> &[F] {
        &self.rows[k]
    }

    /// y_k as a polynomial in x.
    pub fn polynomial(&self, k: usize) -> Series1<F> {
        Series1::new(self.rows[k].clone())
    }

    /// U(v)^m read from column m: the coefficient of v^n is m! c_m^{(n)} / n!.
    pub fn power_series(&self, m: usize) -> Result<Series1<F>> {
        if m < 1 || m > self.order {
            return Err(InversionError::PowerOutOfRange {
                m,
                max: self.order,
            });
        }
        let m_fact = factorial::<F>(m);
        let mut coeffs = Vec::with_capacity(self.order + 1);
        for n in 0..=self.order {
            let n_fact_inv = factorial::<F>(n).inverse().unwrap();
            coeffs.push(m_fact.clone() * self.coeff(n, m) * n_fact_inv);
        }
        Ok(Series1::new(coeffs))
    }
}

/// A packaged inversion: U(v)^m for each requested power m, with diagnostics.
#[derive(Debug, Clone)]
pub struct InversionResult<F> {
    pub order: usize,
    pub powers: BTreeMap<usize, Series1<F>>,
    pub method: Method,
    /// max |coefficient| of V(U(v)) - v through the order.
    pub residual: f64,
}

impl<F: Coeff> InversionResult<F> {
    pub fn inverse(&self) -> &Series1<F> {
        &self.powers[&1]
    }
}

/// W = 1/V' expanded to `order`. V must be a polynomial with V(0)=0 and
/// V'(0) != 0; any nonzero V'(0) is accepted without rescaling.
pub fn compute_w<F: Coeff>(v: &Series1<F>, order: usize) -> Result<Series1<F>> {
    if !v.coeff(0).is_zero() {
        return Err(InversionError::NotNormalized);
    }
    let d = v.derivative().extended(order);
    if d.coeff(0).is_zero() {
        return Err(InversionError::SingularDerivative);
    }
    d.reciprocal()
}

/// Evaluate the operator a(D) on a polynomial: sum_j a_j y^{(j)}. Exact,
/// since derivatives beyond deg y vanish.
pub fn apply_diff_operator<F: Coeff>(a: &Series1<F>, y: &Series1<F>) -> Series1<F> {
    let deg = y.degree().unwrap_or(0);
    let mut acc = Series1::zero(y.order());
    let mut dy = y.clone();
    for j in 0..=deg.min(a.order()) {
        let aj = a.coeff(j);
        if !aj.is_zero() {
            acc = acc.add(&dy.scale(&aj).extended(y.order()));
        }
        dy = dy.derivative();
    }
    acc
}

/// One raising step: y -> x (W(D) y). The polynomial degree grows by one, so
/// W must be known past deg y.
pub fn raising_step<F: Coeff>(w: &Series1<F>, y: &Series1<F>) -> Result<Series1<F>> {
    let deg = y.degree().unwrap_or(0);
    if deg >= w.order() {
        return Err(InversionError::OrderExhausted {
            degree: deg,
            order: w.order(),
        });
    }
    Ok(apply_diff_operator(w, y).shift_up())
}

/// Canonical polynomials y_0..y_N for the map V.
pub fn canonical_polynomials<F: Coeff>(v: &Series1<F>, n: usize) -> Result<CanonicalBasis<F>> {
    let w = compute_w(v, n)?;
    canonical_polynomials_from_w(&w, n)
}

/// Same, starting from a precomputed W (order at least N).
pub fn canonical_polynomials_from_w<F: Coeff>(
    w: &Series1<F>,
    n: usize,
) -> Result<CanonicalBasis<F>> {
    let mut rows = Vec::with_capacity(n + 1);
    let mut y = Series1::<F>::one(0);
    rows.push(pad(&y, n));
    for _ in 0..n {
        y = raising_step(w, &y)?;
        rows.push(pad(&y, n));
    }
    Ok(CanonicalBasis::from_rows(n, rows))
}

fn pad<F: Coeff>(y: &Series1<F>, n: usize) -> Vec<F> {
    let mut row: Vec<F> = y.coeffs().to_vec();
    row.resize(n + 1, F::zero());
    row
}

/// The inverse series U with V(U(v)) = v through order N.
pub fn invert_series<F: Coeff>(v: &Series1<F>, n: usize) -> Result<InversionResult<F>> {
    let basis = canonical_polynomials(v, n)?;
    let u = basis.power_series(1)?;
    Ok(package(v, u, n, Method::Operator))
}

/// U(v)^m read from column m of the canonical basis.
pub fn inverse_power<F: Coeff>(v: &Series1<F>, m: usize, n: usize) -> Result<Series1<F>> {
    canonical_polynomials(v, n)?.power_series(m)
}

/// Wrap a computed inverse with its composition residual.
pub fn package<F: Coeff>(
    v: &Series1<F>,
    u: Series1<F>,
    n: usize,
    method: Method,
) -> InversionResult<F> {
    let residual = crate::oracles::composition_residual(v, &u, n).unwrap_or(f64::INFINITY);
    let mut powers = BTreeMap::new();
    powers.insert(1, u);
    InversionResult {
        order: n,
        powers,
        method,
        residual,
    }
}

/// Inverse of a polynomial V near a point z0 with V(z0) = v0: shift to
/// V1(z) = V(z + z0) - v0, invert at the origin, and re-express. The result
/// series is in powers of (v - v0) with constant term z0.
#[derive(Debug, Clone)]
pub struct ShiftedInverse<F> {
    pub z0: F,
    pub v0: F,
    /// Coefficients of U(v) = z0 + sum_{k>=1} u_k (v - v0)^k.
    pub series: Series1<F>,
    pub residual: f64,
}

/// Exact Taylor shift of a polynomial: returns V(z + z0) as a polynomial.
pub fn taylor_shift<F: Coeff>(v: &Series1<F>, z0: &F) -> Series1<F> {
    // Horner in (z + z0): a_d, then repeatedly multiply by (z + z0) and add.
    let d = v.order();
    let mut acc = Series1::zero(d);
    for j in (0..=d).rev() {
        // acc = acc * (z + z0) + a_j
        let shifted = acc.shift_up().truncated(d);
        acc = shifted.add(&acc.scale(z0));
        acc = acc.add(&Series1::monomial(0, v.coeff(j), d));
    }
    acc
}

pub fn shift_invert<F: Coeff>(
    v: &Series1<F>,
    z0: &F,
    v0: &F,
    n: usize,
) -> Result<ShiftedInverse<F>> {
    let shifted = taylor_shift(v, z0);
    let v1 = shifted.sub(&Series1::monomial(0, v0.clone(), shifted.order()));
    if !v1.coeff(0).approx_eq(&F::zero(), crate::coeff::DEFAULT_TOL)
        || (F::EXACT && !v1.coeff(0).is_zero())
    {
        return Err(InversionError::PointMismatch);
    }
    let v1 = {
        // force the constant term to exact zero (float roundoff)
        let mut coeffs = v1.coeffs().to_vec();
        coeffs[0] = F::zero();
        Series1::new(coeffs)
    };
    if v1.coeff(1).is_zero() {
        return Err(InversionError::DerivativeVanishesAtPoint);
    }
    let u1 = invert_series(&v1, n)?;
    let residual = u1.residual;
    let mut coeffs = u1.inverse().coeffs().to_vec();
    coeffs[0] = z0.clone();
    Ok(ShiftedInverse {
        z0: z0.clone(),
        v0: v0.clone(),
        series: Series1::new(coeffs),
        residual,
    })
}
