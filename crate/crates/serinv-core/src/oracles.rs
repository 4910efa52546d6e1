//! Independent checks: classical Lagrange inversion, composition residuals,
//! Chebyshev recurrences, and the closed-form inverse of T_3. These share no
//! code with the operator or matrix routes and arbitrate disagreements
//! between them.

use crate::coeff::{binomial, Coeff};
use crate::error::{InversionError, Result};
use crate::series::Series1;

/// Classical Lagrange inversion: the coefficient of v^n in U is
/// (1/n) [z^{n-1}] (z/V(z))^n.
pub fn lagrange_invert<F: Coeff>(v: &Series1<F>, n: usize) -> Result<Series1<F>> {
    if !v.coeff(0).is_zero() {
        return Err(InversionError::NotNormalized);
    }
    if v.coeff(1).is_zero() {
        return Err(InversionError::SingularDerivative);
    }
    // g = z/V as a unit series: divide out one factor of z, then invert.
    let v_over_z = Series1::new(
        (1..=v.order().max(n))
            .map(|j| v.coeff(j))
            .collect::<Vec<_>>(),
    );
    let g = v_over_z.extended(n).reciprocal()?;
    let mut coeffs = vec![F::zero(); n + 1];
    let mut g_pow = Series1::<F>::one(n);
    for k in 1..=n {
        g_pow = g_pow.mul(&g);
        coeffs[k] = g_pow.coeff(k - 1) * F::from_int(k as i64).inverse().unwrap();
    }
    Ok(Series1::new(coeffs))
}

/// Max-norm of the coefficients of V(U(v)) - v through order N. Zero (in
/// rational mode) exactly when U is a correct order-N inverse of V.
pub fn composition_residual<F: Coeff>(v: &Series1<F>, u: &Series1<F>, n: usize) -> Result<f64> {
    Ok(composition_residual_series(v, u, n)?.max_abs_coeff())
}

/// The residual series itself, for exactness checks.
pub fn composition_residual_series<F: Coeff>(
    v: &Series1<F>,
    u: &Series1<F>,
    n: usize,
) -> Result<Series1<F>> {
    let composed = v.extended(n).compose(&u.extended(n).truncated(n))?;
    Ok(composed.sub(&Series1::identity(n)))
}

/// U_n(alpha), Chebyshev polynomials of the second kind, by the three-term
/// recurrence.
pub fn chebyshev_u<F: Coeff>(alpha: &F, n: usize) -> F {
    let two_alpha = F::from_int(2) * alpha.clone();
    let mut prev = F::one();
    if n == 0 {
        return prev;
    }
    let mut cur = two_alpha.clone();
    for _ in 1..n {
        let next = two_alpha.clone() * cur.clone() - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Closed-form inverse of T_3(z) = 4z^3 - 3z:
/// U(v) = -(1/3) sum_n C(3n, n) (4/27)^n v^{2n+1} / (2n+1), truncated at N.
pub fn t3_inverse_closed_form<F: Coeff>(n: usize) -> Series1<F> {
    let mut s = Series1::zero(n);
    let third = F::from_ratio(-1, 3);
    let ratio = F::from_ratio(4, 27);
    let mut ratio_pow = F::one();
    let mut k = 0usize;
    while 2 * k + 1 <= n {
        let c = third.clone()
            * binomial::<F>(3 * k, k)
            * ratio_pow.clone()
            * F::from_int((2 * k + 1) as i64).inverse().unwrap();
        s = s.add(&Series1::monomial(2 * k + 1, c, n));
        ratio_pow = ratio_pow * ratio.clone();
        k += 1;
    }
    s
}

/// The rational function (1 + z^2 + sqrt(2) z) / (1 + z^4) expanded to order
/// N; its coefficients repeat with period 8. Float mode only (sqrt 2).
pub fn w_period8_closed_form(n: usize) -> Series1<f64> {
    let numer = Series1::from_terms(
        &[(0, 1.0), (1, std::f64::consts::SQRT_2), (2, 1.0)],
        n,
    );
    let denom = Series1::from_terms(&[(0, 1.0), (4, 1.0)], n);
    numer.mul(&denom.reciprocal().expect("unit constant term"))
}
