//! Local inversion of analytic maps as truncated power series.
//!
//! Given a polynomial map `V` with `V(0) = 0` and an invertible linear part,
//! this crate computes the compositional inverse `U` (with `V(U(v)) = v`
//! through a chosen truncation order) by iterating the raising operator
//! `Y = X W(D)`, `W = 1/V'`, on the constant polynomial. Three further
//! routes compute the same expansions and serve as cross-checks: a Toeplitz
//! coefficient recursion, an explicit operator-matrix representation
//! (extended to several variables via Kronecker products), and classical
//! Lagrange inversion.
//!
//! Coefficients live in a pluggable field: exact `BigRational` (default) or
//! `f64` for inputs with irrational constants.

pub mod bench;
pub mod coeff;
pub mod error;
pub mod fixtures;
pub mod matrix;
pub mod multi;
pub mod multivariate;
pub mod oracles;
pub mod series;
pub mod univariate;

pub use coeff::{Coeff, DEFAULT_TOL};
pub use error::{InversionError, Result};
pub use matrix::{Mat, OperatorMatrices, PwqSet};
pub use multi::{MSeries, MultiIndex, SeriesMatrix};
pub use multivariate::{CanonicalTable, PolySystem};
pub use series::Series1;
pub use univariate::{CanonicalBasis, InversionResult, Method, ShiftedInverse};
