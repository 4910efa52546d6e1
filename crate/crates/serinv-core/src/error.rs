use thiserror::Error;

/// Errors shared across the inversion routes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InversionError {
    #[error("series has zero constant term and no reciprocal")]
    ZeroConstantTerm,

    #[error("inner series of a composition must have zero constant term")]
    InnerConstantNonzero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("map is not normalized: V(0) != 0 (use shift_invert with an expansion point)")]
    NotNormalized,

    #[error("V'(0) = 0: the map is not locally invertible at the origin")]
    SingularDerivative,

    #[error("Jacobian is singular at the origin: the system is not locally invertible")]
    SingularAtOrigin,

    #[error("operator order exhausted: polynomial of degree {degree} needs W beyond order {order}")]
    OrderExhausted { degree: usize, order: usize },

    #[error("V'(z0) = 0: derivative vanishes at the expansion point")]
    DerivativeVanishesAtPoint,

    #[error("V(z0) does not equal v0")]
    PointMismatch,

    #[error("power {m} out of range 1..={max}")]
    PowerOutOfRange { m: usize, max: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
}

pub type Result<T> = std::result::Result<T, InversionError>;
