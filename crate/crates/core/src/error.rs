use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `(+inf) + (-inf)` has no meaningful value and is rejected outright.
    #[error("indeterminate sum: (+inf) + (-inf)")]
    IndeterminateSum,

    /// `0 * (+-inf)` is never needed by any supported formula and is rejected.
    #[error("indeterminate product: 0 * (+-inf)")]
    IndeterminateProduct,

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// The function is `+inf` everywhere on `(0, inf)`, so there is nothing
    /// to conjugate or invert.
    #[error("rate function is +inf everywhere on (0, inf)")]
    NeverFinite,

    #[error("solver failed to converge: {0}")]
    NonConvergence(String),

    /// The left-limit sequence used by the smallest generalized inverse
    /// failed to settle.
    #[error("left-limit sequence did not stabilize: {0}")]
    InconsistentLimit(String),

    /// Malformed or rejected input specification.
    #[error("invalid spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
