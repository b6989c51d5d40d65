//! Error taxonomy shared by every module.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A non-finite value (NaN/Inf) was supplied or produced.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// A dilogarithm argument landed on the branch cut `[1, ∞)`.
    /// Carries the index of the offending term for diagnosis.
    #[error("branch cut collision in term {term}: argument {arg}")]
    BranchCut { term: usize, arg: String },

    /// Quadrature failed to reach the requested tolerance.
    #[error("quadrature tolerance not reached: {0}")]
    Tolerance(String),

    /// Floating-point overflow; the extended-precision backend will not help
    /// because the exponent range, not the mantissa, is exhausted.
    #[error("precision/overflow failure: {0}")]
    Precision(String),

    /// Newton continuation failed; reports the last good path parameter.
    #[error("continuation failed at parameter u = {last_good}: {detail}")]
    Continuation { last_good: f64, detail: String },

    /// A degenerate configuration (double root, vanishing denominator,
    /// flat tetrahedron) where the operation is undefined.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// Two independently computed quantities disagreed beyond tolerance.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    /// Not enough data points for a requested fit.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// An internal invariant was violated (would falsify a proven statement).
    #[error("internal error: {0}")]
    Internal(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
