use thiserror::Error;

/// Errors raised by cone, group, semigroup and metric operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (for example a point not in the open cone).
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix left its required block pattern beyond round-off.
    #[error("pattern error: {0}")]
    Pattern(String),

    /// A matrix that must be inverted is numerically singular.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// The matrix logarithm is undefined on the principal branch.
    #[error("spectrum error: {0}")]
    Spectrum(String),

    /// An iterative factorization did not converge.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    /// A recovered cone element violates the invariant cone beyond tolerance.
    #[error("cone violation: {0}")]
    ConeViolation(String),

    /// An element expected to lie in a semigroup failed one of its certificates.
    #[error("membership error: {0}")]
    Membership(String),

    /// Two descriptions of the same set disagreed.
    #[error("inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
