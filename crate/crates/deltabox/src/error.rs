use thiserror::Error;

/// Failure modes shared by every routine in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value lies outside the domain of the operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative routine stopped without reaching its tolerance.
    #[error(
        "no convergence after {iterations} iterations \
         (best residual {residual:.3e}, tolerance {tolerance:.3e})"
    )]
    NoConvergence {
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    /// A numeric routine produced a non-finite or otherwise unusable result.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
