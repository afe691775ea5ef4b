use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum CartanError {
    /// Operands live in different triple spaces.
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    /// Operation is not defined for the given factor kind.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// An argument failed a structural precondition (bad index, bad shape, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input failed a mathematical validation (not a tripotent, invalid frame, ...).
    #[error("validation failed: {0}")]
    Validation(String),

    /// A point left the domain the operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A linear system or operator power hit a (near-)singular configuration.
    #[error("singularity: {0}")]
    Singular(String),

    /// An underlying factorization did not succeed.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An iteration did not reach its tolerance within the step budget.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        /// Coordinates of the last iterate, for diagnosis.
        last: Vec<(f64, f64)>,
    },
}

pub type Result<T> = std::result::Result<T, CartanError>;
