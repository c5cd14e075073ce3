//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Grid points are not strictly increasing or not equispaced where
    /// the quadrature rule requires it.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A vector or matrix does not match the expected length.
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// A function with norm below the zero threshold cannot be
    /// normalized or used as a reference.
    #[error("function norm is below the zero threshold")]
    ZeroNorm,

    /// A candidate function lies (numerically) in the span of the basis.
    #[error("candidate is linearly dependent on the basis (surviving norm {surviving_norm:.3e})")]
    LinearDependence { surviving_norm: f64 },

    /// Row `index` of an input matrix is dependent on the preceding rows.
    #[error("row {index} is linearly dependent on the preceding rows")]
    DependentRow { index: usize },

    /// Input data fails a structural validation (non-finite entries,
    /// duplicated parameter points, empty sets, ...).
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// The empirical node search exhausted the basis before placing all
    /// nodes, or the node matrix is singular.
    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),

    /// A user-supplied basis is not orthonormal under the quadrature.
    #[error("basis is not orthonormal (max Gram deviation {deviation:.3e})")]
    NonOrthonormalBasis { deviation: f64 },

    /// Too few samples for the requested operation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Abscissae are not strictly increasing.
    #[error("invalid abscissae: {0}")]
    InvalidAbscissa(String),

    /// Evaluation outside the model domain.
    #[error("value {value} is outside the domain [{min}, {max}]")]
    OutOfDomain { value: f64, min: f64, max: f64 },

    /// Requested operation is not supported for this input.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The ODE integrator produced a non-finite state.
    #[error("integration failure: {0}")]
    IntegrationFailure(String),

    /// A dense linear solve hit an exactly zero pivot.
    #[error("singular matrix in linear solve")]
    SingularMatrix,

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
