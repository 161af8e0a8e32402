use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("homogeneous term degree {0} is below 2")]
    DegreeTooLow(usize),
    #[error("entry declares {found} variables but its term has degree {degree}")]
    ArityMismatch { degree: usize, found: usize },
    #[error("non-finite coefficient {0}")]
    NonfiniteCoefficient(f64),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("system has no nonlinear term")]
    NoNonlinearTerm,
    #[error("matrix is singular to working precision")]
    SingularMatrix,
    #[error("unsupported degree {0}")]
    UnsupportedDegree(usize),
    #[error("density {0} must lie in (0, 1]")]
    InvalidDensity(f64),
    #[error("viscosity {0} must be positive")]
    InvalidViscosity(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
