use thiserror::Error;

/// Errors produced by the time-scale engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point is not on the scale, or lies outside the trimmed domain an
    /// operator needs.
    #[error("domain error: {0}")]
    Domain(String),

    /// Trimming removed every point of a finite scale.
    #[error("empty domain: {0}")]
    EmptyDomain(String),

    /// A regressivity condition or a denominator vanished.
    #[error("singularity: {0}")]
    Singular(String),

    /// A series was judged divergent and its value withheld.
    #[error("divergent series: {0}")]
    Divergent(String),

    /// The coefficient bound does not satisfy the region condition.
    #[error("region violation: {0}")]
    RegionViolation(String),

    /// Invalid construction arguments (non-increasing grid, alpha outside
    /// [0, 1], zero step, ...).
    #[error("invalid argument: {0}")]
    Invalid(String),

    /// Input text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// The requested operation is not available for this combination of
    /// scale and value type.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An exact identity that must hold did not.
    #[error("inconsistency: {0}")]
    Inconsistent(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::EmptyDomain(_) | Error::RegionViolation(_) => 2,
            Error::Singular(_) => 3,
            Error::Divergent(_) => 4,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
