use thiserror::Error;

/// Errors raised by the geometry, group and extension routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("direction is not a unit vector (norm {norm})")]
    NonUnitDirection { norm: f64 },
    #[error("nearest-point solver did not certify optimality after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("parameter {name} = {value} out of range")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("group closure exceeded cap of {0} elements")]
    CapExceeded(usize),
    #[error("generators do not close to a group: {0}")]
    NotAGroup(String),
    #[error("element {0} has a nonzero offset; operation needs a linear action")]
    AffineElement(usize),
    #[error("extension problem has an empty subset")]
    EmptySubset,
    #[error("metric violation: {0}")]
    MetricViolation(String),
    #[error("metric is not invariant: {0}")]
    NotInvariantMetric(String),
    #[error("permutations do not form a group action: {0}")]
    NotAnAction(String),
    #[error("invalid extension problem: {0}")]
    InvalidProblem(String),
    #[error("k = {0} exceeds the supported range 1..=12")]
    KTooLarge(usize),
    #[error("parse error in {path}: {message}")]
    ParseError { path: String, message: String },
    #[error("validation error in {path} at `{field}`: {message}")]
    ValidationError {
        path: String,
        field: String,
        message: String,
    },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
