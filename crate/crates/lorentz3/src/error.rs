//! Error types.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("operation `{0}` is exact-only and rejects the floating backend")]
    ExactOnly(&'static str),
    #[error("both polynomials are zero")]
    BothZero,
}

#[derive(Debug, Error)]
pub enum LieAlgError {
    #[error("constraint violated for family {family}: {constraint}")]
    ConstraintViolation { family: String, constraint: String },
    #[error("family {0} is not unimodular")]
    NotUnimodular(String),
    #[error("sampling range for {family}.{param} excludes every admissible value")]
    EmptyRange { family: String, param: String },
    #[error("structure constants violate the Jacobi identity")]
    JacobiViolation,
    #[error("frame metric is invalid: {0}")]
    BadMetric(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum CurvatureError {
    #[error("degenerate metric: {0}")]
    DegenerateMetric(&'static str),
}

#[derive(Debug, Error)]
pub enum SegreError {
    #[error("eigenvalue data is not representable in the requested backend")]
    NonScalarData,
    #[error("invalid Segre data: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum ExistenceError {
    #[error("predicate expects a non-diagonalizable type, got {{111}}")]
    WrongType,
    #[error("no parameters exist: {0}")]
    OutOfRange(String),
    #[error("search exhausted its budget without a witness (inconclusive, not a disproof)")]
    SearchFailed,
    #[error("target data is not representable for witness construction")]
    NonRationalData,
    #[error("invalid target: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid sweep config: {0}")]
    Invalid(String),
    #[error(transparent)]
    LieAlg(#[from] LieAlgError),
}
