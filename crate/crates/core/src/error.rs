use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid isotropic direction: {0}")]
    InvalidDirection(String),

    #[error("invalid phase polynomial: {0}")]
    InvalidPhase(String),

    #[error("invalid tangent polynomial: {0}")]
    InvalidTangent(String),

    #[error("value not admitted by mode {mode}: {detail}")]
    ModeViolation { mode: String, detail: String },

    #[error("factors belong to different directions")]
    MismatchedDirection,

    #[error("matrix is not of the form diag{{1, L}} with unitary L: {0}")]
    NotBlockUnitary(String),

    #[error("matrix is not J-unitary: {0}")]
    NotJUnitary(String),

    #[error("input not in the normalized group: {0}")]
    NotNormalized(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("sampling failed: {0}")]
    Sampling(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
