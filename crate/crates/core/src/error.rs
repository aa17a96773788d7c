use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {0} exceeds the configured cap {1}")]
    ConductorOverflow(u64, u64),
    #[error("cannot parse cyclotomic literal {literal:?}: {reason}")]
    Literal { literal: String, reason: String },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("group order exceeds the cap of {0} elements")]
    OrderCapExceeded(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("characters belong to different groups ({0} vs {1} classes)")]
    GroupMismatch(usize, usize),
    #[error("value {0} is not an integer")]
    NonIntegral(String),
    #[error("irreducible representations failed verification: {0}")]
    IrrepVerificationFailed(String),
    #[error("negative degree {0} for a Hom space between line bundles")]
    NegativeDegree(i64),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("differential does not square to zero in degree {0}")]
    NotAComplex(i32),
    #[error("window violation: {0}")]
    WindowViolation(String),
    #[error("Hom complex is not concentrated in degree 0: {0}")]
    NonConcentratedHom(String),
    #[error("{0} does not divide n + 1 = {1}")]
    NotADivisor(usize, usize),
    #[error("blocks are not orthogonal: {0}")]
    OrthogonalityFailure(String),
    #[error("collection is not strong: {0}")]
    NotStrong(String),
    #[error("collection is not exceptional: {0}")]
    NotExceptional(String),
}

pub type Result<T> = std::result::Result<T, Error>;
