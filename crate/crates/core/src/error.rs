use thiserror::Error;

/// Everything that can go wrong while building or checking an instance.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("minimal polynomial is reducible (found a factor of degree {0})")]
    Reducible(usize),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("not a Galois group of the field: {0}")]
    NotGalois(String),
    #[error("invalid integral basis: {0}")]
    InvalidIntegralBasis(String),
    #[error("not a sublattice: {0}")]
    NotSublattice(String),
    #[error("descent failure: {0}")]
    DescentFailure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
