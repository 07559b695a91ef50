use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational: {0}")]
    InvalidRational(String),

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("invalid marked subset: {0}")]
    InvalidSubset(String),

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch { expected: String, found: String },

    #[error("generator {gen} is not legal on {space}")]
    IllegalGenerator { gen: String, space: String },

    #[error("aggregate {name} is not defined on {space}")]
    IllegalAggregate { name: String, space: String },

    #[error("atypical GIT weights: subset {subset} has weight sum exactly 1")]
    AtypicalGitWeights { subset: String },

    #[error("invalid replacement split: {0}")]
    InvalidSplit(String),

    #[error("identity violated: {identity}; witness: {witness}")]
    IdentityViolation { identity: String, witness: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
