use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),

    #[error("field mismatch: GF({left}) vs GF({right})")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the enumeration cap of {cap}")]
    EnumerationCap { dim: usize, cap: usize },

    #[error("{count} candidate recovery sets exceed the exact search cap of {cap}")]
    CandidateCap { count: usize, cap: usize },

    #[error("coordinate {0} is not covered by any dual codeword")]
    UncoveredCoordinate(usize),

    #[error("{needed} query multisets exceed the exhaustive budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid bucket partition: {0}")]
    InvalidPartition(String),

    #[error("query {0:?} has no plan over the provided recovery sets")]
    Unplannable(Vec<usize>),

    #[error("beyond oracle scale: {0}")]
    OracleScale(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
