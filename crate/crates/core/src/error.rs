use thiserror::Error;

use crate::subset::format_subset;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("zero minor at {}", format_subset(.subset))]
    ZeroMinor { subset: Vec<usize> },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: String, found: String },

    #[error("invalid subset {subset:?}: {reason}")]
    InvalidSubset { subset: Vec<usize>, reason: String },

    #[error("rank {rank} out of range 0..{len}")]
    RankOutOfRange { rank: usize, len: usize },

    #[error("not a signed permutation: {0}")]
    InvalidPermutation(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("{what} with n = {n} exceeds the limit {limit} (pass the override to go further)")]
    TooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("columns {0} and {1} span the same line")]
    NotGeneric(usize, usize),

    #[error("store is empty")]
    EmptyStore,

    #[error("invalid store: {0}")]
    InvalidStore(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
