use thiserror::Error;

#[derive(Debug, Error)]
pub enum OnmfError {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("negative entry {value} at ({row}, {col})")]
    Negative { row: usize, col: usize, value: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("angle undefined for a zero vector")]
    ZeroVector,

    #[error("group index {index} out of range for k = {k}")]
    IndexOutOfRange { index: usize, k: usize },

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("centroid grouping violated the angle separation: {0}")]
    Grouping(String),

    #[error("matrix is not binary at ({row}, {col})")]
    NotBinary { row: usize, col: usize },

    #[error(
        "labeling is incomplete: {missing} pair(s) missing (use --complete to treat them as \"-\")"
    )]
    IncompleteGraph { missing: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, OnmfError>;
