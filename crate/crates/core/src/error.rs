use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix data length {len} does not match shape {rows}x{cols}")]
    ShapeData { rows: usize, cols: usize, len: usize },

    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },

    #[error("non-finite entry {value} at ({row}, {col})")]
    NonFinite { row: usize, col: usize, value: f64 },

    #[error("shape mismatch in {context}: expected {expected}, got {actual}")]
    ShapeMismatch {
        context: &'static str,
        expected: String,
        actual: String,
    },

    #[error("exponent p = {0} outside the valid range 0 < p <= 1")]
    InvalidExponent(f64),

    #[error("{name} = {value} is out of its domain ({requirement})")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("row {row} of the iterate is exactly zero and the weight policy cannot reweight it")]
    DegenerateRow { row: usize },

    #[error("system matrix M D^-1 M^T is numerically singular")]
    SingularSystem,

    #[error("constraint matrix is rank deficient: rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },

    #[error("constraint matrix has {rows} rows but only {cols} columns; need cols >= rows")]
    Overdetermined { rows: usize, cols: usize },

    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error("unknown weight policy `{0}`")]
    UnknownPolicy(String),

    #[error("k = {k} outside 1..={available}")]
    SelectionRange { k: usize, available: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
