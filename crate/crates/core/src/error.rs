use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, LidError>;

#[derive(Debug, Error)]
pub enum LidError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("empty set")]
    EmptySet,

    #[error("bad magic: expected \"LIDA\", found {0:?}")]
    BadMagic([u8; 4]),

    #[error("version mismatch: file has version {found}, reader supports {supported}")]
    VersionMismatch { found: u16, supported: u16 },

    #[error("truncated payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: u64, found: u64 },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("malformed file: {0}")]
    Malformed(String),

    #[error("line {line}: {message}")]
    Sample { line: usize, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("T exceeds usable reference size (T = {requested}, usable = {usable})")]
    InsufficientNeighbors { requested: usize, usable: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid distances: {0}")]
    InvalidDistances(String),

    #[error("degenerate neighborhood: all neighbor distances are equal")]
    DegenerateNeighborhood,

    #[error("slope out of range for finite dimension (slope = {slope})")]
    SlopeOutOfRange { slope: f64 },

    #[error("undefined AUROC: labels contain a single class")]
    UndefinedAuroc,

    #[error("id mismatch: {0}")]
    IdMismatch(String),

    #[error("missing label for sample {0}")]
    MissingLabel(String),

    #[error("estimation failed: {0}")]
    Estimation(String),
}

impl LidError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        LidError::Io {
            path: path.into(),
            source,
        }
    }
}
