use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("row length mismatch at line {line}: expected {expected} fields, found {found}")]
    RowLengthMismatch {
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("column index {index} out of range for {n_columns} columns")]
    ColumnOutOfRange { index: usize, n_columns: usize },

    #[error("node id {index} out of range for {n_nodes} nodes")]
    NodeOutOfRange { index: usize, n_nodes: usize },

    #[error("graph contains a cycle")]
    Cycle,

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("malformed CPT for node `{node}`: {reason}")]
    MalformedCpt { node: String, reason: String },

    #[error("Bayesian network parse error at line {line}: {reason}")]
    BnParse { line: usize, reason: String },

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("unknown classifier `{0}`")]
    UnknownClassifier(String),

    #[error("unknown selector `{0}`")]
    UnknownSelector(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
