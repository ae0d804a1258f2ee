use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("k = {k} out of range: need 1 <= k <= {max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("point index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("target dimension {target} out of range: need 1 <= d <= {dim}")]
    DimensionOutOfRange { target: usize, dim: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("label vectors differ in length: {truth} vs {pred}")]
    LengthMismatch { truth: usize, pred: usize },

    #[error("plot error: {0}")]
    Plot(String),
}
