use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FgftError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is already diagonal")]
    AlreadyDiagonal,

    #[error("jacobi iteration did not converge within {steps} pivot steps")]
    NotConverged { steps: usize },

    #[error("wrong signal domain: expected {expected}, got {got}")]
    WrongDomain { expected: &'static str, got: &'static str },

    #[error("surface is already normalized")]
    AlreadyNormalized,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl FgftError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        FgftError::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        FgftError::Parse { line, msg: msg.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        FgftError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = FgftError> = std::result::Result<T, E>;
