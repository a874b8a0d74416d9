use std::io;

use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("vertex index {index} out of range for graph with {vertex_count} vertices")]
    VertexOutOfRange { index: usize, vertex_count: usize },

    #[error("self-loop on vertex {0} is not allowed in a simple graph")]
    SelfLoop(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("trace has {0} snapshot(s); at least 2 are required")]
    TraceTooShort(usize),

    #[error("no usable content: {0}")]
    EmptyInput(String),

    #[error("column index {index} out of range (row has {width} columns)")]
    ColumnOutOfRange { index: usize, width: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures caused by malformed or unreadable input, as opposed
    /// to parameter or contract violations.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Io(_) | Error::Json(_) | Error::Parse { .. } | Error::EmptyInput(_) | Error::ColumnOutOfRange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
