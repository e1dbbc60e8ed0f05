use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),

    #[error("{path}:{line}: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("triangle index out of range in triangles {0:?}")]
    IndexOutOfRange(Vec<usize>),

    #[error("degenerate (zero-area) triangles: {0:?}")]
    DegenerateTriangles(Vec<usize>),

    #[error("non-manifold edge between vertices {a} and {b} shared by {count} triangles")]
    NonManifoldEdge { a: usize, b: usize, count: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Errors caused by bad input (missing files, malformed configs) as opposed
    /// to failures while running.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::FileNotFound(_) | Error::Config(_) | Error::Malformed { .. }
        )
    }
}
