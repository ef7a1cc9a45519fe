use std::path::PathBuf;

use thiserror::Error;

use crate::scenario::Cell;

/// Errors produced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The input document does not match the expected shape.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// The document parsed but breaks a scenario invariant.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("cell {cell} is outside the map or blocked")]
    InvalidCell { cell: Cell },

    /// A required pair of positions is not connected on the map.
    #[error("infeasible instance: no path between {from} and {to}")]
    Unreachable { from: String, to: String },

    /// Decoding could not place the partner subtask of a cooperative task.
    #[error("infeasible genotype: no active slot for cooperative task {task}")]
    NoActiveSlot { task: usize },

    #[error("scenario generation failed: {0}")]
    Generation(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("statistics error: {0}")]
    Stats(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by an instance or genotype that cannot be executed.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Unreachable { .. } | Error::NoActiveSlot { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
