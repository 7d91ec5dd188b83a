use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("mode mismatch: encoding has {encoding} modes, model has {model}")]
    ModeMismatch { encoding: usize, model: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("assignment is missing problem variable {0}")]
    MissingVariable(u32),

    #[error(transparent)]
    Solver(#[from] SolverError),

    #[error("decoded encoding failed verification: {0}")]
    Verification(String),

    #[error("no feasible encoding up to weight bound {bound}")]
    Infeasible { bound: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Failures of the external SAT backend.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error("failed to spawn solver `{command}`: {source}")]
    Spawn {
        command: String,
        #[source]
        source: io::Error,
    },

    #[error("solver produced unparsable output: {0}")]
    Malformed(String),

    #[error("solver timed out before any model was found")]
    TimedOutWithoutModel,

    #[error("solver i/o: {0}")]
    Io(#[from] io::Error),
}
