use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: probability {value} outside [0, 1]")]
    Domain { line: usize, value: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("graph has {edges} edges; exact enumeration supports at most {limit}")]
    Capacity { edges: usize, limit: usize },

    #[error("snapshot cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
