use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),

    #[error("config file {path}: {source}")]
    ConfigFile { path: PathBuf, source: std::io::Error },

    #[error("config file {path}: {source}")]
    ConfigParse { path: PathBuf, source: serde_json::Error },

    #[error("grid mismatch: expected {expected} cells per axis, got {got}")]
    GridMismatch { expected: usize, got: usize },

    #[error("solver: {0}")]
    Solver(#[from] gridflow::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit code: 1 for configuration problems, 2 for runtime
    /// (solver or i/o) failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Config(_)
            | HarnessError::ConfigFile { .. }
            | HarnessError::ConfigParse { .. }
            | HarnessError::GridMismatch { .. } => 1,
            HarnessError::Solver(_) | HarnessError::Io(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
