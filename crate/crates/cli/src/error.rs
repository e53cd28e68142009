use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed document: syntax errors, unknown keys, wrong types.
    #[error("config parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Invalid(lambdachirp::Error),

    #[error("numerical failure: {0}")]
    Numerical(lambdachirp::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{failed} of {total} sweep cells failed")]
    PartialSweep { failed: usize, total: usize },

    #[error("{0} self-check(s) failed")]
    CheckFailed(usize),
}

impl From<lambdachirp::Error> for CliError {
    fn from(e: lambdachirp::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e)
        } else {
            CliError::Invalid(e)
        }
    }
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 for bad input (and I/O), 2 for numerical
    /// failure, 3 for a sweep that completed with failed cells.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Invalid(_) | CliError::Io { .. } => 1,
            CliError::Numerical(_) | CliError::CheckFailed(_) => 2,
            CliError::PartialSweep { .. } => 3,
        }
    }
}
