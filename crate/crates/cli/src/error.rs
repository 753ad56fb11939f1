use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_NOT_CONVERGED: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),

    #[error("{0}")]
    Validation(String),

    #[error("reading {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("writing output: {0}")]
    Write(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] dissension_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use dissension_core::Error as E;
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Core(E::Parse(_) | E::Json(_)) => EXIT_PARSE,
            CliError::Core(_) => EXIT_VALIDATION,
            CliError::Read { .. } | CliError::Write(_) | CliError::Csv(_) => EXIT_FAILURE,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
