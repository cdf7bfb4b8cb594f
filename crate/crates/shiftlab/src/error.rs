use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    /// 1 for IO and verification failures, 2 for malformed input, 3 for
    /// well-formed input the checkers reject.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Verify(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Invalid(_) => 3,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
