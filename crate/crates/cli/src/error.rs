use std::path::PathBuf;

use cutcert_core::io::ParseError;
use thiserror::Error;

/// Exit status for a finished run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Negative,
    Inapplicable,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Self::Success => 0,
            Self::Negative => 3,
            Self::Inapplicable => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    /// A numerical or internal failure rather than bad input.
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            Self::Input(_) | Self::Io { .. } | Self::Parse { .. } => 2,
            Self::Compute(_) => 1,
        }
    }
}
