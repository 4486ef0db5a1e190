use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes. Clap's own argument errors also exit with 2.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const IO: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const NON_CONVERGENCE: i32 = 3;
    pub const MODEL_ASSUMPTION: i32 = 4;
    pub const REPLAY_MISMATCH: i32 = 5;
    pub const SELFTEST_FAILED: i32 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{key}`: {reason}")]
    Usage { key: String, reason: String },

    #[error(transparent)]
    Model(#[from] renyi_core::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("replay does not reproduce the manifest: {0}")]
    ReplayMismatch(String),

    #[error("self-test failed: {0}")]
    SelfTestFailed(String),
}

impl CliError {
    pub fn usage(key: impl Into<String>, reason: impl ToString) -> Self {
        Self::Usage {
            key: key.into(),
            reason: reason.to_string(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        use renyi_core::Error as E;
        match self {
            CliError::Usage { .. } => exit::USAGE,
            CliError::Model(E::NonConvergence { .. } | E::Truncation { .. }) => exit::NON_CONVERGENCE,
            CliError::Model(E::Factoriality { .. } | E::NotStandard(_)) => exit::MODEL_ASSUMPTION,
            CliError::Model(E::Domain(_) | E::Parse(_) | E::NotNormalized { .. }) => exit::USAGE,
            CliError::Io { .. } => exit::IO,
            CliError::ReplayMismatch(_) => exit::REPLAY_MISMATCH,
            CliError::SelfTestFailed(_) => exit::SELFTEST_FAILED,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
