use std::path::PathBuf;

use robust_auction::AuctionError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: key `{key}`: {message}")]
    Config { line: usize, key: String, message: String },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Auction(#[from] AuctionError),

    #[error("failed to encode output: {0}")]
    Encode(String),
}

impl CliError {
    /// Short stable identifier for the error class.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config { .. } | CliError::Syntax { .. } => "config",
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Auction(_) => "auction",
            CliError::Encode(_) => "encode",
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Syntax { .. } | CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    /// `error[code]: message` on a single line.
    pub fn one_line(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("error[{}]: {}", self.code(), msg)
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
