//! Driver behind the `hyperwigner` binary.

use std::fmt;
use std::path::{Path, PathBuf};

pub mod config;
pub mod output;
pub mod run;

pub use config::{Cli, Command, Flags, RunConfig};
pub use run::run;

/// Failures, by exit code: 1 usage, 2 accuracy, 3 I/O.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Accuracy(String),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Accuracy(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Accuracy(m) => write!(f, "accuracy failure: {m}"),
            CliError::Io { path, source } => write!(f, "I/O error on {}: {source}", path.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hyperwigner::Error> for CliError {
    fn from(e: hyperwigner::Error) -> Self {
        use hyperwigner::Error as E;
        match e {
            E::Domain { .. } | E::Shape(_) | E::Unsupported(_) => CliError::Usage(e.to_string()),
            E::Accuracy { .. } | E::Invariant { .. } => CliError::Accuracy(e.to_string()),
        }
    }
}
