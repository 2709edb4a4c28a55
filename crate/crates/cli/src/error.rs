use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unparseable or invalid input (exit 2).
    #[error("{0}")]
    Input(String),

    /// A numerical routine failed (exit 3).
    #[error("{0}")]
    Numerical(String),

    /// A checked property was violated (exit 4).
    #[error("{0}")]
    Violation(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Violation(_) => 4,
        }
    }

    /// Wrap a core error with a short location prefix.
    pub fn core(context: &str, err: holevo_core::Error) -> Self {
        let msg = format!("{context}: {err}");
        if err.is_numerical() {
            CliError::Numerical(msg)
        } else {
            CliError::Input(msg)
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
