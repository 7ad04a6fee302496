use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes. Usage errors from argument parsing exit with 2.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const DOMAIN: i32 = 4;
    pub const CONVERGENCE: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("{0}")]
    Range(String),

    #[error("{0}")]
    Usage(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] unit_lindley::Error),
}

impl CliError {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        use unit_lindley::Error as E;
        match self {
            CliError::Parse { .. } | CliError::Config { .. } => exit::PARSE,
            CliError::Range(_) => exit::DOMAIN,
            CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } => exit::IO,
            CliError::Core(E::Convergence(_) | E::Impractical(_)) => exit::CONVERGENCE,
            CliError::Core(E::Config { .. }) => exit::PARSE,
            CliError::Core(_) => exit::DOMAIN,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
