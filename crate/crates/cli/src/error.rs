use std::path::{Path, PathBuf};

use sik_core::solvers::IterationTrace;

/// Process exit codes. Stable for scripting.
pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("solver diverged at iteration {iteration}")]
    Diverged {
        iteration: usize,
        trace: Box<IterationTrace>,
    },

    #[error(transparent)]
    Core(sik_core::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } | CliError::Parse { .. } => EXIT_IO,
            CliError::Diverged { .. } => EXIT_DIVERGED,
            CliError::Core(e) => match e {
                sik_core::Error::InvalidArgument(_) | sik_core::Error::ResourceLimit(_) => EXIT_USAGE,
                sik_core::Error::Diverged { .. } => EXIT_DIVERGED,
                _ => EXIT_IO,
            },
        }
    }
}

impl From<sik_core::Error> for CliError {
    fn from(e: sik_core::Error) -> Self {
        match e {
            sik_core::Error::Diverged { iteration, trace } => CliError::Diverged { iteration, trace },
            other => CliError::Core(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
