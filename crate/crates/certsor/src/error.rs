use std::io;
use std::path::PathBuf;

use certsor_core::SuitableStatus;

/// Errors of the std layer. Each maps to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("line {line}: {message}")]
    EdgeList { line: usize, message: String },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] certsor_core::Error),

    #[error("no suitable vector for sigma = {sigma}: {status}")]
    Unsuitable { sigma: f64, status: SuitableStatus },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format { path: path.into(), message: message.into() }
    }

    /// 1 for I/O, 2 for malformed input, 3 for mathematical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 1,
            Error::EdgeList { .. } | Error::Format { .. } | Error::Usage(_) => 2,
            Error::Core(e) => match e {
                certsor_core::Error::DimensionMismatch { .. }
                | certsor_core::Error::IndexOutOfBounds { .. }
                | certsor_core::Error::InvalidEntry { .. }
                | certsor_core::Error::MalformedStructure(_)
                | certsor_core::Error::InvalidSchedule(_)
                | certsor_core::Error::NotANumber { .. } => 2,
                _ => 3,
            },
            Error::Unsuitable { .. } => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
