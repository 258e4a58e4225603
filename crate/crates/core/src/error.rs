use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("matrix is not positive definite (smallest eigenvalue {min:e}, largest {max:e})")]
    Singular { min: f64, max: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("iterate diverged at t={t} (norm {norm:e})")]
    Divergence { t: u64, norm: f64 },

    #[error("boundary undefined: {0}")]
    UndefinedBoundary(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("report invariant violated: {0}")]
    Invariant(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 2 config/validation, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Dimension { .. } | Error::Config(_) => 2,
            Error::Singular { .. }
            | Error::NoConvergence { .. }
            | Error::Divergence { .. }
            | Error::UndefinedBoundary(_)
            | Error::Invariant(_) => 3,
            Error::Io { .. } => 4,
        }
    }
}
