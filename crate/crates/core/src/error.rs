use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument `{field}`: {reason}")]
    InvalidArgument { field: &'static str, reason: String },

    #[error("unsupported operation: {0}")]
    UnsupportedOperation(&'static str),

    #[error("numerical failure in {context}: achieved error estimate {achieved_error:e}")]
    NumericalFailure {
        context: &'static str,
        achieved_error: f64,
    },

    #[error("internal consistency check failed in {context}: discrepancy {discrepancy:e}")]
    InternalConsistency {
        context: &'static str,
        discrepancy: f64,
    },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            field,
            reason: reason.into(),
        }
    }

    /// Process exit status used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument { .. }
            | Error::UnsupportedOperation(_)
            | Error::ResourceLimit(_) => 2,
            Error::NumericalFailure { .. } | Error::InternalConsistency { .. } => 3,
            Error::Io { .. } => 4,
        }
    }
}
