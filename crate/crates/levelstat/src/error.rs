//! Crate-wide error type and exit-code mapping.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad parameter, flag, or config-file value. CLI exit code 2.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A run would exceed a memory or iteration budget. CLI exit code 3.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A window or grid reaches outside the trusted unfolded range.
    #[error("window [{lo:.6}, {hi:.6}] outside trusted range [0, {eps_max:.6}]")]
    WindowRange { lo: f64, hi: f64, eps_max: f64 },

    /// Not enough data for the requested estimator (e.g. variance of one member).
    #[error("statistics: {0}")]
    Statistics(String),

    /// A numerical procedure failed to converge to its stated tolerance.
    #[error("numerical: {0}")]
    Numerical(String),

    /// Failure inside one ensemble member, tagged with its index.
    #[error("ensemble member {index}: {source}")]
    Member {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// A diagnostics check ran to completion and failed. CLI exit code 1.
    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 0 ok, 1 failed check, 2 usage, 3
    /// resource/numerical. Member errors inherit the code of their cause.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CheckFailed(_) => 1,
            Error::Config(_) => 2,
            Error::Resource(_) | Error::Numerical(_) => 3,
            Error::WindowRange { .. } | Error::Statistics(_) => 3,
            Error::Member { source, .. } => source.exit_code(),
            Error::Io(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
