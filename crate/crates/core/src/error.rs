use thiserror::Error;

/// Failure modes shared by every module. The CLI maps each variant to an exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),

    #[error("resource guard: {what} needs {needed}, limit is {limit}")]
    Resource {
        what: String,
        needed: u64,
        limit: u64,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invariant breach: {0}")]
    Invariant(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Exit code: 1 usage/input, 2 resource guard, 3 invariant breach.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument(_) | Error::Parse { .. } | Error::Io(_) => 1,
            Error::Resource { .. } => 2,
            Error::Invariant(_) => 3,
        }
    }
}

/// Default ceiling on operator dimension; overridden by `KMP_SPECTRA_MAX_DIM`.
pub const DEFAULT_MAX_DIM: u64 = 20_000;

pub fn max_dim() -> u64 {
    std::env::var("KMP_SPECTRA_MAX_DIM")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

pub fn guard_dim(what: &str, dim: u64) -> Result<()> {
    let limit = max_dim();
    if dim > limit {
        return Err(Error::Resource {
            what: what.to_string(),
            needed: dim,
            limit,
        });
    }
    Ok(())
}
