use std::path::PathBuf;

use rotwave_core::RotwaveError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("check failed: {0}")]
    Assertion(String),
    /// Sweep with failed members; carries the first member's exit code.
    #[error("{failed} of {total} sweep members failed, first: {first}")]
    Partial { failed: usize, total: usize, first: String, code: i32 },
    #[error(transparent)]
    Core(#[from] RotwaveError),
}

impl HarnessError {
    /// 1 assertion failure, 2 config error, 3 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Assertion(_) => 1,
            Self::Partial { code, .. } => *code,
            Self::Config(_) | Self::InvalidArgument(_) => 2,
            Self::Core(RotwaveError::InvalidArgument(_)) => 2,
            Self::Io { .. } | Self::Core(_) => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
