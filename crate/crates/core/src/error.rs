#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum RotwaveError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("numeric failure at t = {time}: {detail}")]
    NumericFailure { time: f64, detail: String },
}

pub type Result<T> = std::result::Result<T, RotwaveError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(RotwaveError::InvalidArgument(msg.into()))
}
