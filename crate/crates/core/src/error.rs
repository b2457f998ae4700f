use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("outside function domain: {0}")]
    Domain(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("render error: {0}")]
    Render(String),
    #[error("placement failed: {0}")]
    Placement(String),
    #[error("validation error: {0}")]
    Validation(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
