use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] rpd_core::Error),
    #[error("invalid treatment: {0}")]
    Treatment(String),
    #[error("agent configuration: {0}")]
    Config(String),
    #[error("environment variable {0} is not set")]
    MissingKey(String),
    #[error("transport: {0}")]
    Transport(String),
    #[error("unexpected response: {0}")]
    Response(String),
    #[error("no parseable answer after {0} attempts")]
    Unparseable(u32),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
