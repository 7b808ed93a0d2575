use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("model invariant violated: {0}")]
    Invariant(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("integration fault at t = {time}: {detail}")]
    IntegrationFault { time: f64, detail: String },

    #[error("time {time} outside the computed range [{lower}, {upper}]")]
    OutOfRange { time: f64, lower: f64, upper: f64 },

    #[error("unknown catalog label `{0}`")]
    UnknownLabel(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name: name.to_string(), reason: reason.into() }
}
