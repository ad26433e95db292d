use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain too small: {0}")]
    DomainTooSmall(String),

    #[error("picard iteration did not contract after {iterations} iterations (last update {last_update:e}); reduce T")]
    NoContraction { iterations: usize, last_update: f64 },

    #[error("blow-up at t = {time}: max |u| = {max_abs:e}")]
    BlowUp { time: f64, max_abs: f64 },

    #[error("config error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },

    #[error("calibration: {0}")]
    Calibration(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
