use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("integrator stalled at t = {t:e} (step {step:e}): {detail}")]
    Stiffness { t: f64, step: f64, detail: String },

    #[error("regime guard failed: {0}")]
    RegimeGuard(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::InvalidInput(_)
            | Error::InvalidDimension(_) => 2,
            Error::RegimeGuard(_) => 3,
            Error::NumericalInconsistency(_) | Error::Stiffness { .. } | Error::Internal(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
