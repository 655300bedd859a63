use thiserror::Error;

/// Errors produced by the detection library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("dimension mismatch in {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("amplitude must be nonzero to define an SNR")]
    ZeroAmplitude,

    #[error("search grid is empty")]
    EmptyGrid,

    #[error("invalid search grid: {0}")]
    InvalidGrid(String),

    #[error("false-alarm level must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),

    #[error(
        "{trials} trials cannot resolve a false-alarm level of {alpha} (need at least {needed})"
    )]
    TooFewTrials {
        trials: usize,
        alpha: f64,
        needed: usize,
    },

    #[error("scenario does not match the calibration scenario: {0}")]
    CalibrationMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed observation file: {0}")]
    MalformedObservations(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
