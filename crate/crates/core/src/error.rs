use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision exhausted: requested tolerance {tol:e} but rounding error is about {rounding:e}")]
    PrecisionExhausted { tol: f64, rounding: f64 },

    #[error("pole: {0}")]
    Pole(String),

    #[error("value {value} outside the range {range} of the edge")]
    Range { value: f64, range: String },

    /// A proven inequality failed numerically. `claim` names the statement.
    #[error("invariant violated: {claim} ({detail})")]
    InvariantViolation { claim: &'static str, detail: String },

    #[error("cross-validation failed: {0}")]
    CrossValidation(String),

    #[error("verification failed: {claim} ({detail})")]
    Verification { claim: &'static str, detail: String },

    #[error("endpoint limit did not converge: {0}")]
    Limit(String),

    #[error("finite-difference oracle below working precision: {0}")]
    OraclePrecision(String),

    #[error("unknown function id `{0}`")]
    UnknownFunction(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invariant(claim: &'static str, detail: impl Into<String>) -> Self {
        Error::InvariantViolation { claim, detail: detail.into() }
    }

    pub(crate) fn verification(claim: &'static str, detail: impl Into<String>) -> Self {
        Error::Verification { claim, detail: detail.into() }
    }
}
