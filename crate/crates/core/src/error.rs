use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("invalid stochastic matrix: {0}")]
    InvalidStochastic(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    /// A tomogram entry fell below the clamping window.
    #[error("negative probability {value:.3e} at outcome {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("unsupported subsystem dimension {0}")]
    UnsupportedDimension(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numeric failures (as opposed to bad input) during a computation.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NegativeProbability { .. } | Error::NotUnitary(_) | Error::NonFinite(_)
        )
    }
}
