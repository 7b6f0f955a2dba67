use thiserror::Error;

/// Errors raised by the ridge toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not a direction: the zero vector has no projective class")]
    NotADirection,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("aliasing: axis {axis} has {samples} samples, band {band} needs at least {required}")]
    Aliasing {
        axis: usize,
        samples: usize,
        band: usize,
        required: usize,
    },

    #[error("undersampled: bin width {bin_width} is finer than the projected grid spacing {spacing}")]
    Undersampled { bin_width: f64, spacing: f64 },

    #[error("not odd: {0}")]
    NotOdd(String),

    #[error("empty sample")]
    EmptySample,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
