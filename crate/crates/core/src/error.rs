use thiserror::Error;

/// Errors raised by the Euler calculus engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("constructible function is not compactly supported")]
    NonCompactSupport,
    #[error("convolution of supports unbounded in opposite directions is not proper")]
    ImproperConvolution,
    #[error("linear form is not proper on the support of a generator")]
    ImproperPushforward,
    #[error("affine map with zero slope")]
    DegenerateMap,
    #[error("kernel is not integrable against the pushforward")]
    NonIntegrable,
    #[error("generator kind not supported by this operation")]
    UnsupportedGenerator,
    #[error("empty kernel window ({0}, {1})")]
    EmptyWindow(f64, f64),
    #[error("kernel antiderivative has no strict monotonicity on the window")]
    MonotonicityUnknown,
    #[error("function is not gamma-constructible for the given cone")]
    NotGammaConstructible,
    #[error("zero linear form")]
    ZeroDirection,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
