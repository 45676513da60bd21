use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported representation: {0}")]
    UnsupportedVariant(String),

    #[error("incompatible representations: {0}")]
    IncompatibleCombination(String),

    #[error("invalid frozen arguments: need 0 < a < b < pi, got a = {a}, b = {b}")]
    InvalidArguments { a: f64, b: f64 },

    #[error("winding count {winding} disagrees with {located} located zeros inside |lambda| = {radius}")]
    Certification {
        winding: usize,
        located: usize,
        radius: f64,
    },

    #[error("a zero of the characteristic function lies on the contour |lambda| = {radius} (|Delta| = {value})")]
    NearContourZero { radius: f64, value: f64 },

    #[error("characteristic function overflowed at lambda = {0}")]
    Overflow(Complex64),

    #[error("spectral product is singular at lambda = {0}")]
    Cancellation(Complex64),

    #[error("reconstruction refused: {0}")]
    Resolution(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
