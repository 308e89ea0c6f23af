use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate channel sample: {0}")]
    DegenerateSample(String),
    #[error("misuse: {0}")]
    Misuse(String),
    #[error("integer overflow evaluating {0}")]
    Overflow(String),
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {intervals} intervals")]
    Quadrature {
        estimate: f64,
        error: f64,
        intervals: usize,
    },
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
