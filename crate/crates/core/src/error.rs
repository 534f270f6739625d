use thiserror::Error;

/// Unified error type for kernel math, operators, sweeps, and the CLI harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or argument lies outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An experiment configuration is malformed or internally inconsistent.
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    /// A rate fit could not be produced because too few error values sit above
    /// the saturation floor.
    #[error("rate fit saturated: {0}")]
    Saturated(String),
    /// A computed value left the representable range (NaN/inf) or an input
    /// point is too large to index the lattice.
    #[error("non-finite evaluation: {0}")]
    NonFinite(String),
    /// I/O failure while reading inputs or writing reports.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
