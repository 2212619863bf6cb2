use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scenario violates one of its structural invariants; the message names it.
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid hardware profile: {0}")]
    InvalidHardware(String),

    #[error("invalid solver parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The equivalent channel lost rank; the trial should be resampled.
    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),

    /// Noiseless eavesdropper without artificial noise has an unbounded SINR.
    #[error("eavesdropper SINR bound is undefined without artificial noise")]
    UndefinedBound,

    /// The closed-form eavesdropper capacity is outside its domain.
    #[error("infeasible approximation: {0}")]
    InfeasibleApproximation(String),

    #[error("config error (line {line}): {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
