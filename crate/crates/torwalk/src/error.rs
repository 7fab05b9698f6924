use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("continued fraction terminates after {0} terms (rational input)")]
    RationalInput(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),
    #[error("degenerate distribution: support is {{0}}")]
    DegenerateDistribution,
    #[error("orbit error budget exceeded: raise precision to at least {required_bits} bits")]
    PrecisionBudgetExceeded { required_bits: u32 },
    #[error("invalid exponent p = {0}")]
    InvalidP(f64),
    #[error("invalid time t = {0}")]
    InvalidTime(f64),
    #[error("truncation too short: {0}")]
    TruncationTooShort(String),
    #[error("atom at {0} lies in a forbidden arc")]
    SupportViolation(f64),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("degenerate frequency: |1 - phi| = {0:e}")]
    DegenerateFrequency(f64),
    #[error("series tail unbounded: beta*gamma = {0} >= 2")]
    TailUnbounded(f64),
    #[error("block too large: q_(k+1) = {0}")]
    BlockTooLarge(String),
    #[error("resonant alpha: |phi(2 pi alpha)| = 1")]
    ResonantAlpha,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("partial sum magnitude overflow")]
    MagnitudeOverflow,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
