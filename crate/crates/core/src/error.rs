use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid history: {0}")]
    InvalidHistory(String),

    #[error("{what} = {value} out of range ({allowed})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        allowed: String,
    },

    #[error("coupling constant must be finite and positive, got {0}")]
    InvalidCoupling(f64),

    #[error("malformed label {label} at level {level}")]
    MalformedLabel { label: String, level: usize },

    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("element is not a unit (zero constant term)")]
    NotAUnit,

    #[error("coefficient of t^{n} v^{d} is {value}, expected a nonnegative integer")]
    NonIntegral { n: usize, d: usize, value: String },

    #[error("exact division failed for n = {n}, d = {d}")]
    Indivisible { n: usize, d: usize },

    #[error("convergence check failed: {0}")]
    Convergence(String),
}

impl Error {
    pub(crate) fn out_of_range(
        what: &'static str,
        value: usize,
        allowed: impl Into<String>,
    ) -> Self {
        Error::OutOfRange {
            what,
            value,
            allowed: allowed.into(),
        }
    }
}
