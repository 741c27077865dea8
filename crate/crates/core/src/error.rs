use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what}: tolerance not reached within {max_terms} terms")]
    Truncation {
        what: &'static str,
        max_terms: usize,
    },

    #[error("half-integer power of (x^{a};x^{b}) does not pair up")]
    UnpairedHalfPower { a: u32, b: u32 },

    #[error("coefficient of x^{index} is negative")]
    NegativeCoefficient { index: usize },

    #[error("coefficient of odd power x^{index} is nonzero")]
    OddPowerCoefficient { index: usize },

    #[error("negative entropy {value:e} (est. error {est_error:e})")]
    NegativeEntropy { value: f64, est_error: f64 },

    #[error("spectrum tail too heavy: {0}")]
    TailTooHeavy(String),

    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    #[error("inconsistent estimate: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
