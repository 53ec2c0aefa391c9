use thiserror::Error;

use crate::bounds::Condition;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Parameters outside the model's domain (n = 0, θ ≤ 0, malformed θ).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what} of {requested} exceeds the configured limit {limit}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("n = {n} exceeds the Stirling table size {n_max}")]
    Dimension { n: usize, n_max: usize },

    #[error("domain error: {0}")]
    Domain(String),

    /// A standardization or fraction whose scale is zero (n = 1).
    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("condition `{0}` does not hold")]
    ConditionViolated(Condition),

    #[error("root not bracketed on [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },
}
