use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid weight parameters alpha={alpha}, beta={beta}: both must be finite and > -1")]
    InvalidParams { alpha: f64, beta: f64 },

    #[error("point x={x} is outside the domain {domain}")]
    Domain { x: f64, domain: &'static str },

    #[error("point #{index} (x={x}) is outside [0,1]")]
    DomainAt { index: usize, x: f64 },

    #[error("index {i} out of range for degree {n}")]
    Index { n: usize, i: usize },

    #[error("degree {n} is below the minimum {min} for this evaluator")]
    Degree { n: usize, min: usize },

    #[error("three-term recurrence is degenerate at step {n}")]
    DegenerateRecurrence { n: usize },

    #[error("precomputed coefficients were built for a different (n, alpha, beta)")]
    CoeffMismatch,

    #[error("leading recurrence coefficient vanishes at i={i}")]
    SingularCoefficient { i: usize },

    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),

    #[error("acc is undefined for an exact value of zero")]
    UndefinedAcc,

    #[error("{0}")]
    Config(String),
}
