use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed target `{target}`: {reason}")]
    MalformedTarget { target: String, reason: String },

    #[error("target `{0}` has no analytic first-component marginal")]
    UnsupportedTarget(String),

    #[error("unknown target `{0}` (expected gaussian, mixture or double-well)")]
    UnknownTarget(String),

    #[error("chain {chain} diverged at step {step}")]
    Divergence { chain: usize, step: u64 },

    #[error("all {0} chains diverged")]
    UniversalDivergence(usize),

    #[error("quadrature did not converge after {evaluations} evaluations (error estimate {error_estimate:e})")]
    QuadratureNonConvergence {
        evaluations: usize,
        error_estimate: f64,
    },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("non-positive value {value} at index {index}")]
    NonPositive { index: usize, value: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
