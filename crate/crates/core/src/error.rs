//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("immersion rank deficient at (u, v) = ({0}, {1})")]
    RankDeficient(f64, f64),

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("integration failed at s = {s}: {what}")]
    Integration { s: f64, what: String },

    #[error("frame ODE integrability defect {defect:.3e} exceeds {limit:.3e}")]
    Integrability { defect: f64, limit: f64 },

    #[error("inconsistent system: {0}")]
    Inconsistency(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
