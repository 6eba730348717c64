//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point outside metric domain: {0}")]
    OutsideDomain(String),

    #[error("zero fiber vector: Finsler norms are not smooth at y = 0")]
    ZeroFiberVector,

    #[error("jet order {requested} exceeds engine maximum {max}")]
    OrderTooHigh { requested: usize, max: usize },

    #[error("jet request invalid: {0}")]
    BadJetRequest(String),

    #[error("metric has no closed-form projective factor")]
    NoProjectiveFactor,

    #[error("fundamental tensor not positive definite at x={x:?}, y={y:?} (det={det:.3e})")]
    NotPositiveDefinite { x: [f64; 2], y: [f64; 2], det: f64 },

    #[error("fundamental tensor numerically singular (|det g| = {0:.3e})")]
    SingularTensor(f64),

    #[error("ODE solver failed: {0}")]
    Solver(String),

    #[error("integration halted at t = {t:.6} ({reason})")]
    Halted { t: f64, reason: String },

    #[error("circle map resolution failure: {0}")]
    ResolutionFailure(String),

    #[error("curvature field not tangent to the indicatrix (|dF(xi)| = {0:.3e} > {1:.1e})")]
    Tangency(f64, f64),

    #[error("condition {condition} fails at base point: {detail}")]
    ConditionViolated { condition: char, detail: String },

    #[error("invalid specification: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
