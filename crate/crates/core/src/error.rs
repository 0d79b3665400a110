use thiserror::Error;

use crate::quadrature::QuadratureResult;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("degenerate trajectory: {0}")]
    DegenerateTrajectory(String),

    #[error("loop integral requires a closed trajectory")]
    OpenPath,

    #[error("point {point:?} lies within {distance:e} cm of the charge")]
    SingularPoint { point: [f64; 3], distance: f64 },

    #[error("integrand returned a non-finite sample at {point:?}")]
    NonFiniteSample { point: [f64; 3] },

    #[error("quadrature did not converge after {} evaluations (estimate {} +/- {})", partial.evaluations, partial.value, partial.error_estimate)]
    NonConvergence { partial: QuadratureResult },

    #[error("line integral did not converge after {levels} refinement levels (estimate {value} +/- {error_estimate})")]
    LineNonConvergence {
        value: f64,
        error_estimate: f64,
        levels: usize,
    },

    #[error("position {point:?} overlaps the field region (margin {margin:e} cm)")]
    OverlapViolation { point: [f64; 3], margin: f64 },

    #[error("operation requires a {expected} sheet")]
    WrongFieldKind { expected: &'static str },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
