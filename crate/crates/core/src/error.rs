use thiserror::Error;

use crate::gtrig::FunctionKind;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid interval: lower {lower} must be strictly below upper {upper}")]
    InvalidInterval { lower: f64, upper: f64 },

    #[error("singularity exponent {exponent} is not integrable (must lie in (0, 1))")]
    NonIntegrable { exponent: f64 },

    /// The quadrature did not reach its tolerance; the best estimate is attached.
    #[error("quadrature did not converge: value {value}, error estimate {err_estimate}")]
    NonConvergence { value: f64, err_estimate: f64 },

    #[error("parameter p must be positive and finite, got {0}")]
    InvalidParameter(f64),

    #[error("argument {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("{what} diverges at x = {x} for p = {p}")]
    DivergentEndpoint { what: &'static str, p: f64, x: f64 },

    #[error("pole of tan_p at y = {y} (p = {p})")]
    Pole { p: f64, y: f64 },

    #[error("inverse search exceeded 2^60 for y = {y} (p = {p})")]
    Overflow { p: f64, y: f64 },

    #[error("no kernel bundle for {0:?}; it is derived from the other families")]
    UnsupportedFamily(FunctionKind),

    #[error("no convexity condition defined for {0}")]
    UnsupportedVariant(String),

    #[error("x = {x} is within {distance:e} of the singular boundary")]
    BoundaryProximity { x: f64, distance: f64 },

    #[error("malformed report: {0}")]
    Format(String),

    #[error("no sign change of the concavity indicator for y = {y}")]
    NoSignChange { y: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
