use thiserror::Error;

/// Errors produced while building, validating or evaluating protocols.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvacError {
    #[error("point ({x}, {y}) is {distance:.3e} away from the boundary")]
    OffBoundary { x: f64, y: f64, distance: f64 },

    #[error("parameter `{name}` = {value} violates constraint: {constraint}")]
    InvalidParameter {
        name: String,
        value: f64,
        constraint: String,
    },

    #[error("constraint `{constraint}` has no root on segment {segment}")]
    InfeasibleConstraint { constraint: String, segment: String },

    #[error("trajectory invalid: {0}")]
    InvalidTrajectory(String),

    #[error("protocol invariant violated: {0}")]
    ProtocolInvariant(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, EvacError>;

impl EvacError {
    pub(crate) fn param(name: &str, value: f64, constraint: impl Into<String>) -> Self {
        EvacError::InvalidParameter {
            name: name.to_string(),
            value,
            constraint: constraint.into(),
        }
    }
}
