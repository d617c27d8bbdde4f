use thiserror::Error;

use crate::diagram::Endpoint;

/// Errors raised while constructing or composing diagrams.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagramError {
    #[error("dimension must be at least 1")]
    ZeroDim,
    #[error("{kind}: parameter vector has length {found}, expected {expected}")]
    ParamLength {
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{0}")]
    InvalidGenerator(String),
    #[error("signature mismatch at position {position}: expected dimension {expected}, found {found}")]
    SignatureMismatch {
        position: usize,
        expected: usize,
        found: usize,
    },
    #[error("signature mismatch: expected {expected} wires, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("diagram failed validation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// A single structural problem found by [`crate::diagram::Diagram::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownNode { endpoint: Endpoint },
    UnknownPort { endpoint: Endpoint },
    DimMismatch {
        a: Endpoint,
        a_dim: usize,
        b: Endpoint,
        b_dim: usize,
    },
    Dangling { endpoint: Endpoint },
    Reused { endpoint: Endpoint, count: usize },
    BadGenerator { node: usize, reason: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::UnknownNode { endpoint } => write!(f, "{endpoint} refers to a missing node"),
            Violation::UnknownPort { endpoint } => write!(f, "{endpoint} refers to a missing port"),
            Violation::DimMismatch { a, a_dim, b, b_dim } => write!(
                f,
                "edge joins {a} (dim {a_dim}) to {b} (dim {b_dim})"
            ),
            Violation::Dangling { endpoint } => write!(f, "{endpoint} is dangling"),
            Violation::Reused { endpoint, count } => {
                write!(f, "{endpoint} is used by {count} edges")
            }
            Violation::BadGenerator { node, reason } => write!(f, "node {node}: {reason}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("leg index {index} out of range ({len} legs)")]
    LegOutOfRange { index: usize, len: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RewriteError {
    #[error("match is stale or was not produced for this diagram")]
    StaleMatch,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalFormError {
    #[error("index {index} out of range for dimensions {dims:?}")]
    IndexOutOfRange { index: usize, dims: Vec<usize> },
    #[error("cannot trace legs {s} and {t}: {reason}")]
    BadTrace { s: usize, t: usize, reason: String },
    #[error("{found} coefficients given for dimensions {dims:?}")]
    CoeffLength { found: usize, dims: Vec<usize> },
    #[error("tensor has input legs; bend it to a state first")]
    NotAState,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GalleryError {
    #[error("unknown gallery entry '{name}'; valid names: {}", .valid.join(", "))]
    UnknownName { name: String, valid: Vec<&'static str> },
    #[error("{name}: parameter {value} out of range {min}..={max}")]
    OutOfRange {
        name: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
}
