//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the exact engine and its numeric verifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("log q power mismatch in addition ({left} vs {right})")]
    LogqMismatch { left: i32, right: i32 },
    #[error("the zero function has no valuation")]
    ZeroFunction,
    #[error("series truncated at order {have}, order {needed} required")]
    InsufficientTruncation { needed: i64, have: i64 },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("point does not lie on the coset")]
    NotOnCoset,
    #[error("pole at the evaluation point: {0}")]
    Pole(String),
    #[error("operation requires a single-term (product form) function")]
    MultiTerm,
    #[error("arrangement does not contain the component {0}")]
    ArrangementIncomplete(String),
    #[error("non-integral pairing: {0}")]
    NonIntegral(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("path degeneracy unresolved after {0} perturbation attempts")]
    PathDegenerate(usize),
    #[error("coset is not a point")]
    NotAPoint,
    #[error("orbit inconsistency: {0}")]
    OrbitInconsistency(String),
    #[error("real parts are not separated by exactly one hyperplane")]
    NonAdjacent,
    #[error("contour meets a singular component: {0}")]
    Singular(String),
    #[error("non-divisible orbit count: {0}")]
    Divisibility(String),
}

pub type Result<T> = std::result::Result<T, Error>;
