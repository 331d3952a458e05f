//! Numerical verification engine for a family of C¹ Lorentzian metrics on
//! subsets of R⁵ that carry twistor spinors with an isolated zero.
//!
//! Every field is evaluated pointwise as truncated Taylor jets, so all
//! curvature, connection and twistor quantities are exact up to floating
//! point at the sample point. No global fields or meshes are built.

// Tensor code indexes several arrays by the same component index.
#![allow(clippy::needless_range_loop)]

pub mod clifford;
pub mod curvature;
pub mod exec;
pub mod frames;
pub mod geometry;
pub mod jets;
pub mod regularity;
pub mod spingeo;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("requested derivative order {requested} exceeds available order {available}")]
    Order { requested: usize, available: usize },
    #[error("value is ambiguous on the light cone: {0}")]
    Ambiguous(String),
    #[error("singular locus: {0}")]
    Singular(String),
    #[error("frame mismatch: expected {expected}, got {got}")]
    FrameMismatch { expected: String, got: String },
    #[error("matrix is not in the spin group: residual {0:.3e}")]
    NotInSpinGroup(f64),
    #[error("point lies outside C_a: {0}")]
    CaViolation(String),
    #[error("no known spin transition from {from} to {to}")]
    UnknownTransition { from: String, to: String },
    #[error("metrics are not conformally related: residual {0:.3e}")]
    ScaleMismatch(f64),
    #[error("spinor pairing is not real: imaginary part {0:.3e}")]
    NonRealPairing(f64),
    #[error("curve does not cross the light cone transversally: {0}")]
    NonTransversal(String),
    #[error("sampling region is empty after exclusions: {0}")]
    EmptyRegion(String),
    #[error("operation needs a {expected}-dimensional metric, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("metric matrix is singular at the evaluation point")]
    SingularMetric,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
