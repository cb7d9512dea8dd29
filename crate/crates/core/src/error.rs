use thiserror::Error;

use crate::exactnum::IntVector;
use crate::polytope::ValidationReport;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero vector has no primitive representative")]
    ZeroVector,

    #[error("matrix is singular")]
    Singular,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ragged matrix: row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },

    #[error("vertex {vertex} does not lie on facet {facet}")]
    NotIncident { vertex: usize, facet: usize },

    #[error("invalid polytope: {0}")]
    Invalid(ValidationReport),

    #[error("fan is not smooth: cone at vertex {vertex} has determinant {determinant}")]
    NotSmooth { vertex: usize, determinant: String },

    #[error("one-parameter subgroup {gamma} is not generic: edge {a}-{b} with direction {direction} pairs to zero")]
    NotGeneric {
        gamma: IntVector,
        a: usize,
        b: usize,
        direction: IntVector,
    },

    #[error("unknown builtin polytope `{0}`")]
    UnknownBuiltin(String),

    #[error("bad parameters for builtin `{name}`: {reason}")]
    BadParams { name: String, reason: String },

    #[error("piecewise polynomial is not homogeneous on cone {cone}")]
    NotHomogeneous { cone: usize },

    #[error("filtration did not stabilize by degree {cap} (rank {rank} of {points})")]
    DegreeCapExceeded { cap: usize, rank: usize, points: usize },

    #[error("presentation still has a nonzero piece in degree {cap} (dimension {dim})")]
    PresentationCapExceeded { cap: usize, dim: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
