//! Crate-wide error type.

use thiserror::Error;

use crate::lattice::MultiIndex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse scalar from {0:?} (expected \"p\" or \"p/q\")")]
    ScalarParse(String),

    #[error("lattice rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: i64 },

    #[error("adjoint image escapes the listed degree window at {0}")]
    DegreeOutsideWindow(MultiIndex),

    #[error("direction vector is not generic on the window of radius {radius}: gamma.r = 0 at r = {witness}")]
    NotGeneric { radius: i64, witness: MultiIndex },

    #[error("genericity certificate covers radius {certified} but radius {requested} was requested")]
    GenericityWindowTooSmall { certified: i64, requested: i64 },

    #[error("element does not lie in the expected part of the algebra: {0}")]
    FlavorMismatch(String),

    #[error("exterior power degree {k} out of range for dimension {dim}")]
    ExteriorDegree { k: usize, dim: usize },

    #[error("weight label must be dominant integral; entry {index} is negative")]
    NotDominant { index: usize },

    #[error("top-degree forms admit no differential (degree {0})")]
    TopDegreeForm(usize),

    #[error("cover action escapes the window at degree {0}")]
    CoverEscape(MultiIndex),

    #[error("representation data failed validation: {0}")]
    InvalidIrrep(String),

    #[error("window cap saturated: {0}")]
    CapSaturated(String),

    #[error("fixed-point iteration did not converge within {0} rounds")]
    NoConvergence(usize),

    #[error("unknown verification suite {0:?}")]
    UnknownSuite(String),

    #[error("malformed input at byte offset {offset} (line {line}, column {column}): {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wraps a serde_json error with the byte offset into the source text.
    pub fn from_json(err: serde_json::Error, source: &str) -> Error {
        let (line, column) = (err.line(), err.column());
        let offset = byte_offset(source, line, column);
        Error::Parse {
            offset,
            line,
            column,
            message: err.to_string(),
        }
    }
}

fn byte_offset(source: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (idx, l) in source.split('\n').enumerate() {
        if idx + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len() + 1;
    }
    source.len()
}
