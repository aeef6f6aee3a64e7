use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("loop edge at vertex {0}")]
    LoopEdge(Vertex),

    #[error("vertex {v} out of range 1..={n}")]
    VertexOutOfRange { v: Vertex, n: usize },

    #[error("vertices must be distinct, got {0} twice")]
    NotDistinct(Vertex),

    #[error("edge multiplicity must be at least 1")]
    ZeroMultiplicity,

    #[error("graph must have at least {needed} vertices, has {has}")]
    TooFewVertices { needed: usize, has: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("{{{i},{j}}} is not a valid 2-separator here: {reason}")]
    NotASeparator { i: Vertex, j: Vertex, reason: String },

    #[error("vertex {0} is not a cut vertex")]
    NotACutVertex(Vertex),

    #[error("vertex {v} is not on the required side of the separation")]
    WrongSide { v: Vertex },

    #[error("enumeration needs {instances} edge instances, cap is {cap}")]
    EnumerationCap { instances: usize, cap: usize },

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A quantity that must be integral (or even, or nonnegative) by theorem
    /// came out otherwise.  Always indicates a counting bug, never bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
