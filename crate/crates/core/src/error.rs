use std::fmt;

use thiserror::Error;

use crate::graph::Edge;

/// Which of the three collapsibility conditions an edge `ij` failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollapseFailure {
    /// `i` has more than one outgoing edge.
    SourceNotOrdinary,
    /// The reverse edge `ji` is present.
    ReverseEdgePresent,
    /// Some vertex `k` has both `ki` and `kj`.
    CoveredBy(usize),
    /// `ij` is not an edge of the graph at all.
    NotAnEdge,
}

impl fmt::Display for CollapseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CollapseFailure::SourceNotOrdinary => write!(f, "source vertex is not ordinary"),
            CollapseFailure::ReverseEdgePresent => write!(f, "reverse edge is present"),
            CollapseFailure::CoveredBy(k) => write!(f, "vertex {} covers the source", k + 1),
            CollapseFailure::NotAnEdge => write!(f, "not an edge of the graph"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("loop edge at vertex {}", .0 + 1)]
    LoopEdge(usize),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("vertex {vertex} out of range 1..={m}")]
    VertexOutOfRange { vertex: usize, m: usize },
    #[error("{m} vertices exceeds the supported maximum of {max}")]
    TooManyVertices { m: usize, max: usize },
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("graph is not strongly connected")]
    Disconnected,
    #[error("vertices must be distinct, got {} twice", .0 + 1)]
    SameVertex(usize),
    #[error("edge {edge} is not collapsible: {reason}")]
    NotCollapsible { edge: Edge, reason: CollapseFailure },
    #[error("not a proper connected subgraph: {0}")]
    NotProperSubgraph(String),
    #[error("weight on edge {0} must be strictly positive")]
    NonPositiveWeight(Edge),
    #[error("missing weight for edge {0}")]
    MissingWeight(Edge),
    #[error("weight given for {0}, which is not an edge of the graph")]
    WeightOffGraph(Edge),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("balance system kernel has dimension {0}, expected 1")]
    KernelDimension(usize),
    #[error("edge {0} has zero aggregate offer")]
    InactiveEdge(Edge),
    #[error("offer on edge {0} is negative")]
    NegativeOffer(Edge),
    #[error("offer matrices refer to different graphs")]
    GraphMismatch,
    #[error("unsupported mechanism class {0}")]
    UnsupportedClass(String),
    #[error("m = {m} outside supported range {min}..={max}")]
    UnsupportedM { m: usize, min: usize, max: usize },
    #[error("objective weights must be strictly positive")]
    NonPositiveObjectiveWeight,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
