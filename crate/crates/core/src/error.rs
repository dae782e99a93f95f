use thiserror::Error;

use crate::quiver::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("unknown Cartan type `{0}` (expected A<n>, D<n>, E6, E7 or E8)")]
    UnknownType(String),
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: i64, rank: usize },
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("interleaving {0}")]
    BadInterleaving(String),
    #[error("enumeration cap of {cap} elements exceeded")]
    CapExceeded { cap: usize },
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("vertex {0} does not exist")]
    MissingVertex(VertexId),
    #[error("vertex {0} is frozen and cannot be mutated")]
    FrozenVertex(VertexId),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("Dynkin diagram contains a cycle; branch decomposition is only defined for forests")]
    UnsupportedDiagram,
    #[error("quiver is not planar on sheet {sheet}; run the per-sheet planarity check for details")]
    NotPlanar { sheet: usize },
    #[error("layout error: {0}")]
    Layout(String),
    #[error("path {0:?} is not composable")]
    NotComposable(Vec<usize>),
    #[error("face {0:?} is not reachable from the boundary")]
    Unreachable(Vec<usize>),
    #[error("certificate replay failed for cycle {0:?}")]
    ReplayFailed(Vec<usize>),
    #[error("cycle of length {found} exceeds the length cap {cap}")]
    CycleCap { found: usize, cap: usize },
    #[error("membership basis of dimension {dimension} exceeds the cap {cap}")]
    BasisCap { dimension: usize, cap: usize },
}
