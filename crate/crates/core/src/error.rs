use thiserror::Error;

use crate::geom::PositionClass;
use crate::graph::Edge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("three of the points {0:?} are collinear in a general-position set")]
    DegenerateInput([usize; 3]),
    #[error("segments {0:?} and {1:?} do not cross")]
    NotCrossing(Edge, Edge),
    #[error("edges {0:?} and {1:?} share an endpoint")]
    SharedEndpoint(Edge, Edge),
    #[error("point set contains duplicate points {0} and {1}")]
    DuplicatePoints(usize, usize),
    #[error("coordinate {0} of point {1} exceeds the supported magnitude 2^20")]
    CoordinateOutOfRange(i64, usize),
    #[error("point set violates its declared class {declared:?}: {reason}")]
    InvalidPointSet { declared: PositionClass, reason: String },
    #[error("engine requires {expected}, got {found:?}")]
    PositionClassMismatch { expected: &'static str, found: PositionClass },
    #[error("color constraint violated: {0}")]
    ColorConstraint(String),
    #[error("expected equally many red and blue points, got {red} red and {blue} blue")]
    ColorCountMismatch { red: usize, blue: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("illegal flip: {0}")]
    IllegalFlip(String),
    #[error("tree is not a double star around edge ({0}, {1})")]
    NotDoubleStar(usize, usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("instance with n = {n} exceeds the exhaustive-search limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("{engine}: {flips} flips exceed the bound {bound}")]
    BoundViolation { engine: String, flips: usize, bound: f64 },
    #[error("engine invariant broken: {0}")]
    EngineInvariant(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
