//! Exact flip-based untangling of geometric matchings and spanning trees.

pub mod bench;
pub mod engine;
pub mod error;
pub mod gen;
pub mod geom;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod svg;

pub use error::{Error, Result};
pub use geom::{Color, Point, PointSet, PositionClass};
pub use graph::{Edge, FlipGraph, FlipStep, GraphKind, Matching, SpanningTree, Trace};
