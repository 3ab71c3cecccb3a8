//! Instance text files and JSON trace files.
//!
//! An instance file is line oriented:
//!
//! ```text
//! # comment
//! kind matching
//! class convex
//! point 0 10 R
//! point 10 0 B
//! edge 0 1
//! ```
//!
//! `kind` is `matching` or `tree`, `class` is `general`, `convex` or
//! `semicollinear`. Colors are optional; a matching on colored points is a
//! red-blue matching. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::{EngineReport, Subcall};
use crate::error::{Error, Result};
use crate::geom::{Color, Point, PointSet, PositionClass};
use crate::graph::{Edge, FlipGraph, GraphKind, Matching, SpanningTree, Trace};

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Matching(Matching),
    Tree(SpanningTree),
}

impl Instance {
    pub fn points(&self) -> &PointSet {
        match self {
            Instance::Matching(m) => m.points(),
            Instance::Tree(t) => t.points(),
        }
    }

    pub fn edges(&self) -> &[Edge] {
        match self {
            Instance::Matching(m) => m.edges(),
            Instance::Tree(t) => t.edges(),
        }
    }

    pub fn kind(&self) -> GraphKind {
        match self {
            Instance::Matching(_) => GraphKind::Matching,
            Instance::Tree(_) => GraphKind::Tree,
        }
    }
}

impl From<Matching> for Instance {
    fn from(m: Matching) -> Self {
        Instance::Matching(m)
    }
}

impl From<SpanningTree> for Instance {
    fn from(t: SpanningTree) -> Self {
        Instance::Tree(t)
    }
}

fn class_name(c: PositionClass) -> &'static str {
    match c {
        PositionClass::General => "general",
        PositionClass::Convex => "convex",
        PositionClass::SemiCollinear => "semicollinear",
    }
}

/// Canonical text form of an instance.
pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let kind = match inst.kind() {
        GraphKind::Matching => "matching",
        GraphKind::Tree => "tree",
    };
    let _ = writeln!(out, "kind {kind}");
    let _ = writeln!(out, "class {}", class_name(inst.points().class()));
    for p in inst.points().points() {
        let color = match p.color {
            Color::Red => " R",
            Color::Blue => " B",
            Color::None => "",
        };
        let _ = writeln!(out, "point {} {}{color}", p.x, p.y);
    }
    for e in inst.edges() {
        let _ = writeln!(out, "edge {} {}", e.0, e.1);
    }
    out
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut kind = None;
    let mut class = None;
    let mut points = Vec::new();
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |msg: String| Error::Parse { line, msg };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let int = |s: &str| s.parse::<i64>().map_err(|_| err(format!("expected an integer, got {s:?}")));
        match fields.as_slice() {
            ["kind", "matching"] => kind = Some(GraphKind::Matching),
            ["kind", "tree"] => kind = Some(GraphKind::Tree),
            ["class", c] => {
                class = Some(match *c {
                    "general" => PositionClass::General,
                    "convex" => PositionClass::Convex,
                    "semicollinear" => PositionClass::SemiCollinear,
                    other => return Err(err(format!("unknown class {other:?}"))),
                })
            }
            ["point", x, y] => points.push(Point::new(int(x)?, int(y)?)),
            ["point", x, y, c] => {
                let color = match *c {
                    "R" => Color::Red,
                    "B" => Color::Blue,
                    other => return Err(err(format!("unknown color {other:?}"))),
                };
                points.push(Point::colored(int(x)?, int(y)?, color));
            }
            ["edge", a, b] => {
                let (a, b) = (int(a)?, int(b)?);
                if a < 0 || b < 0 || a == b {
                    return Err(err(format!("bad edge {a} {b}")));
                }
                edges.push((a as usize, b as usize, line));
            }
            _ => return Err(err(format!("unrecognized line {content:?}"))),
        }
    }
    let kind = kind.ok_or(Error::Parse { line: 0, msg: "missing kind line".into() })?;
    let class = class.ok_or(Error::Parse { line: 0, msg: "missing class line".into() })?;
    let n = points.len();
    if let Some(&(a, b, line)) = edges.iter().find(|&&(a, b, _)| a >= n || b >= n) {
        return Err(Error::Parse { line, msg: format!("edge {a} {b} refers to a missing point") });
    }
    let colored = points.iter().filter(|p| p.color != Color::None).count();
    if colored != 0 && colored != n {
        return Err(Error::ColorConstraint("either all points or none must be colored".into()));
    }
    let ps = Arc::new(PointSet::new(points, class)?);
    let edges = edges.into_iter().map(|(a, b, _)| Edge::new(a, b)).collect();
    Ok(match kind {
        GraphKind::Matching => Instance::Matching(Matching::new(ps, edges, colored == n && n > 0)?),
        GraphKind::Tree => Instance::Tree(SpanningTree::new(ps, edges)?),
    })
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn save_instance(path: impl AsRef<Path>, inst: &Instance) -> Result<()> {
    std::fs::write(path, write_instance(inst))?;
    Ok(())
}

/// Serialized engine run: the points, every flip, and the bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceFile {
    pub engine: String,
    pub points: Vec<Point>,
    pub flips_used: usize,
    pub bound_value: f64,
    pub plane: bool,
    pub trace: Trace,
    pub subcalls: Vec<SubcallRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubcallRecord {
    pub kind: String,
    pub flips: usize,
    pub bound: usize,
}

impl From<&Subcall> for SubcallRecord {
    fn from(s: &Subcall) -> Self {
        SubcallRecord { kind: s.kind.to_string(), flips: s.flips, bound: s.bound }
    }
}

impl TraceFile {
    pub fn from_report<G: FlipGraph>(report: &EngineReport<G>) -> Self {
        TraceFile {
            engine: report.engine.to_string(),
            points: report.final_state.points().points().to_vec(),
            flips_used: report.flips_used,
            bound_value: report.bound_value,
            plane: report.plane,
            trace: report.trace.clone(),
            subcalls: report.subcalls.iter().map(SubcallRecord::from).collect(),
        }
    }
}

pub fn save_trace(path: impl AsRef<Path>, trace: &TraceFile) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(trace)?)?;
    Ok(())
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<TraceFile> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}
