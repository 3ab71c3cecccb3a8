//! Matching and spanning-tree states, crossing enumeration and flip moves.
//!
//! States are immutable values over a shared [`PointSet`]; a flip produces a
//! new state. Edge lists are kept sorted so iteration order, and therefore
//! every engine trace, is reproducible.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{dist, intersection_point, segments_cross, Color, PointSet, RationalPoint};

/// Undirected edge stored with its smaller endpoint first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint that is not `v`. Panics if `v` is not an endpoint.
    pub fn other(&self, v: usize) -> usize {
        if self.0 == v {
            self.1
        } else {
            assert_eq!(self.1, v, "{v} is not an endpoint of {self:?}");
            self.0
        }
    }

    pub fn shares_endpoint(&self, e: &Edge) -> bool {
        self.contains(e.0) || self.contains(e.1)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Sorts both edges of a pair and the pair itself.
pub fn edge_pair(a: Edge, b: Edge) -> [Edge; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

/// True iff two vertex-disjoint edges cross properly.
#[inline]
pub fn edges_cross(ps: &PointSet, e: Edge, f: Edge) -> bool {
    !e.shares_endpoint(&f) && segments_cross(ps.point(e.0), ps.point(e.1), ps.point(f.0), ps.point(f.1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphKind {
    Matching,
    Tree,
}

/// Common surface of the flippable geometric graphs.
pub trait FlipGraph: Clone + Send + Sync {
    fn point_set(&self) -> &Arc<PointSet>;

    fn edges(&self) -> &[Edge];

    fn kind(&self) -> GraphKind;

    /// The legal replacements for the crossing pair `e1`, `e2`.
    fn candidates(&self, e1: Edge, e2: Edge) -> Result<Vec<[Edge; 2]>>;

    /// Same class and point set with a new, already validated edge list.
    fn with_edges(&self, edges: Vec<Edge>) -> Self;

    /// Whether flips must respect red-blue edges.
    fn chromatic(&self) -> bool {
        false
    }

    fn points(&self) -> &PointSet {
        self.point_set()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matching {
    points: Arc<PointSet>,
    edges: Vec<Edge>,
    chromatic: bool,
}

impl Matching {
    /// Validates perfectness and, when `chromatic`, the red-blue condition.
    pub fn new(points: Arc<PointSet>, edges: Vec<Edge>, chromatic: bool) -> Result<Self> {
        let n = points.len();
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidGraph(format!("perfect matching needs even n, got {n}")));
        }
        let mut seen = vec![false; n];
        for e in &edges {
            if e.1 >= n || e.0 == e.1 {
                return Err(Error::InvalidGraph(format!("bad edge {e:?} for n = {n}")));
            }
            for v in [e.0, e.1] {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidGraph(format!("point {v} matched twice")));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidGraph(format!("point {v} is unmatched")));
        }
        if chromatic {
            let red = points.indices_of(Color::Red).len();
            let blue = points.indices_of(Color::Blue).len();
            if red != blue || red + blue != n {
                return Err(Error::ColorCountMismatch { red, blue });
            }
            if let Some(e) = edges.iter().find(|e| points.color(e.0) == points.color(e.1)) {
                return Err(Error::ColorConstraint(format!("edge {e:?} is monochromatic")));
            }
        }
        let mut edges: Vec<Edge> = edges.into_iter().map(|e| Edge::new(e.0, e.1)).collect();
        edges.sort();
        Ok(Matching { points, edges, chromatic })
    }

    pub fn shared_points(&self) -> &Arc<PointSet> {
        &self.points
    }

    pub fn is_chromatic(&self) -> bool {
        self.chromatic
    }

    /// Partner of every point.
    pub fn partners(&self) -> Vec<usize> {
        let mut mate = vec![usize::MAX; self.points.len()];
        for e in &self.edges {
            mate[e.0] = e.1;
            mate[e.1] = e.0;
        }
        mate
    }
}

impl FlipGraph for Matching {
    fn point_set(&self) -> &Arc<PointSet> {
        &self.points
    }

    fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn kind(&self) -> GraphKind {
        GraphKind::Matching
    }

    fn candidates(&self, e1: Edge, e2: Edge) -> Result<Vec<[Edge; 2]>> {
        flip_candidates_matching(self, e1, e2)
    }

    fn with_edges(&self, mut edges: Vec<Edge>) -> Self {
        edges.sort();
        Matching { points: self.points.clone(), edges, chromatic: self.chromatic }
    }

    fn chromatic(&self) -> bool {
        self.chromatic
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpanningTree {
    points: Arc<PointSet>,
    edges: Vec<Edge>,
}

impl SpanningTree {
    pub fn new(points: Arc<PointSet>, edges: Vec<Edge>) -> Result<Self> {
        let n = points.len();
        if edges.len() + 1 != n {
            return Err(Error::InvalidGraph(format!(
                "spanning tree on {n} points needs {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut dsu = Dsu::new(n);
        for e in &edges {
            if e.0 >= n || e.1 >= n || e.0 == e.1 {
                return Err(Error::InvalidGraph(format!("bad edge {e:?} for n = {n}")));
            }
            if !dsu.union(e.0, e.1) {
                return Err(Error::InvalidGraph(format!("edge {e:?} closes a cycle")));
            }
        }
        let mut edges: Vec<Edge> = edges.into_iter().map(|e| Edge::new(e.0, e.1)).collect();
        edges.sort();
        Ok(SpanningTree { points, edges })
    }

    pub fn shared_points(&self) -> &Arc<PointSet> {
        &self.points
    }

    pub fn degrees(&self) -> Vec<usize> {
        degrees(self.points.len(), &self.edges)
    }
}

impl FlipGraph for SpanningTree {
    fn point_set(&self) -> &Arc<PointSet> {
        &self.points
    }

    fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn kind(&self) -> GraphKind {
        GraphKind::Tree
    }

    fn candidates(&self, e1: Edge, e2: Edge) -> Result<Vec<[Edge; 2]>> {
        flip_candidates_tree(self, e1, e2).map(|c| vec![c])
    }

    fn with_edges(&self, mut edges: Vec<Edge>) -> Self {
        edges.sort();
        SpanningTree { points: self.points.clone(), edges }
    }
}

pub fn degrees(n: usize, edges: &[Edge]) -> Vec<usize> {
    let mut deg = vec![0; n];
    for e in edges {
        deg[e.0] += 1;
        deg[e.1] += 1;
    }
    deg
}

/// Minimal union-find used for connectivity checks.
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// All crossing pairs, each ordered and listed lexicographically.
pub fn crossings<G: FlipGraph>(g: &G) -> Vec<(Edge, Edge)> {
    let ps = g.points();
    let edges = g.edges();
    let mut out = Vec::new();
    for (i, &e) in edges.iter().enumerate() {
        for &f in &edges[i + 1..] {
            if edges_cross(ps, e, f) {
                out.push((e, f));
            }
        }
    }
    out
}

pub fn crossing_count<G: FlipGraph>(g: &G) -> usize {
    crossings(g).len()
}

/// Lexicographically smallest crossing pair, if any.
pub fn first_crossing<G: FlipGraph>(g: &G) -> Option<(Edge, Edge)> {
    let ps = g.points();
    let edges = g.edges();
    for (i, &e) in edges.iter().enumerate() {
        if let Some(&f) = edges[i + 1..].iter().find(|&&f| edges_cross(ps, e, f)) {
            return Some((e, f));
        }
    }
    None
}

pub fn is_plane<G: FlipGraph>(g: &G) -> bool {
    first_crossing(g).is_none()
}

/// Edges of `g` crossing `e`.
pub fn edges_crossing<G: FlipGraph>(g: &G, e: Edge) -> Vec<Edge> {
    g.edges().iter().copied().filter(|&f| edges_cross(g.points(), e, f)).collect()
}

/// Total Euclidean length of the edges.
pub fn weight<G: FlipGraph>(g: &G) -> f64 {
    edge_weight(g.points(), g.edges())
}

pub fn edge_weight(ps: &PointSet, edges: &[Edge]) -> f64 {
    edges.iter().map(|e| dist(ps.point(e.0), ps.point(e.1))).sum()
}

fn require_crossing(ps: &PointSet, e1: Edge, e2: Edge) -> Result<()> {
    if !edges_cross(ps, e1, e2) {
        return Err(Error::NotCrossing(e1, e2));
    }
    Ok(())
}

/// Re-pairings of crossing matching edges. Monochromatic: both
/// `{ac, bd}` and `{ad, bc}`; bichromatic: the single color-respecting one.
pub fn flip_candidates_matching(m: &Matching, e1: Edge, e2: Edge) -> Result<Vec<[Edge; 2]>> {
    let ps = m.points();
    require_crossing(ps, e1, e2)?;
    let (a, b, c, d) = (e1.0, e1.1, e2.0, e2.1);
    let both = [
        edge_pair(Edge::new(a, c), Edge::new(b, d)),
        edge_pair(Edge::new(a, d), Edge::new(b, c)),
    ];
    if !m.chromatic {
        return Ok(both.to_vec());
    }
    let ok = |pair: &[Edge; 2]| pair.iter().all(|e| ps.color(e.0) != ps.color(e.1));
    let legal: Vec<[Edge; 2]> = both.into_iter().filter(ok).collect();
    debug_assert_eq!(legal.len(), 1);
    Ok(legal)
}

/// The unique re-pairing of a crossing tree-edge pair that keeps a spanning tree.
pub fn flip_candidates_tree(t: &SpanningTree, e1: Edge, e2: Edge) -> Result<[Edge; 2]> {
    if e1.shares_endpoint(&e2) {
        return Err(Error::SharedEndpoint(e1, e2));
    }
    let ps = t.points();
    require_crossing(ps, e1, e2)?;
    tree_reconnection(ps.len(), t.edges(), e1, e2)
}

/// Which of the two re-pairings of `e1`, `e2` reconnects the forest left
/// after deleting them. Geometry-free; shared with the oracle.
pub(crate) fn tree_reconnection(n: usize, edges: &[Edge], e1: Edge, e2: Edge) -> Result<[Edge; 2]> {
    let mut dsu = Dsu::new(n);
    for &e in edges {
        if e != e1 && e != e2 {
            dsu.union(e.0, e.1);
        }
    }
    let (a, b, c, d) = (e1.0, e1.1, e2.0, e2.1);
    for pair in [[Edge::new(a, c), Edge::new(b, d)], [Edge::new(a, d), Edge::new(b, c)]] {
        let (r0, r1) = (dsu.find(pair[0].0), dsu.find(pair[0].1));
        let (r2, r3) = (dsu.find(pair[1].0), dsu.find(pair[1].1));
        if r0 == r1 || r2 == r3 {
            continue;
        }
        // the two new edges must join three distinct components
        let mut roots = [r0, r1, r2, r3];
        roots.sort();
        if roots[0] == roots[1] && roots[2] == roots[3] {
            continue;
        }
        return Ok(edge_pair(pair[0], pair[1]));
    }
    Err(Error::InvalidGraph(format!("{e1:?} and {e2:?} admit no tree-preserving flip")))
}

/// One flip: two removed crossing edges replaced by two added edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlipStep {
    pub removed: [Edge; 2],
    pub added: [Edge; 2],
    pub crossing_point: RationalPoint,
    pub rule: String,
}

impl FlipStep {
    pub fn new(ps: &PointSet, removed: [Edge; 2], added: [Edge; 2], rule: impl Into<String>) -> Result<Self> {
        let [e, f] = removed;
        let o = intersection_point(ps.point(e.0), ps.point(e.1), ps.point(f.0), ps.point(f.1))
            .map_err(|_| Error::NotCrossing(e, f))?;
        Ok(FlipStep {
            removed: edge_pair(e, f),
            added: edge_pair(added[0], added[1]),
            crossing_point: o,
            rule: rule.into(),
        })
    }
}

/// Applies a flip after checking that it is legal for `g`.
pub fn apply_flip<G: FlipGraph>(g: &G, step: &FlipStep) -> Result<G> {
    let [e1, e2] = step.removed;
    let edges = g.edges();
    for e in [e1, e2] {
        if edges.binary_search(&e).is_err() {
            return Err(Error::IllegalFlip(format!("edge {e:?} is not present")));
        }
    }
    let cands = g
        .candidates(e1, e2)
        .map_err(|err| Error::IllegalFlip(err.to_string()))?;
    let added = edge_pair(step.added[0], step.added[1]);
    if !cands.contains(&added) {
        return Err(Error::IllegalFlip(format!(
            "{:?} is not a legal replacement for {e1:?} x {e2:?} (legal: {cands:?})",
            added
        )));
    }
    let mut next: Vec<Edge> = edges.iter().copied().filter(|&e| e != e1 && e != e2).collect();
    next.extend(added);
    Ok(g.with_edges(next))
}

/// Full flip sequence with the weight and crossing count of every state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub initial: Vec<Edge>,
    pub steps: Vec<FlipStep>,
    /// `weights[k]` is the weight before step `k`; one extra entry for the final state.
    pub weights: Vec<f64>,
    pub crossing_counts: Vec<usize>,
    pub final_edges: Vec<Edge>,
}

impl Trace {
    pub fn start<G: FlipGraph>(g: &G) -> Self {
        Trace {
            initial: g.edges().to_vec(),
            steps: Vec::new(),
            weights: vec![weight(g)],
            crossing_counts: vec![crossing_count(g)],
            final_edges: g.edges().to_vec(),
        }
    }

    pub fn push<G: FlipGraph>(&mut self, step: FlipStep, after: &G) {
        self.steps.push(step);
        self.weights.push(weight(after));
        self.crossing_counts.push(crossing_count(after));
        self.final_edges = after.edges().to_vec();
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn weight_strictly_decreasing(&self) -> bool {
        self.weights.windows(2).all(|w| w[1] < w[0])
    }

    /// Edge lists of every state, initial first.
    pub fn states(&self) -> Vec<Vec<Edge>> {
        let mut cur = self.initial.clone();
        let mut out = vec![cur.clone()];
        for s in &self.steps {
            cur.retain(|e| !s.removed.contains(e));
            cur.extend(s.added);
            cur.sort();
            out.push(cur.clone());
        }
        out
    }
}
