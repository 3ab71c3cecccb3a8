//! Untangling spanning trees on convex point sets by repeated hull-edge
//! contraction, and the double-star subroutine that finishes each level.
//!
//! The engine keeps the real tree and a representative map `rep`. Every
//! contracted vertex points at the vertex it was merged into, so an edge
//! `ab` of the real tree is seen at the current level as `rep[a] rep[b]`.
//! Merged groups are contiguous arcs of the hull and connected subtrees, so
//! two rendered edges on four distinct representatives cross exactly when
//! their real edges do, and a rendered flip is a real flip. The new edge at
//! a merged vertex keeps the real endpoint of the edge it replaces, which is
//! how edges that came from the contracted vertex stay attached to it.

use std::collections::VecDeque;
use std::sync::Arc;

use super::{EngineReport, Recorder};
use crate::error::{Error, Result};
use crate::geom::{orientation, Orientation, PointSet, PositionClass};
use crate::graph::{edge_pair, edges_cross, is_plane, Edge, FlipGraph, SpanningTree};

/// Tree state seen through a representative map.
struct Contracted {
    rec: Recorder<SpanningTree>,
    ps: Arc<PointSet>,
    rep: Vec<usize>,
}

impl Contracted {
    fn new(t: &SpanningTree) -> Self {
        let n = t.points().len();
        Contracted { rec: Recorder::new(t.clone()), ps: t.shared_points().clone(), rep: (0..n).collect() }
    }

    fn rendered(&self) -> Vec<Edge> {
        self.rec
            .state
            .edges()
            .iter()
            .filter(|e| self.rep[e.0] != self.rep[e.1])
            .map(|e| Edge::new(self.rep[e.0], self.rep[e.1]))
            .collect()
    }

    fn real_edge(&self, r: Edge) -> Result<Edge> {
        self.rec
            .state
            .edges()
            .iter()
            .copied()
            .find(|e| Edge::new(self.rep[e.0], self.rep[e.1]) == r && self.rep[e.0] != self.rep[e.1])
            .ok_or_else(|| Error::EngineInvariant(format!("no tree edge renders as {r:?}")))
    }

    fn cross(&self, e: Edge, f: Edge) -> bool {
        edges_cross(&self.ps, e, f)
    }

    fn rendered_plane(&self) -> bool {
        let r = self.rendered();
        r.iter().enumerate().all(|(i, &e)| r[i + 1..].iter().all(|&f| !self.cross(e, f)))
    }

    fn degree(&self, v: usize) -> usize {
        self.rendered().iter().filter(|e| e.contains(v)).count()
    }

    /// Flips two crossing rendered edges and checks that the rendered result
    /// is `expected`.
    fn flip(&mut self, e1: Edge, e2: Edge, expected: [Edge; 2], rule: &str) -> Result<()> {
        let (r1, r2) = (self.real_edge(e1)?, self.real_edge(e2)?);
        let added = self.rec.flip_forced(r1, r2, rule)?;
        let got = edge_pair(
            Edge::new(self.rep[added[0].0], self.rep[added[0].1]),
            Edge::new(self.rep[added[1].0], self.rep[added[1].1]),
        );
        if got != edge_pair(expected[0], expected[1]) {
            return Err(Error::EngineInvariant(format!(
                "{rule}: flipping {e1:?} x {e2:?} gave {got:?}, expected {expected:?}"
            )));
        }
        Ok(())
    }

    /// Vertex sequence of the rendered path from `a` to `b`.
    fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let n = self.rep.len();
        let mut adj = vec![Vec::new(); n];
        for e in self.rendered() {
            adj[e.0].push(e.1);
            adj[e.1].push(e.0);
        }
        let mut prev = vec![usize::MAX; n];
        prev[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![b];
        while *path.last().unwrap() != a {
            path.push(prev[*path.last().unwrap()]);
        }
        path.reverse();
        path
    }

    /// Makes a rendered hull edge of the polygon `active` (clockwise) with at
    /// most two flips and returns it.
    fn boundary_edge(&mut self, active: &[usize]) -> Result<Edge> {
        let k = active.len();
        let mut pos = vec![usize::MAX; self.rep.len()];
        for (i, &v) in active.iter().enumerate() {
            pos[v] = i;
        }
        let (mut best, mut best_depth) = (None, usize::MAX);
        for e in self.rendered() {
            let forward = (pos[e.1] + k - pos[e.0]) % k - 1;
            let depth = forward.min(k - 2 - forward);
            if depth < best_depth {
                best_depth = depth;
                best = Some(if forward == depth { (e.0, e.1) } else { (e.1, e.0) });
            }
        }
        let (first, far) = best.ok_or_else(|| Error::EngineInvariant("empty tree".into()))?;
        let m = best_depth;
        if m == 0 {
            return Ok(Edge::new(first, far));
        }
        // p[0] = p1, ..., p[m + 1] = p_{m+2}, walking over the shallow side
        let p: Vec<usize> = (0..=m + 1).map(|t| active[(pos[first] + t) % k]).collect();
        let (p1, p2, pm1, pm2) = (p[0], p[1], p[m], p[m + 1]);
        let e = Edge::new;
        let delta = self.path(p2, pm2);
        let pk = delta[1];
        if delta.contains(&p1) {
            self.flip(e(p1, pm2), e(p2, pk), [e(p1, p2), e(pm2, pk)], "boundary-edge")?;
            return Ok(e(p1, p2));
        }
        if m == 1 {
            self.flip(e(p1, pm2), e(p2, pk), [e(p2, pm2), e(p1, pk)], "boundary-edge")?;
            return Ok(e(p2, pm2));
        }
        let delta2 = self.path(pm1, p1);
        let pk2 = delta2[1];
        if delta2.contains(&pm2) {
            self.flip(e(p1, pm2), e(pm1, pk2), [e(pm1, pm2), e(p1, pk2)], "boundary-edge")?;
            return Ok(e(pm1, pm2));
        }
        self.flip(e(p1, pm2), e(pm1, pk2), [e(p1, pm1), e(pm2, pk2)], "boundary-edge")?;
        self.flip(e(p1, pm1), e(p2, pk), [e(p1, p2), e(pk, pm1)], "boundary-edge")?;
        Ok(e(p1, p2))
    }

    /// Removes every crossing between edges at `x` and edges at `y`, where
    /// `xy` is a rendered edge, using at most `min(deg x, deg y) - 1` flips.
    fn double_star(&mut self, x: usize, y: usize) -> Result<usize> {
        let (dx, dy) = (self.degree(x), self.degree(y));
        // `v` has the smaller degree; it gains one uncrossed edge per flip
        let (u, v) = if (dx, x) < (dy, y) { (y, x) } else { (x, y) };
        let start = self.rec.flips();
        let ps = self.ps.clone();
        let o = |a: usize, b: usize, c: usize| orientation(ps.point(a), ps.point(b), ps.point(c));
        for side in [Orientation::CounterClockwise, Orientation::Clockwise] {
            loop {
                let r = self.rendered();
                let u_edges: Vec<usize> = r.iter().filter(|e| e.contains(u) && !e.contains(v)).map(|e| e.other(u)).collect();
                let crossed: Vec<usize> = r
                    .iter()
                    .filter(|e| e.contains(v) && !e.contains(u))
                    .map(|e| e.other(v))
                    .filter(|&w| o(u, v, w) == side)
                    .filter(|&w| u_edges.iter().any(|&z| self.cross(Edge::new(v, w), Edge::new(u, z))))
                    .collect();
                // angle uvw is smaller than angle uvw' iff u and w' lie on
                // opposite sides of line vw; take the widest
                let Some(vp) = crossed.iter().copied().reduce(|a, b| if o(v, a, u) != o(v, a, b) { b } else { a })
                else {
                    break;
                };
                let up = u_edges
                    .iter()
                    .copied()
                    .filter(|&z| self.cross(Edge::new(v, vp), Edge::new(u, z)))
                    .reduce(|a, b| if o(u, a, v) != o(u, a, b) { a } else { b })
                    .expect("crossed edge has a crossing partner");
                let before = self.free_edges_at(v);
                self.flip(Edge::new(v, vp), Edge::new(u, up), [Edge::new(v, up), Edge::new(u, vp)], "double-star")?;
                let after = self.free_edges_at(v);
                if after <= before {
                    return Err(Error::EngineInvariant(format!(
                        "double-star flip left {after} uncrossed edges at {v}, had {before}"
                    )));
                }
            }
        }
        Ok(self.rec.flips() - start)
    }

    fn free_edges_at(&self, v: usize) -> usize {
        let r = self.rendered();
        r.iter().filter(|e| e.contains(v) && r.iter().all(|&f| !self.cross(**e, f))).count()
    }

    /// Untangles the rendered tree over `active` (clockwise).
    fn untangle(&mut self, active: &[usize]) -> Result<()> {
        if active.len() <= 3 || self.rendered_plane() {
            return Ok(());
        }
        let before = self.rec.flips();
        let boundary = self.boundary_edge(active)?;
        self.rec.subcall("boundary-edge", self.rec.flips() - before, 2)?;

        let (a, b) = (boundary.0, boundary.1);
        let (da, db) = (self.degree(a), self.degree(b));
        let (u, v) = if (da, a) < (db, b) { (a, b) } else if (db, b) < (da, a) { (b, a) } else { unreachable!() };
        let moved: Vec<usize> = (0..self.rep.len()).filter(|&x| self.rep[x] == u).collect();
        for &x in &moved {
            self.rep[x] = v;
        }
        let rest: Vec<usize> = active.iter().copied().filter(|&x| x != u).collect();
        self.untangle(&rest)?;
        for &x in &moved {
            self.rep[x] = u;
        }

        let r = self.rendered();
        for (i, &e) in r.iter().enumerate() {
            for &f in &r[i + 1..] {
                let star_pair = (e.contains(u) && f.contains(v)) || (e.contains(v) && f.contains(u));
                if self.cross(e, f) && !star_pair {
                    return Err(Error::EngineInvariant(format!(
                        "after reinserting {u}, {e:?} x {f:?} is not a crossing between the stars of {u} and {v}"
                    )));
                }
            }
        }
        let bound = self.degree(u).min(self.degree(v)) - 1;
        let flips = self.double_star(u, v)?;
        self.rec.subcall("double-star", flips, bound)?;
        if !self.rendered_plane() {
            return Err(Error::EngineInvariant(format!("level with {} vertices left crossings", active.len())));
        }
        Ok(())
    }
}

fn require_convex(t: &SpanningTree) -> Result<()> {
    match t.points().class() {
        PositionClass::Convex => Ok(()),
        found => Err(Error::PositionClassMismatch { expected: "convex position", found }),
    }
}

/// Result of [`make_boundary_edge_tree`].
#[derive(Clone, Debug)]
pub struct BoundaryEdge {
    pub report: EngineReport<SpanningTree>,
    pub edge: Edge,
}

/// Turns a tree on a convex point set into one containing a hull edge, with
/// at most two flips.
pub fn make_boundary_edge_tree(t: &SpanningTree) -> Result<BoundaryEdge> {
    require_convex(t)?;
    let mut ctx = Contracted::new(t);
    let active: Vec<usize> = (0..t.points().len()).collect();
    let edge = if active.len() < 2 { Edge(0, 0) } else { ctx.boundary_edge(&active)? };
    let report = EngineReport::from_recorder("boundary-edge", 2.0, ctx.rec);
    Ok(BoundaryEdge { report, edge })
}

/// Uncrosses a double star around the edge `uv` with at most
/// `min(deg u, deg v) - 1` flips.
pub fn uncross_double_star(t: &SpanningTree, u: usize, v: usize) -> Result<EngineReport<SpanningTree>> {
    match t.points().class() {
        PositionClass::General | PositionClass::Convex => {}
        found => return Err(Error::PositionClassMismatch { expected: "general or convex position", found }),
    }
    let uv = Edge::new(u, v);
    if u == v || !t.edges().contains(&uv) || t.edges().iter().any(|e| !e.contains(u) && !e.contains(v)) {
        return Err(Error::NotDoubleStar(u, v));
    }
    let deg = t.degrees();
    let bound = deg[u].min(deg[v]) - 1;
    let mut ctx = Contracted::new(t);
    let flips = ctx.double_star(u, v)?;
    ctx.rec.subcall("double-star", flips, bound)?;
    let report = EngineReport::from_recorder("double-star", bound as f64, ctx.rec);
    if !report.plane {
        return Err(Error::EngineInvariant("double star still has crossings".into()));
    }
    Ok(report)
}

/// Bound `3 n log2 n` checked against the contraction engine.
pub fn convex_tree_bound(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        3.0 * n as f64 * (n as f64).log2()
    }
}

/// Untangles a spanning tree on a convex point set: create a hull edge,
/// contract it, recurse, then reinsert the contracted vertex and resolve the
/// remaining double-star crossings. Degrees are preserved.
pub fn untangle_convex_tree(t: &SpanningTree) -> Result<EngineReport<SpanningTree>> {
    require_convex(t)?;
    let n = t.points().len();
    let mut ctx = Contracted::new(t);
    let active: Vec<usize> = (0..n).collect();
    ctx.untangle(&active)?;
    let report = EngineReport::from_recorder("convex-tree", convex_tree_bound(n), ctx.rec);
    if !is_plane(&report.final_state) {
        return Err(Error::EngineInvariant("convex tree engine ended with crossings".into()));
    }
    Ok(report)
}
