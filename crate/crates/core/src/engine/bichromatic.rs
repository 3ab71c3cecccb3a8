//! Untangling red-blue matchings: convex point sets, and point sets whose
//! blue points lie on one horizontal line.

use std::cmp::Ordering;

use super::{EngineReport, Recorder};
use crate::engine::matching::ConvexCut;
use crate::error::{Error, Result};
use crate::geom::{cross, intersection_point, param_on_first, Color, Point, PointSet, PositionClass, RationalPoint};
use crate::graph::{edges_cross, is_plane, Edge, FlipGraph, Matching};

fn require_chromatic(m: &Matching, class: PositionClass, expected: &'static str) -> Result<()> {
    if m.points().class() != class {
        return Err(Error::PositionClassMismatch { expected, found: m.points().class() });
    }
    if !m.is_chromatic() {
        return Err(Error::ColorConstraint("expected a red-blue matching".into()));
    }
    Ok(())
}

/// Convex strategy with at most `n - 2` flips: at most two flips create a
/// hull edge, which is then set aside.
pub fn untangle_bichromatic_convex(m: &Matching) -> Result<EngineReport<Matching>> {
    require_chromatic(m, PositionClass::Convex, "convex position")?;
    let ps = m.points();
    let n = ps.len();
    let mut rec = Recorder::new(m.clone());
    let mut active: Vec<usize> = (0..n).collect();
    while active.len() >= 4 && !is_plane(&rec.state) {
        let mate = rec.state.partners();
        let cut = ConvexCut::min_depth(&active, &mate);
        let before = rec.flips();
        let hull_edge = if cut.depth == 0 {
            Edge::new(cut.p1, cut.far)
        } else {
            let side = cut.shallow_side(&active);
            let (p1, pm2) = (cut.p1, cut.far);
            let (p2, pm1) = (side[0], side[side.len() - 1]);
            let c1 = ps.color(p1);
            let e = Edge::new;
            let mut flip = |removed: [Edge; 2], added: [Edge; 2]| -> Result<()> {
                let got = rec.flip_forced(removed[0], removed[1], "bi-convex")?;
                if got != crate::graph::edge_pair(added[0], added[1]) {
                    return Err(Error::EngineInvariant(format!("bi-convex flip gave {got:?}, expected {added:?}")));
                }
                Ok(())
            };
            if ps.color(p2) != c1 {
                flip([e(p1, pm2), e(p2, mate[p2])], [e(p1, p2), e(pm2, mate[p2])])?;
                e(p1, p2)
            } else if ps.color(pm1) == c1 {
                flip([e(p1, pm2), e(pm1, mate[pm1])], [e(pm1, pm2), e(p1, mate[pm1])])?;
                e(pm1, pm2)
            } else {
                // b is the first point of the other color, a its predecessor
                let t = side.iter().position(|&x| ps.color(x) != c1).expect("the last point differs");
                let (a, b) = (side[t - 1], side[t]);
                let (a2, b2) = (mate[a], mate[b]);
                flip([e(b, b2), e(p1, pm2)], [e(b2, pm2), e(b, p1)])?;
                flip([e(b, p1), e(a, a2)], [e(p1, a2), e(a, b)])?;
                e(a, b)
            }
        };
        rec.subcall("boundary-edge", rec.flips() - before, 2)?;
        active.retain(|&v| !hull_edge.contains(v));
    }
    let bound = n.saturating_sub(2) as f64;
    Ok(EngineReport::from_recorder("bi-convex", bound, rec))
}

/// Geometry of one side of the blue line. `s` is `1` above and `-1` below;
/// multiplying orientation tests by `s` mirrors the lower side onto the upper.
#[derive(Clone, Copy)]
struct Side {
    s: i64,
    y0: i64,
}

impl Side {
    fn height(&self, p: &Point) -> i64 {
        self.s * (p.y - self.y0)
    }

    fn cross(&self, a: &Point, b: &Point, c: &Point) -> i64 {
        self.s * cross(a, b, c)
    }
}

/// `(blue, red)` endpoints of a red-blue edge.
fn ends(ps: &PointSet, e: Edge) -> (usize, usize) {
    if ps.color(e.0) == Color::Blue {
        (e.0, e.1)
    } else {
        (e.1, e.0)
    }
}

fn blue_line(ps: &PointSet) -> Result<i64> {
    ps.points()
        .iter()
        .find(|p| p.color == Color::Blue)
        .map(|p| p.y)
        .ok_or_else(|| Error::ColorConstraint("no blue points".into()))
}

fn crosses_any(ps: &PointSet, e: Edge, edges: &[Edge]) -> bool {
    edges.iter().any(|&f| f != e && edges_cross(ps, e, f))
}

/// Fan procedure on `sub`, where `b` is the rightmost blue point, `r` the
/// topmost red point, `br` an edge, and every other edge of `sub` is
/// uncrossed within `sub`. Returns the number of flips.
fn fan(rec: &mut Recorder<Matching>, mut sub: Vec<Edge>, mut b: usize, r: usize, side: Side) -> Result<usize> {
    let ps = rec.state.shared_points().clone();
    let pre = |msg: String| Err(Error::PreconditionViolated(msg));
    if !sub.contains(&Edge::new(b, r)) {
        return pre(format!("{b} and {r} are not matched"));
    }
    for &e in &sub {
        let (eb, er) = ends(&ps, e);
        if ps.point(eb).x > ps.point(b).x {
            return pre(format!("{b} is not the rightmost blue point"));
        }
        if side.height(ps.point(er)) > side.height(ps.point(r)) {
            return pre(format!("{r} is not the topmost red point"));
        }
    }
    let rest: Vec<Edge> = sub.iter().copied().filter(|&e| e != Edge::new(b, r)).collect();
    if !rest.iter().enumerate().all(|(i, &e)| rest[i + 1..].iter().all(|&f| !edges_cross(&ps, e, f))) {
        return pre("the edges other than the fan edge cross".into());
    }

    let start = rec.flips();
    loop {
        let br = Edge::new(b, r);
        let crossing: Vec<Edge> = sub.iter().copied().filter(|&f| f != br && edges_cross(&ps, br, f)).collect();
        if crossing.is_empty() {
            break;
        }
        // first red counterclockwise around b, starting from the blue line
        let r2 = sub
            .iter()
            .map(|&e| ends(&ps, e).1)
            .filter(|&x| x != r)
            .reduce(|x, y| if side.cross(ps.point(b), ps.point(y), ps.point(x)) > 0 { y } else { x })
            .expect("a crossing edge exists");
        let Some(&e2) = crossing.iter().find(|e| e.contains(r2)) else {
            return Err(Error::EngineInvariant(format!("first red {r2} around {b} is not on an edge crossing {br:?}")));
        };
        let b2 = e2.other(r2);
        let got = rec.flip_forced(br, e2, "topmost-fan")?;
        if got != crate::graph::edge_pair(Edge::new(b, r2), Edge::new(b2, r)) {
            return Err(Error::EngineInvariant(format!("fan flip gave {got:?}")));
        }
        // keep the part strictly left of line b2 r2
        let (pb2, pr2) = (ps.point(b2), ps.point(r2));
        let mut next = vec![Edge::new(b2, r)];
        for &e in &sub {
            if e == br || e == e2 {
                continue;
            }
            let s0 = side.cross(pb2, pr2, ps.point(e.0)).signum();
            let s1 = side.cross(pb2, pr2, ps.point(e.1)).signum();
            match (s0, s1) {
                (1, 1) => next.push(e),
                (-1, -1) => {}
                _ => {
                    return Err(Error::EngineInvariant(format!("{e:?} is not separated by line {b2}-{r2}")));
                }
            }
        }
        if crosses_any(&ps, Edge::new(b, r2), rec.state.edges()) {
            return Err(Error::EngineInvariant(format!("fan edge {b}-{r2} is crossed after its flip")));
        }
        sub = next;
        b = b2;
    }
    Ok(rec.flips() - start)
}

/// Uncrosses a matching on a semi-collinear set in which the rightmost blue
/// point is matched to the topmost red point and every other edge is free,
/// using at most `n/2 - 1` flips.
pub fn uncross_topmost_fan(m: &Matching) -> Result<EngineReport<Matching>> {
    require_chromatic(m, PositionClass::SemiCollinear, "semi-collinear position")?;
    let ps = m.shared_points().clone();
    let y0 = blue_line(&ps)?;
    if ps.points().iter().any(|p| p.y < y0) {
        return Err(Error::PreconditionViolated("all red points must lie above the blue line".into()));
    }
    let side = Side { s: 1, y0 };
    let b = ps.indices_of(Color::Blue).into_iter().max_by_key(|&i| ps.point(i).x).expect("blue points exist");
    let r = m.partners()[b];
    let n = ps.len();
    let mut rec = Recorder::new(m.clone());
    let flips = fan(&mut rec, m.edges().to_vec(), b, r, side)?;
    let bound = (n / 2).saturating_sub(1);
    rec.subcall("topmost-fan", flips, bound)?;
    let report = EngineReport::from_recorder("topmost-fan", bound as f64, rec);
    if !report.plane {
        return Err(Error::EngineInvariant("fan left crossings".into()));
    }
    Ok(report)
}

/// The left-turning walk that starts at a blue point: follow its edge, turn
/// onto each first crossing edge toward that edge's red end, and stop at
/// the first red point reached.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState {
    pub start: usize,
    /// Edges visited, as `(blue, red)` pairs, starting with the edge at `start`.
    pub edges: Vec<(usize, usize)>,
    /// Polygonal path: `start`, the turning points, and `terminal_red`.
    pub path: Vec<RationalPoint>,
    pub terminal_red: usize,
}

/// `num / den` with a positive denominator.
fn param(a: &Point, b: &Point, c: &Point, d: &Point) -> (i128, i128) {
    let (num, den) = param_on_first(a, b, c, d);
    if den < 0 {
        (-(num as i128), -(den as i128))
    } else {
        (num as i128, den as i128)
    }
}

fn cmp_param(x: (i128, i128), y: (i128, i128)) -> Ordering {
    (x.0 * y.1).cmp(&(y.0 * x.1))
}

fn walk(ps: &PointSet, edges: &[Edge], start: usize, side: Side) -> Result<WalkState> {
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&e| ends(ps, e)).collect();
    let mut cur = *pairs
        .iter()
        .find(|p| p.0 == start)
        .ok_or_else(|| Error::PreconditionViolated(format!("{start} is not a matched blue point")))?;
    let mut at = (0i128, 1i128);
    let mut state = WalkState {
        start,
        edges: vec![cur],
        path: vec![RationalPoint::from_point(ps.point(start))],
        terminal_red: cur.1,
    };
    for _ in 0..=pairs.len() {
        let (pb, pr) = (ps.point(cur.0), ps.point(cur.1));
        let next = pairs
            .iter()
            .copied()
            .filter(|&f| f != cur && edges_cross(ps, Edge::new(cur.0, cur.1), Edge::new(f.0, f.1)))
            .map(|f| (param(pb, pr, ps.point(f.0), ps.point(f.1)), f))
            .filter(|&(t, _)| cmp_param(t, at) == Ordering::Greater)
            .min_by(|x, y| cmp_param(x.0, y.0));
        let Some((_, f)) = next else {
            state.path.push(RationalPoint::from_point(pr));
            state.terminal_red = cur.1;
            return Ok(state);
        };
        let (fb, fr) = (ps.point(f.0), ps.point(f.1));
        let turn = side.s * ((pr.x - pb.x) * (fr.y - fb.y) - (pr.y - pb.y) * (fr.x - fb.x));
        if turn <= 0 || fb.x <= pb.x {
            return Err(Error::EngineInvariant(format!("walk from {start} does not turn left onto {f:?}")));
        }
        state.path.push(intersection_point(pb, pr, fb, fr)?);
        at = param(fb, fr, pb, pr);
        state.edges.push(f);
        cur = f;
    }
    Err(Error::EngineInvariant(format!("walk from {start} did not reach a red point")))
}

/// The walk from blue point `b` in the current matching.
pub fn walk_from(m: &Matching, b: usize) -> Result<WalkState> {
    require_chromatic(m, PositionClass::SemiCollinear, "semi-collinear position")?;
    let ps = m.points();
    let y0 = blue_line(ps)?;
    let r = m.partners()[b];
    let s = if ps.point(r).y > y0 { 1 } else { -1 };
    let side = Side { s, y0 };
    let edges: Vec<Edge> = side_edges(ps, m.edges(), side);
    walk(ps, &edges, b, side)
}

fn side_edges(ps: &PointSet, edges: &[Edge], side: Side) -> Vec<Edge> {
    edges.iter().copied().filter(|&e| side.height(ps.point(ends(ps, e).1)) > 0).collect()
}

/// Bound `n^2/4 - n/2` on the semi-collinear strategy.
pub fn semi_collinear_bound(n: usize) -> usize {
    (n * n / 4).saturating_sub(n / 2)
}

/// Untangles the edges on one side of the blue line.
fn semi_side(rec: &mut Recorder<Matching>, side: Side) -> Result<()> {
    let ps = rec.state.shared_points().clone();
    let mut blues: Vec<usize> = side_edges(&ps, rec.state.edges(), side).iter().map(|&e| ends(&ps, e).0).collect();
    blues.sort_by_key(|&b| ps.point(b).x);
    let k = blues.len();
    let mut last = None;
    for _ in 0..=k {
        let edges = side_edges(&ps, rec.state.edges(), side);
        let mate = rec.state.partners();
        // 0-based position in left-to-right order of the first crossed edge
        let Some(i) = (0..k).find(|&i| crosses_any(&ps, Edge::new(blues[i], mate[blues[i]]), &edges)) else {
            return Ok(());
        };
        if last.is_some_and(|l| i <= l) {
            return Err(Error::EngineInvariant(format!("first crossed blue index did not advance past {i}")));
        }
        last = Some(i);
        let bi = blues[i];
        let w = walk(&ps, &edges, bi, side)?;
        let rj = w.terminal_red;

        // re-match rj to bi along the walk
        let before = rec.flips();
        let mut cur = w.edges.len() - 1;
        while w.edges[cur].0 != bi {
            let bc = w.edges[cur].0;
            let e = Edge::new(bc, rj);
            let Some(t) = (0..cur)
                .rev()
                .find(|&t| edges_cross(&ps, e, Edge::new(w.edges[t].0, w.edges[t].1)))
            else {
                return Err(Error::EngineInvariant(format!("no walk edge crosses {e:?}")));
            };
            let (bt, rt) = w.edges[t];
            let got = rec.flip_forced(e, Edge::new(bt, rt), "semi-pull")?;
            if got != crate::graph::edge_pair(Edge::new(bt, rj), Edge::new(bc, rt)) || ps.point(bt).x >= ps.point(bc).x {
                return Err(Error::EngineInvariant(format!("pull flip gave {got:?}")));
            }
            cur = t;
        }
        rec.subcall("pull", rec.flips() - before, k - 1 - i)?;

        // shoot a ray left from rj; the first edge hit among b_0..b_{i-1}
        let pj = ps.point(rj);
        let h = side.height(pj);
        let mate = rec.state.partners();
        let mut hit: Option<(usize, (i128, i128))> = None;
        for (x, &bx) in blues[..i].iter().enumerate() {
            let (pb, pr) = (ps.point(bx), ps.point(mate[bx]));
            let hr = side.height(pr);
            if hr < h {
                continue;
            }
            // x-coordinate of the edge at height h, as num / hr
            let num = pb.x as i128 * hr as i128 + (pr.x - pb.x) as i128 * h as i128;
            let at = (num, hr as i128);
            if cmp_param(at, (pj.x as i128, 1)) != Ordering::Less {
                continue;
            }
            if hit.is_none_or(|(_, best)| cmp_param(at, best) == Ordering::Greater) {
                hit = Some((x, at));
            }
        }
        // without a hit the ray reaches the guard edge left of everything
        let first = hit.map_or(0, |(x, _)| x + 1);

        let mut sub: Vec<Edge> = blues[first..i].iter().map(|&b| Edge::new(b, mate[b])).collect();
        sub.push(Edge::new(bi, rj));
        let fan_flips = fan(rec, sub, bi, rj, side).map_err(|e| match e {
            Error::PreconditionViolated(msg) => Error::EngineInvariant(format!("fan precondition: {msg}")),
            other => other,
        })?;
        rec.subcall("topmost-fan", fan_flips, i - first)?;

        let edges = side_edges(&ps, rec.state.edges(), side);
        let mate = rec.state.partners();
        if let Some(&b) = blues[..=i].iter().find(|&&b| crosses_any(&ps, Edge::new(b, mate[b]), &edges)) {
            return Err(Error::EngineInvariant(format!("edge at blue point {b} is still crossed")));
        }
        let spent = rec.flips() - before;
        if spent > k - 1 {
            return Err(Error::EngineInvariant(format!("iteration used {spent} flips")));
        }
    }
    Err(Error::EngineInvariant("semi-collinear engine did not terminate".into()))
}

/// Untangles a red-blue matching whose blue points lie on a horizontal line,
/// with at most `n^2/4 - n/2` flips. Edges above and below the line never
/// cross each other and are handled separately, the upper side first.
pub fn untangle_semi_collinear(m: &Matching) -> Result<EngineReport<Matching>> {
    require_chromatic(m, PositionClass::SemiCollinear, "semi-collinear position")?;
    let y0 = blue_line(m.points())?;
    let mut rec = Recorder::new(m.clone());
    for s in [1, -1] {
        semi_side(&mut rec, Side { s, y0 })?;
    }
    let bound = semi_collinear_bound(m.points().len()) as f64;
    let report = EngineReport::from_recorder("semi", bound, rec);
    if !report.plane {
        return Err(Error::EngineInvariant("semi-collinear engine left crossings".into()));
    }
    Ok(report)
}
