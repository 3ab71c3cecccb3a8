//! Untangling strategies for monochromatic matchings, plus adversarial
//! policies that try to make flip sequences long.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{binomial2, EngineReport, Recorder};
use crate::error::{Error, Result};
use crate::geom::{angle_at_most_right, intersection_point, min_pairwise_distance, PositionClass};
use crate::graph::{
    crossing_count, crossings, edge_pair, first_crossing, is_plane, weight, Edge, FlipGraph, Matching,
};
use crate::oracle;

/// Guaranteed weight decrease of the angle rule, as a multiple of the
/// minimum pairwise distance: `(2 - sqrt 2) / 4`.
pub const ANGLE_RULE_GAIN: f64 = (2.0 - std::f64::consts::SQRT_2) / 4.0;

/// Relative slack allowed on float weight-decrease checks.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

fn require_general_mono(m: &Matching, engine: &str) -> Result<()> {
    match m.points().class() {
        PositionClass::General | PositionClass::Convex => {}
        found => return Err(Error::PositionClassMismatch { expected: "general or convex position", found }),
    }
    if m.is_chromatic() {
        return Err(Error::ColorConstraint(format!("{engine} only handles monochromatic matchings")));
    }
    Ok(())
}

/// Replacement chosen by the angle rule for crossing edges `pq` and `rs`
/// meeting at `o`: `{ps, rq}` when the angle `roq` is at most a right angle,
/// otherwise `{pr, qs}`. Either way the new edges face the two smaller
/// angles at `o`.
pub fn angle_rule_pairing(m: &Matching, pq: Edge, rs: Edge) -> Result<[Edge; 2]> {
    let ps = m.points();
    let (p, q, r, s) = (pq.0, pq.1, rs.0, rs.1);
    let o = intersection_point(ps.point(p), ps.point(q), ps.point(r), ps.point(s))?;
    Ok(if angle_at_most_right(&o, ps.point(r), ps.point(q)) {
        edge_pair(Edge::new(p, s), Edge::new(r, q))
    } else {
        edge_pair(Edge::new(p, r), Edge::new(q, s))
    })
}

/// Upper bound `2 n spread / (2 - sqrt 2)` on the number of angle-rule flips.
pub fn angle_guided_bound(m: &Matching) -> Result<f64> {
    let n = m.points().len() as f64;
    Ok(2.0 * n * m.points().spread()? / (2.0 - std::f64::consts::SQRT_2))
}

/// Repeatedly flips the lexicographically first crossing with the angle rule.
/// Every flip is checked to shorten the matching by at least
/// [`ANGLE_RULE_GAIN`] times the minimum pairwise distance.
pub fn untangle_angle_guided(m: &Matching) -> Result<EngineReport<Matching>> {
    require_general_mono(m, "angle-guided engine")?;
    let mu = min_pairwise_distance(m.points().points()).value;
    let min_gain = ANGLE_RULE_GAIN * mu * (1.0 - WEIGHT_TOLERANCE);
    let bound = angle_guided_bound(m)?;
    let mut rec = Recorder::new(m.clone());
    while let Some((e1, e2)) = first_crossing(&rec.state) {
        let added = angle_rule_pairing(&rec.state, e1, e2)?;
        let before = weight(&rec.state);
        rec.flip([e1, e2], added, "angle")?;
        let gain = before - weight(&rec.state);
        if gain < min_gain {
            return Err(Error::EngineInvariant(format!(
                "angle flip {e1:?} x {e2:?} shortened by {gain}, expected at least {min_gain}"
            )));
        }
    }
    Ok(EngineReport::from_recorder("angle", bound, rec))
}

/// Convex-position strategy using at most `n/2 - 1` flips: take a
/// minimum-depth edge; if it is not a hull edge, one flip with the edge of
/// the hull neighbour on its shallow side creates one; strip the hull edge
/// and continue on the remaining points.
pub fn untangle_convex_min(m: &Matching) -> Result<EngineReport<Matching>> {
    let ps = m.points();
    if ps.class() != PositionClass::Convex {
        return Err(Error::PositionClassMismatch { expected: "convex position", found: ps.class() });
    }
    if m.is_chromatic() {
        return Err(Error::ColorConstraint("convex-min engine only handles monochromatic matchings".into()));
    }
    let n = ps.len();
    let mut rec = Recorder::new(m.clone());
    // points still present, in clockwise hull order
    let mut active: Vec<usize> = (0..n).collect();
    while active.len() >= 4 && !is_plane(&rec.state) {
        let mate = rec.state.partners();
        let cut = ConvexCut::min_depth(&active, &mate);
        if cut.depth > 0 {
            let (p1, p2, far) = (cut.p1, cut.p2, cut.far);
            let pk = mate[p2];
            rec.flip(
                [Edge::new(p1, far), Edge::new(p2, pk)],
                [Edge::new(p1, p2), Edge::new(far, pk)],
                "convex-min",
            )?;
            active.retain(|&v| v != p1 && v != p2);
        } else {
            active.retain(|&v| v != cut.p1 && v != cut.far);
        }
    }
    let bound = (n / 2).saturating_sub(1) as f64;
    Ok(EngineReport::from_recorder("convex-min", bound, rec))
}

/// A minimum-depth edge `p1 far` of a matching restricted to `active` (a
/// cyclic hull order), oriented so that `p2` is the neighbour of `p1` on the
/// side holding `depth` points.
pub(crate) struct ConvexCut {
    pub depth: usize,
    pub p1: usize,
    pub p2: usize,
    pub far: usize,
}

impl ConvexCut {
    pub(crate) fn min_depth(active: &[usize], mate: &[usize]) -> Self {
        let len = active.len();
        let mut pos = vec![usize::MAX; mate.len()];
        for (k, &v) in active.iter().enumerate() {
            pos[v] = k;
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for &a in active {
            let b = mate[a];
            if b < a {
                continue;
            }
            let forward = (pos[b] + len - pos[a]) % len - 1;
            let depth = forward.min(len - 2 - forward);
            if best.is_none_or(|(d, x, _)| (depth, a) < (d, x)) {
                best = Some((depth, a, b));
            }
        }
        let (depth, a, b) = best.expect("matching has an edge");
        let forward = (pos[b] + len - pos[a]) % len - 1;
        let (p1, far) = if forward == depth { (a, b) } else { (b, a) };
        let p2 = active[(pos[p1] + 1) % len];
        ConvexCut { depth, p1, p2, far }
    }

    /// The points strictly between `p1` and `far` on the shallow side, in order.
    pub(crate) fn shallow_side(&self, active: &[usize]) -> Vec<usize> {
        let len = active.len();
        let start = active.iter().position(|&v| v == self.p1).unwrap();
        (1..=self.depth).map(|k| active[(start + k) % len]).collect()
    }
}

/// Flips the first crossing so that the two leftmost of its four endpoints
/// become matched to each other.
pub fn untangle_leftmost(m: &Matching) -> Result<EngineReport<Matching>> {
    require_general_mono(m, "leftmost engine")?;
    let n = m.points().len();
    let mut rec = Recorder::new(m.clone());
    while let Some((e1, e2)) = first_crossing(&rec.state) {
        let ps = rec.state.points();
        let mut ends = [e1.0, e1.1, e2.0, e2.1];
        ends.sort_by_key(|&v| (ps.point(v).x, ps.point(v).y));
        let added = [Edge::new(ends[0], ends[1]), Edge::new(ends[2], ends[3])];
        rec.flip([e1, e2], added, "leftmost")?;
    }
    let bound = (n * n) as f64 / 2.0;
    Ok(EngineReport::from_recorder("leftmost", bound, rec))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdversaryPolicy {
    /// The true longest flip sequence, by exhaustive search.
    ExhaustiveLongest,
    /// Always the flip leaving the most crossings.
    GreedyMaxCrossings,
    /// Uniformly random crossing and replacement.
    Random(u64),
}

/// Runs an adversarial flip policy. On convex point sets every step is
/// checked to remove at least one crossing, which bounds any sequence by
/// `C(n/2, 2)`.
pub fn adversary_max(m: &Matching, policy: AdversaryPolicy) -> Result<EngineReport<Matching>> {
    let n = m.points().len();
    let convex = m.points().class() == PositionClass::Convex;
    let mut rec = Recorder::new(m.clone());
    let step = |rec: &mut Recorder<Matching>, removed: [Edge; 2], added: [Edge; 2], rule: &str| {
        let before = crossing_count(&rec.state);
        rec.flip(removed, added, rule)?;
        let after = crossing_count(&rec.state);
        if convex && after >= before {
            return Err(Error::EngineInvariant(format!(
                "convex flip {removed:?} -> {added:?} did not reduce crossings ({before} -> {after})"
            )));
        }
        Ok::<(), Error>(())
    };
    match policy {
        AdversaryPolicy::ExhaustiveLongest => {
            for (removed, added) in oracle::longest_flip_sequence(m)? {
                step(&mut rec, removed, added, "adversary-exhaustive")?;
            }
        }
        AdversaryPolicy::GreedyMaxCrossings => loop {
            let mut best: Option<(usize, [Edge; 2], [Edge; 2])> = None;
            for (e1, e2) in crossings(&rec.state) {
                for added in rec.state.candidates(e1, e2)? {
                    let mut edges: Vec<Edge> =
                        rec.state.edges().iter().copied().filter(|&e| e != e1 && e != e2).collect();
                    edges.extend(added);
                    let count = crossing_count(&rec.state.with_edges(edges));
                    if best.as_ref().is_none_or(|b| count > b.0) {
                        best = Some((count, [e1, e2], added));
                    }
                }
            }
            let Some((_, removed, added)) = best else { break };
            step(&mut rec, removed, added, "adversary-greedy")?;
        },
        AdversaryPolicy::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            loop {
                let cr = crossings(&rec.state);
                if cr.is_empty() {
                    break;
                }
                let (e1, e2) = cr[rng.gen_range(0..cr.len())];
                let cands = rec.state.candidates(e1, e2)?;
                let added = cands[rng.gen_range(0..cands.len())];
                step(&mut rec, [e1, e2], added, "adversary-random")?;
            }
        }
    }
    let bound = if convex { binomial2(n / 2) as f64 } else { (n * n * n) as f64 };
    Ok(EngineReport::from_recorder("adversary", bound, rec))
}
