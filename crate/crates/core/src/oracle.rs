//! Ground-truth flip distances by exhaustive search over the flip graph.
//!
//! States are canonical sorted lists of edge ids. Every flip strictly
//! shortens the total edge length, so the state graph is acyclic; the
//! shortest sequence comes from breadth-first search and the longest from a
//! memoized depth-first search.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::geom::Color;
use crate::graph::{edges_cross, tree_reconnection, Edge, FlipGraph, GraphKind};

/// Largest matching size accepted by the exhaustive searches.
pub const MATCHING_LIMIT: usize = 12;
/// Largest tree size accepted by the exhaustive searches.
pub const TREE_LIMIT: usize = 9;

type State = Box<[u8]>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rule {
    Monochromatic,
    Bichromatic,
    Tree,
}

/// Precomputed crossing table over all point pairs.
struct FlipSpace {
    n: usize,
    rule: Rule,
    pairs: Vec<Edge>,
    pair_id: Vec<Vec<u8>>,
    cross: Vec<bool>,
    colors: Vec<Color>,
}

impl FlipSpace {
    fn new<G: FlipGraph>(g: &G) -> Result<(Self, State)> {
        let ps = g.points();
        let n = ps.len();
        let (rule, limit) = match (g.kind(), g.chromatic()) {
            (GraphKind::Tree, _) => (Rule::Tree, TREE_LIMIT),
            (GraphKind::Matching, true) => (Rule::Bichromatic, MATCHING_LIMIT),
            (GraphKind::Matching, false) => (Rule::Monochromatic, MATCHING_LIMIT),
        };
        if n > limit {
            return Err(Error::TooLarge { n, limit });
        }
        let mut pairs = Vec::new();
        let mut pair_id = vec![vec![u8::MAX; n]; n];
        #[allow(clippy::needless_range_loop)]
        for a in 0..n {
            for b in a + 1..n {
                pair_id[a][b] = pairs.len() as u8;
                pair_id[b][a] = pairs.len() as u8;
                pairs.push(Edge(a, b));
            }
        }
        let p = pairs.len();
        let mut cross = vec![false; p * p];
        for i in 0..p {
            for j in 0..p {
                cross[i * p + j] = edges_cross(ps, pairs[i], pairs[j]);
            }
        }
        let colors = (0..n).map(|i| ps.color(i)).collect();
        let space = FlipSpace { n, rule, pairs, pair_id, cross, colors };
        let start = space.encode(g.edges());
        Ok((space, start))
    }

    fn encode(&self, edges: &[Edge]) -> State {
        let mut ids: Vec<u8> = edges.iter().map(|e| self.pair_id[e.0][e.1]).collect();
        ids.sort_unstable();
        ids.into_boxed_slice()
    }

    fn decode(&self, s: &[u8]) -> Vec<Edge> {
        s.iter().map(|&i| self.pairs[i as usize]).collect()
    }

    #[inline]
    fn crosses(&self, a: u8, b: u8) -> bool {
        self.cross[a as usize * self.pairs.len() + b as usize]
    }

    fn is_plane(&self, s: &[u8]) -> bool {
        s.iter()
            .enumerate()
            .all(|(i, &a)| s[i + 1..].iter().all(|&b| !self.crosses(a, b)))
    }

    /// Every legal flip from `s`, in deterministic order, as
    /// `(removed, added, next state)`.
    fn moves(&self, s: &[u8]) -> Vec<([Edge; 2], [Edge; 2], State)> {
        let mut out = Vec::new();
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if !self.crosses(s[i], s[j]) {
                    continue;
                }
                let (e1, e2) = (self.pairs[s[i] as usize], self.pairs[s[j] as usize]);
                for added in self.replacements(s, e1, e2) {
                    let mut next: Vec<u8> = s
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i && k != j)
                        .map(|(_, &x)| x)
                        .collect();
                    next.extend(added.iter().map(|e| self.pair_id[e.0][e.1]));
                    next.sort_unstable();
                    out.push(([e1, e2], added, next.into_boxed_slice()));
                }
            }
        }
        out
    }

    fn replacements(&self, s: &[u8], e1: Edge, e2: Edge) -> Vec<[Edge; 2]> {
        let (a, b, c, d) = (e1.0, e1.1, e2.0, e2.1);
        let both = [[Edge::new(a, c), Edge::new(b, d)], [Edge::new(a, d), Edge::new(b, c)]];
        match self.rule {
            Rule::Monochromatic => both.to_vec(),
            Rule::Bichromatic => both
                .into_iter()
                .filter(|p| p.iter().all(|e| self.colors[e.0] != self.colors[e.1]))
                .collect(),
            Rule::Tree => {
                let edges = self.decode(s);
                tree_reconnection(self.n, &edges, e1, e2).into_iter().collect()
            }
        }
    }

    fn min_distance(&self, start: State) -> usize {
        if self.is_plane(&start) {
            return 0;
        }
        let mut seen: HashSet<State> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back((start, 0usize));
        while let Some((s, d)) = queue.pop_front() {
            for (_, _, next) in self.moves(&s) {
                if self.is_plane(&next) {
                    return d + 1;
                }
                if seen.insert(next.clone()) {
                    queue.push_back((next, d + 1));
                }
            }
        }
        unreachable!("every maximal flip sequence ends in a plane state")
    }

    fn longest(&self, s: &State, memo: &mut HashMap<State, u32>) -> u32 {
        if let Some(&v) = memo.get(s) {
            return v;
        }
        let best = self
            .moves(s)
            .into_iter()
            .map(|(_, _, next)| 1 + self.longest(&next, memo))
            .max()
            .unwrap_or(0);
        memo.insert(s.clone(), best);
        best
    }

    fn longest_naive(&self, s: &[u8]) -> u32 {
        self.moves(s)
            .into_iter()
            .map(|(_, _, next)| 1 + self.longest_naive(&next))
            .max()
            .unwrap_or(0)
    }
}

/// Minimum number of flips to reach a plane state.
pub fn oracle_min_flips<G: FlipGraph>(g: &G) -> Result<usize> {
    let (space, start) = FlipSpace::new(g)?;
    Ok(space.min_distance(start))
}

/// Maximum length of any flip sequence ending in a plane state.
pub fn oracle_max_flips<G: FlipGraph>(g: &G) -> Result<usize> {
    let (space, start) = FlipSpace::new(g)?;
    Ok(space.longest(&start, &mut HashMap::new()) as usize)
}

/// Both extremes with one precomputed crossing table.
pub fn oracle_min_max<G: FlipGraph>(g: &G) -> Result<(usize, usize)> {
    let (space, start) = FlipSpace::new(g)?;
    let max = space.longest(&start, &mut HashMap::new()) as usize;
    Ok((space.min_distance(start), max))
}

/// Longest flip sequence computed without memoization; exponential, meant
/// as a cross-check of [`oracle_max_flips`] on tiny inputs.
pub fn oracle_max_flips_naive<G: FlipGraph>(g: &G) -> Result<usize> {
    let (space, start) = FlipSpace::new(g)?;
    Ok(space.longest_naive(&start) as usize)
}

/// A flip sequence realizing the maximum length, as `(removed, added)` pairs.
pub fn longest_flip_sequence<G: FlipGraph>(g: &G) -> Result<Vec<([Edge; 2], [Edge; 2])>> {
    let (space, start) = FlipSpace::new(g)?;
    let mut memo = HashMap::new();
    let mut remaining = space.longest(&start, &mut memo);
    let mut cur = start;
    let mut seq = Vec::new();
    while remaining > 0 {
        let (removed, added, next) = space
            .moves(&cur)
            .into_iter()
            .find(|(_, _, next)| space.longest(next, &mut memo) + 1 == remaining)
            .expect("memoized longest path has a realizing move");
        seq.push((removed, added));
        cur = next;
        remaining -= 1;
    }
    Ok(seq)
}

/// A flip as `(removed, added)` together with the state it leads to.
pub type Successor<G> = ([Edge; 2], [Edge; 2], G);

/// Every state reachable by one legal flip, with the flip that produced it.
pub fn one_flip_successors<G: FlipGraph>(g: &G) -> Result<Vec<Successor<G>>> {
    let (space, start) = FlipSpace::new(g)?;
    Ok(space
        .moves(&start)
        .into_iter()
        .map(|(removed, added, next)| (removed, added, g.with_edges(space.decode(&next))))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessStats {
    pub n: usize,
    pub min_flips: usize,
    pub max_flips: usize,
}

/// First instance of `family` (in iteration order) whose flip distances
/// satisfy `pred`.
pub fn find_witness<G, I>(family: I, pred: impl Fn(&WitnessStats) -> bool) -> Result<Option<(G, WitnessStats)>>
where
    G: FlipGraph,
    I: IntoIterator<Item = G>,
{
    for g in family {
        let (min_flips, max_flips) = oracle_min_max(&g)?;
        let stats = WitnessStats { n: g.points().len(), min_flips, max_flips };
        if pred(&stats) {
            return Ok(Some((g, stats)));
        }
    }
    Ok(None)
}

/// A single flip from `g` that leaves more crossings than before, if any.
pub fn crossing_increasing_flip<G: FlipGraph>(g: &G) -> Result<Option<([Edge; 2], [Edge; 2])>> {
    let before = crate::graph::crossing_count(g);
    for (removed, added, next) in one_flip_successors(g)? {
        if crate::graph::crossing_count(&next) > before {
            return Ok(Some((removed, added)));
        }
    }
    Ok(None)
}

/// A crossing pair that is present, then absent, then present again along
/// a sequence of edge lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reappearance {
    pub pair: (Edge, Edge),
    pub first_seen: usize,
    pub vanished: usize,
    pub reappeared: usize,
}

pub fn find_reappearing_crossing(
    ps: &crate::geom::PointSet,
    states: &[Vec<Edge>],
) -> Option<Reappearance> {
    let sets: Vec<HashSet<(Edge, Edge)>> = states
        .iter()
        .map(|edges| {
            let mut out = HashSet::new();
            for (i, &e) in edges.iter().enumerate() {
                for &f in &edges[i + 1..] {
                    if edges_cross(ps, e, f) {
                        out.insert(if e < f { (e, f) } else { (f, e) });
                    }
                }
            }
            out
        })
        .collect();
    for (k, set) in sets.iter().enumerate() {
        let mut pairs: Vec<_> = set.iter().copied().collect();
        pairs.sort();
        for pair in pairs {
            if k > 0 && sets[k - 1].contains(&pair) {
                continue;
            }
            if let Some(gone) = (k + 1..sets.len()).find(|&j| !sets[j].contains(&pair)) {
                if let Some(back) = (gone + 1..sets.len()).find(|&j| sets[j].contains(&pair)) {
                    return Some(Reappearance { pair, first_seen: k, vanished: gone, reappeared: back });
                }
            }
        }
    }
    None
}
