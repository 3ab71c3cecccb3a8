//! Seeded instance generators and exhaustive enumerators for small sizes.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{cross, Color, Point, PointSet, PositionClass};
use crate::graph::{Edge, Matching, SpanningTree};

/// Radius of the circle convex point sets are placed on.
pub const CONVEX_RADIUS: f64 = 65536.0;
/// Lattice spacing of grid point sets.
pub const GRID_SCALE: i64 = 64;
/// Maximum absolute jitter per coordinate of grid points.
pub const GRID_JITTER: i64 = GRID_SCALE / 8;

const MAX_ATTEMPTS: usize = 1000;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn exhausted(what: &str) -> Error {
    Error::PreconditionViolated(format!("could not generate a valid {what} point set"))
}

/// `n >= 3` points in strictly convex position, in clockwise order.
pub fn gen_convex(n: usize, seed: u64) -> Result<PointSet> {
    if n < 3 {
        return Err(Error::PreconditionViolated(format!("convex point sets need n >= 3, got {n}")));
    }
    let mut rng = rng(seed);
    for _ in 0..MAX_ATTEMPTS {
        let offset = rng.gen_range(0.0..2.0 * PI);
        let pts = (0..n)
            .map(|k| {
                let a = offset - (k as f64 + rng.gen_range(0.0..0.5)) * 2.0 * PI / n as f64;
                Point::new((CONVEX_RADIUS * a.cos()).round() as i64, (CONVEX_RADIUS * a.sin()).round() as i64)
            })
            .collect();
        if let Ok(ps) = PointSet::new(pts, PositionClass::Convex) {
            return Ok(ps);
        }
    }
    Err(exhausted("convex"))
}

/// The unjittered `k x k` lattice with spacing `scale`.
pub fn grid_lattice(k: usize, scale: i64) -> Vec<Point> {
    (0..k)
        .flat_map(|i| (0..k).map(move |j| Point::new(i as i64 * scale, j as i64 * scale)))
        .collect()
}

/// A `k x k` lattice with spacing [`GRID_SCALE`], each coordinate moved by at
/// most [`GRID_JITTER`] so that no three points are collinear.
pub fn gen_grid(k: usize, seed: u64) -> Result<PointSet> {
    if k < 2 {
        return Err(Error::PreconditionViolated(format!("grids need k >= 2, got {k}")));
    }
    let mut rng = rng(seed);
    let mut pts: Vec<Point> = Vec::with_capacity(k * k);
    for p in grid_lattice(k, GRID_SCALE) {
        // redraw this point's jitter until it is off every line through two
        // earlier points
        let placed = (0..MAX_ATTEMPTS).find_map(|_| {
            let q = Point::new(
                p.x + rng.gen_range(-GRID_JITTER..=GRID_JITTER),
                p.y + rng.gen_range(-GRID_JITTER..=GRID_JITTER),
            );
            let clear = pts.iter().enumerate().all(|(i, a)| pts[i + 1..].iter().all(|b| cross(a, b, &q) != 0))
                && pts.iter().all(|a| (a.x, a.y) != (q.x, q.y));
            clear.then_some(q)
        });
        pts.push(placed.ok_or_else(|| exhausted("grid"))?);
    }
    PointSet::new(pts, PositionClass::General)
}

/// `n/2` blue points on `y = 0` and `n/2` red points above it.
pub fn gen_semi_collinear(n: usize, seed: u64) -> Result<PointSet> {
    semi_collinear(n, seed, false)
}

/// Like [`gen_semi_collinear`], but each red point is above or below the
/// blue line with equal probability.
pub fn gen_semi_collinear_two_sided(n: usize, seed: u64) -> Result<PointSet> {
    semi_collinear(n, seed, true)
}

fn semi_collinear(n: usize, seed: u64, two_sided: bool) -> Result<PointSet> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::PreconditionViolated(format!("semi-collinear sets need a positive even n, got {n}")));
    }
    let half = n / 2;
    let span = 64 * n as i64;
    let mut rng = rng(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut xs: Vec<i64> = (0..span).collect();
        xs.shuffle(&mut rng);
        let mut pts: Vec<Point> = xs[..half].iter().map(|&x| Point::colored(x, 0, Color::Blue)).collect();
        for _ in 0..half {
            let y = rng.gen_range(1..=span);
            let y = if two_sided && rng.gen_bool(0.5) { -y } else { y };
            pts.push(Point::colored(rng.gen_range(0..span), y, Color::Red));
        }
        if let Ok(ps) = PointSet::new(pts, PositionClass::SemiCollinear) {
            return Ok(ps);
        }
    }
    Err(exhausted("semi-collinear"))
}

/// `n/2` red and `n/2` blue labels in random order.
pub fn random_balanced_colors(n: usize, seed: u64) -> Vec<Color> {
    let mut colors: Vec<Color> = (0..n).map(|i| if i < n / 2 { Color::Red } else { Color::Blue }).collect();
    colors.shuffle(&mut rng(seed));
    colors
}

/// Uniformly random perfect matching; when `chromatic`, every edge joins a
/// red and a blue point.
pub fn gen_random_matching(ps: Arc<PointSet>, seed: u64, chromatic: bool) -> Result<Matching> {
    let mut rng = rng(seed);
    let edges = if chromatic {
        let mut red = ps.indices_of(Color::Red);
        let mut blue = ps.indices_of(Color::Blue);
        if red.len() != blue.len() || red.len() + blue.len() != ps.len() {
            return Err(Error::ColorCountMismatch { red: red.len(), blue: blue.len() });
        }
        red.shuffle(&mut rng);
        blue.shuffle(&mut rng);
        red.into_iter().zip(blue).map(|(r, b)| Edge::new(r, b)).collect()
    } else {
        let mut idx: Vec<usize> = (0..ps.len()).collect();
        idx.shuffle(&mut rng);
        idx.chunks(2).map(|c| Edge::new(c[0], c[1])).collect()
    };
    Matching::new(ps, edges, chromatic)
}

/// Uniformly random labeled spanning tree, drawn as a random Prüfer sequence.
pub fn gen_random_tree(ps: Arc<PointSet>, seed: u64) -> Result<SpanningTree> {
    let n = ps.len();
    let mut rng = rng(seed);
    let edges = match n {
        0 | 1 => Vec::new(),
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            prufer_decode(n, &seq)
        }
    };
    SpanningTree::new(ps, edges)
}

/// The tree with Prüfer sequence `seq` on `seq.len() + 2` vertices.
pub fn prufer_decode(n: usize, seq: &[usize]) -> Vec<Edge> {
    let mut deg = vec![1usize; n];
    for &s in seq {
        deg[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&i| deg[i] == 1).expect("a leaf remains");
        edges.push(Edge::new(leaf, s));
        deg[leaf] -= 1;
        deg[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| deg[i] == 1).collect();
    edges.push(Edge::new(rest[0], rest[1]));
    edges
}

/// Every labeled spanning tree on `n >= 2` vertices (`n^(n-2)` of them).
pub fn all_trees(n: usize) -> Vec<Vec<Edge>> {
    if n == 2 {
        return vec![vec![Edge(0, 1)]];
    }
    let mut out = Vec::new();
    let mut seq = vec![0; n - 2];
    loop {
        out.push(prufer_decode(n, &seq));
        let Some(i) = (0..n - 2).find(|&i| seq[i] + 1 < n) else { break };
        seq[i] += 1;
        seq[..i].iter_mut().for_each(|s| *s = 0);
    }
    out
}

/// Every perfect matching on `0..n` (`(n-1)!!` of them).
pub fn all_perfect_matchings(n: usize) -> Vec<Vec<Edge>> {
    let colors = vec![Color::None; n];
    all_matchings_where(&colors, |_, _| true)
}

/// Every perfect matching on `0..n` whose edges join distinct colors.
pub fn all_bichromatic_matchings(colors: &[Color]) -> Vec<Vec<Edge>> {
    all_matchings_where(colors, |a, b| a != b)
}

fn all_matchings_where(colors: &[Color], ok: impl Fn(Color, Color) -> bool + Copy) -> Vec<Vec<Edge>> {
    fn rec(
        free: &mut Vec<usize>,
        cur: &mut Vec<Edge>,
        out: &mut Vec<Vec<Edge>>,
        colors: &[Color],
        ok: impl Fn(Color, Color) -> bool + Copy,
    ) {
        if free.is_empty() {
            let mut m = cur.clone();
            m.sort();
            out.push(m);
            return;
        }
        let a = free.remove(0);
        for k in 0..free.len() {
            let b = free[k];
            if !ok(colors[a], colors[b]) {
                continue;
            }
            free.remove(k);
            cur.push(Edge::new(a, b));
            rec(free, cur, out, colors, ok);
            cur.pop();
            free.insert(k, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    if colors.len().is_multiple_of(2) {
        rec(&mut (0..colors.len()).collect(), &mut Vec::new(), &mut out, colors, ok);
    }
    out
}

/// Every assignment of `n/2` red and `n/2` blue labels to `0..n`.
pub fn balanced_colorings(n: usize) -> Vec<Vec<Color>> {
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize * 2 == n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { Color::Red } else { Color::Blue }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::spread;
    use crate::graph::{Dsu, FlipGraph};

    #[test]
    fn convex_sets_turn_clockwise() {
        for (n, seed) in [(3, 0), (4, 1), (32, 7), (200, 3)] {
            let ps = gen_convex(n, seed).unwrap();
            assert_eq!(ps.len(), n);
            let p = ps.points();
            for i in 0..n {
                assert!(cross(&p[i], &p[(i + 1) % n], &p[(i + 2) % n]) < 0);
            }
        }
    }

    #[test]
    fn grid_spread_is_order_sqrt_n() {
        for k in [2, 4, 8, 10] {
            let ps = gen_grid(k, k as u64).unwrap();
            let n = (k * k) as f64;
            assert!(ps.spread().unwrap() <= 3.0 * (2.0 * n).sqrt());
        }
        assert!((spread(&grid_lattice(2, GRID_SCALE)).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn semi_collinear_counts() {
        for n in [2, 8, 20] {
            let ps = gen_semi_collinear(n, 5).unwrap();
            assert_eq!(ps.indices_of(Color::Red).len(), n / 2);
            assert_eq!(ps.indices_of(Color::Blue).len(), n / 2);
            assert!(ps.points().iter().all(|p| (p.color == Color::Blue) == (p.y == 0)));
            assert!(ps.points().iter().all(|p| p.y >= 0));
        }
        assert!(gen_semi_collinear(5, 0).is_err());
    }

    #[test]
    fn random_matchings_and_trees_are_valid() {
        let ps = Arc::new(gen_convex(10, 1).unwrap());
        let colored = Arc::new(ps.recolored(&random_balanced_colors(10, 2)).unwrap());
        for seed in 0..1000 {
            let m = gen_random_matching(ps.clone(), seed, false).unwrap();
            assert_eq!(m.edges().len(), 5);
            let m = gen_random_matching(colored.clone(), seed, true).unwrap();
            assert!(m.edges().iter().all(|e| colored.color(e.0) != colored.color(e.1)));
            let t = gen_random_tree(ps.clone(), seed).unwrap();
            let mut dsu = Dsu::new(10);
            assert_eq!(t.edges().len(), 9);
            assert!(t.edges().iter().all(|e| dsu.union(e.0, e.1)));
        }
        let two = Arc::new(gen_semi_collinear(2, 0).unwrap());
        assert_eq!(gen_random_matching(two, 0, true).unwrap().edges().len(), 1);
        assert!(matches!(gen_random_matching(ps, 0, true), Err(Error::ColorCountMismatch { .. })));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_perfect_matchings(8).len(), 105);
        assert_eq!(all_perfect_matchings(12).len(), 10395);
        assert_eq!(all_trees(5).len(), 125);
        assert_eq!(balanced_colorings(6).len(), 20);
        let colors = [Color::Red, Color::Red, Color::Red, Color::Blue, Color::Blue, Color::Blue];
        assert_eq!(all_bichromatic_matchings(&colors).len(), 6);
    }
}
