//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use untangle::engine::bichromatic::{untangle_bichromatic_convex, untangle_semi_collinear};
use untangle::engine::matching::{
    adversary_max, angle_rule_pairing, untangle_angle_guided, untangle_convex_min, untangle_leftmost,
    AdversaryPolicy,
};
use untangle::engine::tree::{uncross_double_star, untangle_convex_tree};
use untangle::engine::EngineReport;
use untangle::gen;
use untangle::geom::{dist, extreme_dist2, intersection_point, min_pairwise_distance, segments_cross, RationalPoint};
use untangle::io::{parse_instance, write_instance, Instance};
use untangle::oracle::{find_reappearing_crossing, find_witness, oracle_max_flips, oracle_min_flips, oracle_min_max};
use untangle::{Edge, FlipGraph, GraphKind, Matching, Point, PointSet, PositionClass, SpanningTree};

const REL_TOL: f64 = 1e-9;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn timed(budget_s: f64, f: impl FnOnce() -> (bool, String)) -> (bool, String) {
    let start = Instant::now();
    let (ok, detail) = f();
    let secs = start.elapsed().as_secs_f64();
    let in_time = secs < budget_s;
    let note = if in_time { String::new() } else { format!(" OVER BUDGET {budget_s} s") };
    (ok && in_time, format!("{detail}; {secs:.2} s{note}"))
}

/// Replays traces with independently computed flip rules.
#[derive(Default)]
struct Universal {
    runs: usize,
    flips: usize,
    failures: Vec<String>,
}

fn crosses(ps: &PointSet, e: Edge, f: Edge) -> bool {
    let p = |i: usize| ps.point(i);
    e.0 != f.0 && e.0 != f.1 && e.1 != f.0 && e.1 != f.1 && segments_cross(p(e.0), p(e.1), p(f.0), p(f.1))
}

fn plane(ps: &PointSet, edges: &[Edge]) -> bool {
    edges.iter().enumerate().all(|(i, &e)| edges[i + 1..].iter().all(|&f| !crosses(ps, e, f)))
}

fn total_length(ps: &PointSet, edges: &[Edge]) -> f64 {
    edges.iter().map(|e| dist(ps.point(e.0), ps.point(e.1))).sum()
}

fn connected(n: usize, edges: &[Edge]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.0].push(e.1);
        adj[e.1].push(e.0);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !std::mem::replace(&mut seen[w], true) {
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn sorted_pair(a: Edge, b: Edge) -> [Edge; 2] {
    let (a, b) = (Edge::new(a.0, a.1), Edge::new(b.0, b.1));
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Legal replacements for a crossing pair: both re-pairings for plain
/// matchings, the red-blue one for colored matchings, the connected one for
/// trees.
fn legal_replacements(kind: GraphKind, colored: bool, ps: &PointSet, edges: &[Edge], e: Edge, f: Edge) -> Vec<[Edge; 2]> {
    let options = [
        sorted_pair(Edge::new(e.0, f.0), Edge::new(e.1, f.1)),
        sorted_pair(Edge::new(e.0, f.1), Edge::new(e.1, f.0)),
    ];
    options
        .into_iter()
        .filter(|pair| match kind {
            GraphKind::Matching => !colored || pair.iter().all(|x| ps.color(x.0) != ps.color(x.1)),
            GraphKind::Tree => {
                let mut next: Vec<Edge> = edges.iter().copied().filter(|&x| x != e && x != f).collect();
                next.extend(pair);
                connected(ps.len(), &next)
            }
        })
        .collect()
}

impl Universal {
    fn check<G: FlipGraph>(&mut self, label: &str, input: &G, report: &EngineReport<G>) {
        self.runs += 1;
        self.flips += report.flips_used;
        let ps = input.points();
        let colored = input.chromatic();
        let mut edges: Vec<Edge> = input.edges().to_vec();
        let mut w = total_length(ps, &edges);
        let mut fail = |msg: String| self.failures.push(format!("{label}: {msg}"));
        if edges != report.trace.initial {
            fail("trace does not start at the input".into());
            return;
        }
        for (k, step) in report.trace.steps.iter().enumerate() {
            let [e, f] = step.removed;
            if !edges.contains(&e) || !edges.contains(&f) || !crosses(ps, e, f) {
                fail(format!("step {k} removes {e:?}, {f:?} which are not crossing edges of the state"));
                return;
            }
            let legal = legal_replacements(input.kind(), colored, ps, &edges, e, f);
            let expected = if input.kind() == GraphKind::Matching && !colored { 2 } else { 1 };
            if legal.len() != expected {
                fail(format!("step {k}: {} legal replacements, expected {expected}", legal.len()));
            }
            if !legal.contains(&sorted_pair(step.added[0], step.added[1])) {
                fail(format!("step {k}: {:?} is not a legal replacement", step.added));
                return;
            }
            edges.retain(|&x| x != e && x != f);
            edges.extend(step.added);
            edges.sort();
            let next_w = total_length(ps, &edges);
            if next_w >= w {
                fail(format!("step {k}: weight {w} -> {next_w}"));
            }
            w = next_w;
        }
        if edges != report.final_state.edges() {
            fail("replayed edges differ from the final state".into());
        }
        if !plane(ps, &edges) || !report.plane {
            fail("final state has crossings".into());
        }
    }
}

fn matching(ps: &Arc<PointSet>, edges: Vec<Edge>, colored: bool) -> Matching {
    Matching::new(ps.clone(), edges, colored).unwrap()
}

fn convex_min(u: &mut Universal) -> (bool, String) {
    timed(10.0, || {
        let mut ok = true;
        let mut count = 0;
        let mut worst = 0.0f64;
        for n in (4..=10).step_by(2) {
            let ps = Arc::new(gen::gen_convex(n, n as u64).unwrap());
            let bound = n / 2 - 1;
            for edges in gen::all_perfect_matchings(n) {
                let m = matching(&ps, edges, false);
                let r = untangle_convex_min(&m).unwrap();
                ok &= r.flips_used <= bound;
                worst = worst.max(r.flips_used as f64 / bound as f64);
                u.check("convex-min", &m, &r);
                count += 1;
            }
        }
        let mut max16 = 0;
        for seed in 0..500 {
            let ps = Arc::new(gen::gen_convex(16, seed).unwrap());
            let m = gen::gen_random_matching(ps, seed, false).unwrap();
            let r = untangle_convex_min(&m).unwrap();
            ok &= r.flips_used <= 7;
            max16 = max16.max(r.flips_used);
            u.check("convex-min", &m, &r);
        }
        (ok, format!("{count} matchings n=4..10, worst flips/(n/2-1) = {worst:.2}; n=16 x 500 max {max16} <= 7"))
    })
}

fn convex_max() -> (bool, String) {
    timed(60.0, || {
        let mut ok = true;
        let mut parts = Vec::new();
        for n in [4usize, 6, 8] {
            let k = n / 2;
            let bound = k * (k - 1) / 2;
            let ps = Arc::new(gen::gen_convex(n, 100 + n as u64).unwrap());
            let all: Vec<Matching> = gen::all_perfect_matchings(n).into_iter().map(|e| matching(&ps, e, false)).collect();
            let mut max = 0;
            for m in &all {
                let f = oracle_max_flips(m).unwrap();
                ok &= f <= bound;
                max = max.max(f);
            }
            let witness = find_witness(all.iter().cloned(), |s| s.max_flips == bound).unwrap();
            ok &= max == bound && witness.is_some();
            parts.push(format!("n={n}: max {max} = C({k},2) = {bound}"));
        }
        (ok, parts.join(", "))
    })
}

fn grid_angle(u: &mut Universal) -> (bool, String) {
    timed(30.0, || {
        let gain = (2.0 - std::f64::consts::SQRT_2) / 4.0;
        let mut ok = true;
        let mut parts = Vec::new();
        for k in [4usize, 8, 10] {
            let n = k * k;
            let mut worst_ratio = f64::MAX;
            let mut max_flips = 0;
            let mut bound_min = u64::MAX;
            for seed in 0..10 {
                let ps = Arc::new(gen::gen_grid(k, seed).unwrap());
                let m = gen::gen_random_matching(ps.clone(), seed, false).unwrap();
                let r = untangle_angle_guided(&m).unwrap();
                let mu = min_pairwise_distance(ps.points()).value;
                let (hi, lo) = extreme_dist2(ps.points());
                let spread = (hi as f64 / lo as f64).sqrt();
                let bound = (2.0 * n as f64 * spread / (2.0 - std::f64::consts::SQRT_2)).ceil() as u64;
                ok &= (r.flips_used as u64) <= bound;
                for (before, after) in r.trace.states().windows(2).map(|w| (&w[0], &w[1])) {
                    let dec = total_length(&ps, before) - total_length(&ps, after);
                    ok &= dec >= gain * mu * (1.0 - REL_TOL);
                    worst_ratio = worst_ratio.min(dec / (gain * mu));
                }
                max_flips = max_flips.max(r.flips_used);
                bound_min = bound_min.min(bound);
                u.check("angle", &m, &r);
            }
            parts.push(format!("n={n}: max flips {max_flips} <= {bound_min}, min gain/bound {worst_ratio:.2}"));
        }
        (ok, parts.join(", "))
    })
}

/// `den^2 (u - o) . (v - o)` with `o` rational.
fn dot(o: &RationalPoint, u: &Point, v: &Point) -> BigInt {
    let c = |p: &Point| (BigInt::from(p.x as i128 * o.den - o.x), BigInt::from(p.y as i128 * o.den - o.y));
    let (ux, uy) = c(u);
    let (vx, vy) = c(v);
    ux * vx + uy * vy
}

fn norm2(o: &RationalPoint, u: &Point) -> BigInt {
    dot(o, u, u)
}

fn at_most_right(o: &RationalPoint, u: &Point, v: &Point) -> bool {
    dot(o, u, v) >= BigInt::from(0)
}

fn at_most_third(o: &RationalPoint, u: &Point, v: &Point) -> bool {
    let d = dot(o, u, v);
    d >= BigInt::from(0) && BigInt::from(4) * &d * &d >= norm2(o, u) * norm2(o, v)
}

fn min_dist(pts: &[&Point]) -> f64 {
    let mut best = f64::MAX;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.min(dist(pts[i], pts[j]));
        }
    }
    best
}

fn labelings() -> [[usize; 4]; 8] {
    [[0, 1, 2, 3], [1, 0, 2, 3], [0, 1, 3, 2], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 0, 1], [2, 3, 1, 0], [3, 2, 1, 0]]
}

/// Gain of replacing `ab`, `cd` by `ad`, `cb`.
fn gain(a: &Point, b: &Point, c: &Point, d: &Point) -> f64 {
    dist(a, b) + dist(c, d) - dist(a, d) - dist(c, b)
}

fn random_crossing_quad(rng: &mut ChaCha8Rng) -> [Point; 4] {
    loop {
        let pts: Vec<Point> = (0..4).map(|_| Point::new(rng.gen_range(-1000..=1000), rng.gen_range(-1000..=1000))).collect();
        if PointSet::new(pts.clone(), PositionClass::General).is_ok() && segments_cross(&pts[0], &pts[1], &pts[2], &pts[3]) {
            return [pts[0], pts[1], pts[2], pts[3]];
        }
    }
}

fn perpendicular_quad(rng: &mut ChaCha8Rng) -> [Point; 4] {
    loop {
        let (ox, oy) = (rng.gen_range(-500..=500), rng.gen_range(-500..=500));
        let (dx, dy) = (rng.gen_range(-9i64..=9), rng.gen_range(-9i64..=9));
        if dx == 0 && dy == 0 {
            continue;
        }
        let mut s = || rng.gen_range(1i64..=30);
        let (s1, s2, t1, t2) = (s(), s(), s(), s());
        let a = Point::new(ox + s1 * dx, oy + s1 * dy);
        let b = Point::new(ox - s2 * dx, oy - s2 * dy);
        let c = Point::new(ox - t1 * dy, oy + t1 * dx);
        let d = Point::new(ox + t2 * dy, oy - t2 * dx);
        return [a, b, c, d];
    }
}

fn local_lemmas() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let quarter = (2.0 - std::f64::consts::SQRT_2) / 4.0;
    let half = (2.0 - std::f64::consts::SQRT_2) / 2.0;
    let (mut ok, mut n_right, mut n_third, mut n_perp) = (true, 0, 0, 0);
    let mut worst = [f64::MAX; 3];
    let mut check = |pts: [Point; 4], perpendicular: bool| {
        let o = intersection_point(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
        let mu = min_dist(&[&pts[0], &pts[1], &pts[2], &pts[3]]);
        let ps = Arc::new(PointSet::new(pts.to_vec(), PositionClass::General).unwrap());
        let m = matching(&ps, vec![Edge(0, 1), Edge(2, 3)], false);
        for [a, b, c, d] in labelings() {
            let (pa, pb, pc, pd) = (&pts[a], &pts[b], &pts[c], &pts[d]);
            // angle rule with p, q, r, s = a, b, c, d
            if at_most_right(&o, pc, pb) {
                n_right += 1;
                let chosen = angle_rule_pairing(&m, Edge(a, b), Edge(c, d)).unwrap();
                ok &= sorted_pair(chosen[0], chosen[1]) == sorted_pair(Edge(a, d), Edge(c, b));
                let g = gain(pa, pb, pc, pd);
                ok &= g >= quarter * mu * (1.0 - REL_TOL);
                worst[0] = worst[0].min(g / (quarter * mu));
            }
            if at_most_third(&o, pc, pb) {
                n_third += 1;
                let g = gain(pa, pb, pc, pd);
                ok &= g >= mu * (1.0 - REL_TOL);
                worst[1] = worst[1].min(g / mu);
            }
            if perpendicular {
                let g = gain(pa, pb, pc, pd);
                ok &= g >= half * mu * (1.0 - REL_TOL);
                worst[2] = worst[2].min(g / (half * mu));
            }
        }
        if perpendicular {
            n_perp += 1;
        }
    };
    for _ in 0..1000 {
        let q = random_crossing_quad(&mut rng);
        let perp = (q[1].x - q[0].x) * (q[3].x - q[2].x) + (q[1].y - q[0].y) * (q[3].y - q[2].y) == 0;
        check(q, perp);
    }
    let mut built = 0;
    while built < 1000 {
        let q = perpendicular_quad(&mut rng);
        if PointSet::new(q.to_vec(), PositionClass::General).is_err() {
            continue;
        }
        assert_eq!((q[1].x - q[0].x) * (q[3].x - q[2].x) + (q[1].y - q[0].y) * (q[3].y - q[2].y), 0);
        check(q, true);
        built += 1;
    }
    ok &= n_right > 0 && n_third > 0 && n_perp > 0;
    (
        ok,
        format!(
            "angle rule {n_right} cases (min gain/bound {:.3}), pi/3 {n_third} cases ({:.3}), perpendicular {n_perp} pairs ({:.3})",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn convex_trees(u: &mut Universal) -> (bool, String) {
    timed(30.0, || {
        let mut ok = true;
        let mut parts = Vec::new();
        let mut worst_sub = 0.0f64;
        for n in [8usize, 16, 32, 64] {
            let bound = 3.0 * n as f64 * (n as f64).log2();
            let mut max = 0;
            for seed in 0..100 {
                let ps = Arc::new(gen::gen_convex(n, seed).unwrap());
                let t = gen::gen_random_tree(ps, seed).unwrap();
                let r = untangle_convex_tree(&t).unwrap();
                ok &= r.flips_used as f64 <= bound;
                ok &= r.final_state.degrees() == t.degrees();
                let mut accounted = 0;
                for s in &r.subcalls {
                    ok &= s.flips <= s.bound;
                    ok &= match s.kind {
                        "boundary-edge" => s.bound == 2,
                        "double-star" => true,
                        _ => false,
                    };
                    if s.bound > 0 {
                        worst_sub = worst_sub.max(s.flips as f64 / s.bound as f64);
                    }
                    accounted += s.flips;
                }
                ok &= accounted == r.flips_used;
                max = max.max(r.flips_used);
                u.check("convex-tree", &t, &r);
            }
            parts.push(format!("n={n}: max {max} <= {bound:.0}"));
        }
        (ok, format!("{}; degrees preserved, worst subcall flips/bound {worst_sub:.2}", parts.join(", ")))
    })
}

fn double_star_tight(u: &mut Universal) -> (bool, String) {
    let pts = [(0, 0), (10, 0), (2, 3), (8, 3), (4, 20), (7, 19), (3, -4), (9, -3)]
        .into_iter()
        .map(|(x, y)| Point::new(x, y))
        .collect();
    let ps = Arc::new(PointSet::new(pts, PositionClass::General).unwrap());
    let edges = [(0, 1), (1, 2), (1, 4), (1, 6), (0, 3), (0, 5), (0, 7)].into_iter().map(|(a, b)| Edge::new(a, b)).collect();
    let t = SpanningTree::new(ps, edges).unwrap();
    let deg = t.degrees();
    let r = uncross_double_star(&t, 0, 1).unwrap();
    let opt = oracle_min_flips(&t).unwrap();
    u.check("double-star", &t, &r);
    (
        deg[0] == 4 && deg[1] == 4 && r.flips_used == 3 && opt == 3,
        format!("deg(u) = {}, deg(v) = {}, engine {} flips, oracle minimum {opt}", deg[0], deg[1], r.flips_used),
    )
}

fn bichromatic_convex(u: &mut Universal) -> (bool, String) {
    timed(120.0, || {
        let mut ok = true;
        let mut parts = Vec::new();
        for n in [4usize, 6, 8] {
            let base = gen::gen_convex(n, 200 + n as u64).unwrap();
            let (mut count, mut max_engine, mut max_opt) = (0, 0, 0);
            for colors in gen::balanced_colorings(n) {
                let ps = Arc::new(base.recolored(&colors).unwrap());
                for edges in gen::all_bichromatic_matchings(&colors) {
                    let m = matching(&ps, edges, true);
                    let r = untangle_bichromatic_convex(&m).unwrap();
                    let opt = oracle_min_flips(&m).unwrap();
                    ok &= r.flips_used <= n - 2 && opt <= n - 2 && opt <= r.flips_used;
                    max_engine = max_engine.max(r.flips_used);
                    max_opt = max_opt.max(opt);
                    u.check("bi-convex", &m, &r);
                    count += 1;
                }
            }
            parts.push(format!("n={n}: {count} instances, engine max {max_engine}, largest oracle minimum {max_opt}, bound {}", n - 2));
        }
        (ok, parts.join(", "))
    })
}

fn semi_collinear(u: &mut Universal) -> (bool, String) {
    timed(60.0, || {
        let archived = include_str!("fixtures/reappearing_crossing.txt");
        let archived = match parse_instance(archived).unwrap() {
            Instance::Matching(m) => m,
            Instance::Tree(_) => unreachable!(),
        };
        let mut ok = true;
        let mut parts = Vec::new();
        let mut witness = None;
        for n in [4usize, 6, 8] {
            let bound = n * n / 4 - n / 2;
            let (mut max, mut max_fan) = (0, 0);
            for seed in 0..200 {
                let ps = Arc::new(gen::gen_semi_collinear(n, seed).unwrap());
                let m = gen::gen_random_matching(ps, seed, true).unwrap();
                let r = untangle_semi_collinear(&m).unwrap();
                let (lo, hi) = oracle_min_max(&m).unwrap();
                ok &= r.flips_used <= bound && lo <= r.flips_used && r.flips_used <= hi;
                for s in r.subcalls.iter().filter(|s| s.kind == "topmost-fan") {
                    ok &= s.flips < n / 2;
                    max_fan = max_fan.max(s.flips);
                }
                if witness.is_none() {
                    if let Some(re) = find_reappearing_crossing(m.points(), &r.trace.states()) {
                        witness = Some((n, seed, re, m.clone()));
                    }
                }
                max = max.max(r.flips_used);
                u.check("semi", &m, &r);
            }
            parts.push(format!("n={n}: max {max} <= {bound}, fan max {max_fan}"));
        }
        let found = match &witness {
            Some((n, seed, re, m)) => {
                let same = write_instance(&m.clone().into()) == write_instance(&archived.clone().into());
                ok &= same;
                format!(
                    "reappearing crossing {:?} x {:?} at n={n} seed={seed} (states {}, {}, {}), archived copy {}",
                    re.pair.0,
                    re.pair.1,
                    re.first_seen,
                    re.vanished,
                    re.reappeared,
                    if same { "matches" } else { "DIFFERS" }
                )
            }
            None => {
                ok = false;
                "no reappearing crossing found".into()
            }
        };
        (ok, format!("{}; {found}", parts.join(", ")))
    })
}

fn adversaries(u: &mut Universal) {
    for n in [6usize, 8] {
        let ps = Arc::new(gen::gen_convex(n, 300 + n as u64).unwrap());
        for (i, edges) in gen::all_perfect_matchings(n).into_iter().enumerate() {
            let m = matching(&ps, edges, false);
            for policy in [AdversaryPolicy::ExhaustiveLongest, AdversaryPolicy::GreedyMaxCrossings, AdversaryPolicy::Random(i as u64)] {
                u.check("adversary", &m, &adversary_max(&m, policy).unwrap());
            }
            u.check("leftmost", &m, &untangle_leftmost(&m).unwrap());
        }
    }
    for seed in 0..20 {
        let ps = Arc::new(gen::gen_grid(6, seed).unwrap());
        let m = gen::gen_random_matching(ps, seed, false).unwrap();
        u.check("leftmost", &m, &untangle_leftmost(&m).unwrap());
    }
}

fn main() {
    let mut u = Universal::default();
    let mut outcomes = Vec::new();
    let mut record = |name: &'static str, (pass, detail): (bool, String)| {
        let line = format!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        println!("{line}");
        outcomes.push(Outcome { name, pass, detail });
    };
    record("convex min-depth engine within n/2-1", convex_min(&mut u));
    record("convex maximum flip sequence equals C(n/2,2)", convex_max());
    record("grid angle rule gain and flip count", grid_angle(&mut u));
    record("local pairing gains on random crossing pairs", local_lemmas());
    record("convex tree engine within 3 n log n", convex_trees(&mut u));
    record("double star needing deg - 1 flips", double_star_tight(&mut u));
    record("bichromatic convex within n-2", bichromatic_convex(&mut u));
    record("semi-collinear engine, fan and reappearing crossing", semi_collinear(&mut u));
    adversaries(&mut u);
    let universal = (
        u.failures.is_empty(),
        format!(
            "{} runs, {} flips replayed{}",
            u.runs,
            u.flips,
            u.failures.first().map(|f| format!("; first failure: {f}")).unwrap_or_default()
        ),
    );
    record("plane output, decreasing weight, legal flips", universal);

    let failed: Vec<&Outcome> = outcomes.iter().filter(|o| !o.pass).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    if !failed.is_empty() {
        for o in failed {
            eprintln!("failed: {} ({})", o.name, o.detail);
        }
        std::process::exit(1);
    }
}
