//! Bound-verification benchmark over generated instance families.
//!
//! A suite is a TOML file with one `[[run]]` table per family and engine:
//!
//! ```toml
//! [[run]]
//! family = "convex"
//! engine = "convex-min"
//! sizes = [8, 16, 32]
//! seeds = 100
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::bichromatic::{untangle_bichromatic_convex, untangle_semi_collinear};
use crate::engine::matching::{adversary_max, untangle_angle_guided, untangle_convex_min, untangle_leftmost, AdversaryPolicy};
use crate::engine::tree::untangle_convex_tree;
use crate::engine::EngineReport;
use crate::error::{Error, Result};
use crate::gen;
use crate::geom::PointSet;
use crate::graph::FlipGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Matchings on convex point sets.
    Convex,
    /// Matchings on jittered square grids; sizes must be perfect squares.
    Grid,
    /// Red-blue matchings on convex point sets.
    BiConvex,
    /// Red-blue matchings with blue points on a line, red points above it.
    Semicollinear,
    /// Spanning trees on convex point sets.
    ConvexTree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineKind {
    Angle,
    ConvexMin,
    Leftmost,
    ConvexTree,
    BiConvex,
    Semi,
    AdversaryGreedy,
    AdversaryRandom,
}

impl EngineKind {
    fn accepts(self, family: Family) -> bool {
        use EngineKind::*;
        match family {
            Family::Convex => matches!(self, Angle | ConvexMin | Leftmost | AdversaryGreedy | AdversaryRandom),
            Family::Grid => matches!(self, Angle | Leftmost | AdversaryGreedy | AdversaryRandom),
            Family::BiConvex => matches!(self, BiConvex | AdversaryGreedy | AdversaryRandom),
            Family::Semicollinear => matches!(self, Semi),
            Family::ConvexTree => matches!(self, ConvexTree),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct RunSpec {
    pub family: Family,
    pub engine: EngineKind,
    pub sizes: Vec<usize>,
    /// Number of seeds, starting at `first_seed`.
    pub seeds: u64,
    #[serde(default)]
    pub first_seed: u64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Suite {
    pub run: Vec<RunSpec>,
}

impl Suite {
    pub fn parse(text: &str) -> Result<Self> {
        let suite: Suite = toml::from_str(text).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
        for r in &suite.run {
            if !r.engine.accepts(r.family) {
                return Err(Error::PreconditionViolated(format!(
                    "engine {:?} does not apply to family {:?}",
                    r.engine, r.family
                )));
            }
        }
        Ok(suite)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: Family,
    pub engine: EngineKind,
    pub n: usize,
    pub seed: u64,
    pub spread: f64,
    pub flips_used: usize,
    pub bound_value: f64,
    pub within_bound: bool,
    pub wall_time_ms: f64,
}

/// Seed offset separating the edge draw from the point draw.
const EDGE_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

fn points(family: Family, n: usize, seed: u64) -> Result<PointSet> {
    match family {
        Family::Convex | Family::ConvexTree => gen::gen_convex(n, seed),
        Family::Grid => {
            let k = (n as f64).sqrt().round() as usize;
            if k * k != n {
                return Err(Error::PreconditionViolated(format!("grid size {n} is not a square")));
            }
            gen::gen_grid(k, seed)
        }
        Family::BiConvex => gen::gen_convex(n, seed)?.recolored(&gen::random_balanced_colors(n, seed)),
        Family::Semicollinear => gen::gen_semi_collinear(n, seed),
    }
}

fn summarize<G: FlipGraph>(r: Result<EngineReport<G>>) -> Result<(usize, f64)> {
    let r = r?;
    Ok((r.flips_used, r.bound_value))
}

/// Generates one instance and runs one engine on it.
pub fn run_one(family: Family, engine: EngineKind, n: usize, seed: u64) -> Result<BenchRow> {
    let ps = Arc::new(points(family, n, seed)?);
    let spread = ps.spread()?;
    let edge_seed = seed ^ EDGE_SEED;
    let start = Instant::now();
    let (flips_used, bound_value) = if family == Family::ConvexTree {
        summarize(untangle_convex_tree(&gen::gen_random_tree(ps, edge_seed)?))?
    } else {
        let chromatic = matches!(family, Family::BiConvex | Family::Semicollinear);
        let m = gen::gen_random_matching(ps, edge_seed, chromatic)?;
        summarize(match engine {
            EngineKind::Angle => untangle_angle_guided(&m),
            EngineKind::ConvexMin => untangle_convex_min(&m),
            EngineKind::Leftmost => untangle_leftmost(&m),
            EngineKind::BiConvex => untangle_bichromatic_convex(&m),
            EngineKind::Semi => untangle_semi_collinear(&m),
            EngineKind::AdversaryGreedy => adversary_max(&m, AdversaryPolicy::GreedyMaxCrossings),
            EngineKind::AdversaryRandom => adversary_max(&m, AdversaryPolicy::Random(seed)),
            EngineKind::ConvexTree => unreachable!("rejected when the suite is parsed"),
        })?
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(BenchRow {
        family,
        engine,
        n,
        seed,
        spread,
        flips_used,
        bound_value,
        within_bound: flips_used as f64 <= bound_value.ceil(),
        wall_time_ms,
    })
}

/// Runs every job of the suite in parallel. Rows come back ordered by
/// run, size and seed. Any row over its bound aborts with
/// [`Error::BoundViolation`].
pub fn run_bench(suite: &Suite) -> Result<Vec<BenchRow>> {
    let jobs: Vec<(Family, EngineKind, usize, u64)> = suite
        .run
        .iter()
        .flat_map(|r| {
            r.sizes
                .iter()
                .flat_map(move |&n| (r.first_seed..r.first_seed + r.seeds).map(move |s| (r.family, r.engine, n, s)))
        })
        .collect();
    let rows: Vec<BenchRow> = jobs
        .par_iter()
        .map(|&(f, e, n, s)| run_one(f, e, n, s))
        .collect::<Result<_>>()?;
    if let Some(bad) = rows.iter().find(|r| !r.within_bound) {
        return Err(Error::BoundViolation {
            engine: format!("{:?} on {:?} n={} seed={}", bad.engine, bad.family, bad.n, bad.seed),
            flips: bad.flips_used,
            bound: bad.bound_value,
        });
    }
    Ok(rows)
}

/// The kebab-case name used in suite files and CSV rows.
fn label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|j| j.as_str().map(str::to_owned)).unwrap_or_default()
}

/// Aligned summary per family, engine and size.
pub fn format_table(rows: &[BenchRow]) -> String {
    let mut groups: BTreeMap<(Family, EngineKind, usize), Vec<&BenchRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.family, r.engine, r.n)).or_default().push(r);
    }
    let header = ["family", "engine", "n", "runs", "spread", "mean", "max", "bound", "max/bound", "max/(n lg n)", "ms"];
    let mut lines = vec![header.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    for ((family, engine, n), g) in &groups {
        let max = g.iter().map(|r| r.flips_used).max().unwrap_or(0);
        let mean = g.iter().map(|r| r.flips_used as f64).sum::<f64>() / g.len() as f64;
        let bound = g.iter().map(|r| r.bound_value).fold(f64::MIN, f64::max);
        let ratio = g.iter().map(|r| r.flips_used as f64 / r.bound_value.max(1.0)).fold(0.0, f64::max);
        let nlogn = *n as f64 * (*n as f64).log2().max(1.0);
        let spread = g.iter().map(|r| r.spread).fold(0.0, f64::max);
        let ms = g.iter().map(|r| r.wall_time_ms).sum::<f64>();
        lines.push(vec![
            label(family),
            label(engine),
            n.to_string(),
            g.len().to_string(),
            format!("{spread:.2}"),
            format!("{mean:.2}"),
            max.to_string(),
            format!("{bound:.1}"),
            format!("{ratio:.3}"),
            format!("{:.3}", max as f64 / nlogn),
            format!("{ms:.1}"),
        ]);
    }
    let widths: Vec<usize> = (0..header.len()).map(|c| lines.iter().map(|l| l[c].len()).max().unwrap()).collect();
    let mut out = String::new();
    for l in &lines {
        let cells: Vec<String> = l.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}

/// One CSV record per row, with a header.
pub fn to_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
