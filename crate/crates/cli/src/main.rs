use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use untangle::bench::{format_table, run_bench, to_csv, Suite};
use untangle::engine::bichromatic::{untangle_bichromatic_convex, untangle_semi_collinear};
use untangle::engine::matching::{
    adversary_max, untangle_angle_guided, untangle_convex_min, untangle_leftmost, AdversaryPolicy,
};
use untangle::engine::tree::untangle_convex_tree;
use untangle::engine::EngineReport;
use untangle::io::{read_instance, save_instance, save_trace, Instance, TraceFile};
use untangle::{gen, oracle, svg, Error, FlipGraph};

/// Untangle crossing geometric matchings and spanning trees by flips.
#[derive(Parser)]
#[command(name = "untangle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen {
        #[arg(long, value_enum)]
        kind: PointKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GraphArg::Matching)]
        graph: GraphArg,
        /// Color convex points red and blue and draw a red-blue matching.
        #[arg(long)]
        colored: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an untangling engine on an instance.
    Untangle {
        #[arg(long, value_enum)]
        engine: EngineArg,
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the flip sequence as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write trace.svg into this directory.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Exact minimum and maximum flip-sequence lengths for small instances.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Run an adversarial flip policy on a matching.
    Adversary {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        policy: PolicyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a TOML benchmark suite and check every bound.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PointKind {
    Convex,
    Grid,
    Semicollinear,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphArg {
    Matching,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Angle,
    ConvexMin,
    Leftmost,
    ConvexTree,
    BiConvex,
    Semi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Min,
    Max,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Exhaustive,
    Greedy,
    Random,
}

fn finish<G: FlipGraph>(
    report: EngineReport<G>,
    trace: Option<PathBuf>,
    svg_dir: Option<PathBuf>,
) -> anyhow::Result<()> {
    println!(
        "engine={} flips={} bound={:.2} plane={}",
        report.engine, report.flips_used, report.bound_value, report.plane
    );
    if let Some(path) = trace {
        save_trace(&path, &TraceFile::from_report(&report)).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(dir) = svg_dir {
        std::fs::create_dir_all(&dir)?;
        svg::save_trace_svg(dir.join("trace.svg"), report.final_state.points().points(), &report.trace)?;
    }
    report.check_bound()?;
    Ok(())
}

fn matching(inst: Instance) -> anyhow::Result<untangle::Matching> {
    match inst {
        Instance::Matching(m) => Ok(m),
        Instance::Tree(_) => bail!(Error::PreconditionViolated("this command needs a matching".into())),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen { kind, n, seed, graph, colored, out } => {
            let ps = match kind {
                PointKind::Convex => {
                    let ps = gen::gen_convex(n, seed)?;
                    if colored {
                        ps.recolored(&gen::random_balanced_colors(n, seed))?
                    } else {
                        ps
                    }
                }
                PointKind::Grid => {
                    let k = (n as f64).sqrt().round() as usize;
                    if k * k != n {
                        bail!(Error::PreconditionViolated(format!("grid size {n} is not a perfect square")));
                    }
                    gen::gen_grid(k, seed)?
                }
                PointKind::Semicollinear => gen::gen_semi_collinear(n, seed)?,
            };
            let chromatic = colored || matches!(kind, PointKind::Semicollinear);
            let ps = Arc::new(ps);
            let inst: Instance = match graph {
                GraphArg::Matching => gen::gen_random_matching(ps, seed, chromatic)?.into(),
                GraphArg::Tree => gen::gen_random_tree(ps, seed)?.into(),
            };
            save_instance(&out, &inst)?;
        }
        Command::Untangle { engine, input, trace, svg } => {
            let inst = read_instance(&input)?;
            match (engine, inst) {
                (EngineArg::ConvexTree, Instance::Tree(t)) => finish(untangle_convex_tree(&t)?, trace, svg)?,
                (EngineArg::ConvexTree, _) => {
                    bail!(Error::PreconditionViolated("convex-tree needs a tree instance".into()))
                }
                (e, inst) => {
                    let m = matching(inst)?;
                    let report = match e {
                        EngineArg::Angle => untangle_angle_guided(&m)?,
                        EngineArg::ConvexMin => untangle_convex_min(&m)?,
                        EngineArg::Leftmost => untangle_leftmost(&m)?,
                        EngineArg::BiConvex => untangle_bichromatic_convex(&m)?,
                        EngineArg::Semi => untangle_semi_collinear(&m)?,
                        EngineArg::ConvexTree => unreachable!(),
                    };
                    finish(report, trace, svg)?;
                }
            }
        }
        Command::Oracle { input, mode } => {
            let inst = read_instance(&input)?;
            let (min, max) = match (&inst, mode) {
                (Instance::Matching(m), Mode::Min) => (Some(oracle::oracle_min_flips(m)?), None),
                (Instance::Matching(m), Mode::Max) => (None, Some(oracle::oracle_max_flips(m)?)),
                (Instance::Matching(m), Mode::Both) => {
                    let (a, b) = oracle::oracle_min_max(m)?;
                    (Some(a), Some(b))
                }
                (Instance::Tree(t), Mode::Min) => (Some(oracle::oracle_min_flips(t)?), None),
                (Instance::Tree(t), Mode::Max) => (None, Some(oracle::oracle_max_flips(t)?)),
                (Instance::Tree(t), Mode::Both) => {
                    let (a, b) = oracle::oracle_min_max(t)?;
                    (Some(a), Some(b))
                }
            };
            if let Some(v) = min {
                println!("min={v}");
            }
            if let Some(v) = max {
                println!("max={v}");
            }
        }
        Command::Adversary { input, policy, seed } => {
            let m = matching(read_instance(&input)?)?;
            let policy = match policy {
                PolicyArg::Exhaustive => AdversaryPolicy::ExhaustiveLongest,
                PolicyArg::Greedy => AdversaryPolicy::GreedyMaxCrossings,
                PolicyArg::Random => AdversaryPolicy::Random(seed),
            };
            finish(adversary_max(&m, policy)?, None, None)?;
        }
        Command::Bench { suite, report } => {
            let text = std::fs::read_to_string(&suite).with_context(|| format!("reading {}", suite.display()))?;
            let rows = run_bench(&Suite::parse(&text)?)?;
            let table = format_table(&rows);
            print!("{table}");
            if let Some(path) = report {
                std::fs::write(&path, format!("{table}\n{}", to_csv(&rows)?))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::BoundViolation { .. }) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
