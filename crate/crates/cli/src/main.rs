use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use shortcut_core::graph::{generate, read_edge_list, write_arcs, GraphKind};
use shortcut_core::oracle::{verify_shortcuts, verify_tree};
use shortcut_core::par::{
    las_vegas, make_params, par_diam, reachability, DiamConfig, ParScParams, ParamOverrides,
    Profile, ReachConfig,
};
use shortcut_core::rng::{derive_seed, seeded};
use shortcut_core::seq::{default_runs, seq_diameter_reduce};
use shortcut_core::tree::{extract_spanning_tree, DirectedTree};
use shortcut_core::{Digraph, VertexId};

mod bench;

#[derive(Parser)]
#[command(name = "shortcut", version, about = "Diameter reduction by shortcutting for digraphs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Common {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = Profile::Desk)]
    profile: Profile,
    /// Independent runs (seq) or runs per round (par).
    #[arg(long, global = true)]
    runs: Option<u32>,
    /// Outer diameter-reduction rounds (par).
    #[arg(long, global = true)]
    rounds: Option<u32>,
    #[arg(long, global = true)]
    max_shortcuts: Option<u64>,
    #[arg(long, global = true)]
    max_work: Option<u64>,
    #[arg(long, global = true)]
    tag_cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Path,
    Cycle,
    Layered,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Seq,
    Par,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Seq => "seq",
            Algo::Par => "par",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph as an edge list.
    Generate {
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Arc count for random graphs (default 4n).
        #[arg(long)]
        m: Option<usize>,
        /// Layer width for layered graphs.
        #[arg(long, default_value_t = 4)]
        width: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compute shortcuts and print run metrics.
    Shortcut {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Seq)]
        algo: Algo,
        /// Shortcut edge list destination.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write the metrics line here.
        #[arg(long)]
        metrics: Option<PathBuf>,
    },
    /// Print every vertex reachable from the source, one per line.
    Reach {
        input: PathBuf,
        #[arg(long)]
        source: VertexId,
        #[arg(long, value_enum, default_value_t = Algo::Par)]
        algo: Algo,
    },
    /// Extract and verify a spanning tree of the source's reach.
    Tree {
        input: PathBuf,
        #[arg(long)]
        source: VertexId,
        #[arg(long, value_enum, default_value_t = Algo::Seq)]
        algo: Algo,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a shortcut list or a tree against the brute-force oracle.
    Verify {
        input: PathBuf,
        #[arg(long, conflicts_with = "tree", required_unless_present = "tree")]
        shortcuts: Option<PathBuf>,
        #[arg(long, requires = "source")]
        tree: Option<PathBuf>,
        #[arg(long)]
        source: Option<VertexId>,
    },
    /// Run a grid of instances and write one CSV row per cell.
    Bench(bench::BenchArgs),
}

/// Failure classes with distinct exit codes.
enum Failure {
    Usage(anyhow::Error),
    Algorithm(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Algorithm(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let c = &cli.common;
    match cli.command {
        Command::Generate { kind, n, m, width, out } => {
            let kind = graph_kind(kind, n, m, width);
            let g = generate(kind, n, c.seed).context("cannot generate graph")?;
            let text = write_arcs(g.n(), g.arcs());
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    println!("{} {}", g.n(), g.m());
                }
                None => {
                    print!("{text}");
                    eprintln!("{} {}", g.n(), g.m());
                }
            }
            Ok(())
        }
        Command::Shortcut { input, algo, out, metrics } => {
            let g = load(&input)?;
            let (arcs, m) = shortcut(&g, algo, c)?;
            let text = write_arcs(g.n(), arcs);
            let line = m.line();
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    println!("{line}");
                }
                None => {
                    print!("{text}");
                    eprintln!("{line}");
                }
            }
            if let Some(path) = metrics {
                write_file(&path, &format!("{line}\n"))?;
            }
            Ok(())
        }
        Command::Reach { input, source, algo } => {
            let g = load(&input)?;
            if source as usize >= g.n() {
                return Err(anyhow::anyhow!("source {source} out of range for n = {}", g.n()).into());
            }
            let reach = reach(&g, source, algo, c)?;
            let mut stdout = std::io::stdout().lock();
            for v in &reach.reached {
                writeln!(stdout, "{v}").context("cannot write output")?;
            }
            eprintln!("retries: {}", reach.retries);
            Ok(())
        }
        Command::Tree { input, source, algo, out } => {
            let g = load(&input)?;
            if source as usize >= g.n() {
                return Err(anyhow::anyhow!("source {source} out of range for n = {}", g.n()).into());
            }
            let t = tree(&g, source, algo, c)?;
            let mut arcs: Vec<_> = t.arcs().collect();
            arcs.sort_unstable();
            let text = write_arcs(g.n(), arcs);
            match out {
                Some(path) => write_file(&path, &text)?,
                None => print!("{text}"),
            }
            let report = verify_tree(&g, &t, source);
            if !report.ok() {
                for v in &report.violations {
                    eprintln!("violation: {v}");
                }
                return Err(Failure::Algorithm(anyhow::anyhow!("extracted tree failed verification")));
            }
            Ok(())
        }
        Command::Verify { input, shortcuts, tree, source } => {
            let g = load(&input)?;
            let report = if let Some(path) = shortcuts {
                let s = load(&path)?;
                if s.n() != g.n() {
                    return Err(anyhow::anyhow!("shortcut list has n = {}, graph has {}", s.n(), g.n()).into());
                }
                let arcs: Vec<_> = s.arcs().collect();
                verify_shortcuts(&g, &arcs).context("oracle cannot handle this graph")?
            } else {
                let path = tree.expect("clap requires --shortcuts or --tree");
                let source = source.expect("clap requires --source with --tree");
                let t = load(&path)?;
                if t.n() != g.n() || source as usize >= g.n() {
                    return Err(anyhow::anyhow!("tree does not match the graph or source").into());
                }
                let arcs: Vec<_> = t.arcs().collect();
                verify_tree(&g, &DirectedTree::from_arcs(g.n(), source, &arcs), source)
            };
            if report.ok() {
                println!("ok");
                Ok(())
            } else {
                for v in &report.violations {
                    println!("violation: {v}");
                }
                Err(Failure::Algorithm(anyhow::anyhow!("{} violations", report.violations.len())))
            }
        }
        Command::Bench(args) => bench::run(&args, c),
    }
}

fn graph_kind(kind: Kind, n: usize, m: Option<usize>, width: usize) -> GraphKind {
    match kind {
        Kind::Path => GraphKind::Path,
        Kind::Cycle => GraphKind::Cycle,
        Kind::Layered => GraphKind::Layered { width },
        Kind::Random => GraphKind::Random { m: m.unwrap_or(4 * n) },
    }
}

fn load(path: &Path) -> anyhow::Result<Digraph> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    read_edge_list(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn params(g: &Digraph, c: &Common) -> anyhow::Result<ParScParams> {
    let overrides = ParamOverrides {
        max_shortcuts: c.max_shortcuts,
        max_work: c.max_work,
        tag_cap: c.tag_cap,
        ..Default::default()
    };
    Ok(make_params(g.n(), g.m(), c.profile, &overrides)?)
}

/// Counters reported by `shortcut` and `bench`.
#[derive(Clone, Copy, Debug, Default)]
struct Metrics {
    shortcuts: u64,
    arcs_visited: u64,
    max_search_dist: u64,
    retries: u32,
}

impl Metrics {
    fn line(&self) -> String {
        format!(
            "shortcuts={} arcsVisited={} maxSearchDist={} retries={}",
            self.shortcuts, self.arcs_visited, self.max_search_dist, self.retries
        )
    }
}

fn par_config(c: &Common, record_trees: bool) -> DiamConfig {
    DiamConfig {
        record_trees,
        ..DiamConfig::new(c.rounds.unwrap_or(1), c.runs.unwrap_or(1))
    }
}

/// Raw shortcut arcs and metrics for one run of `algo`.
fn shortcut(
    g: &Digraph,
    algo: Algo,
    c: &Common,
) -> Result<(Vec<shortcut_core::Arc>, Metrics), Failure> {
    if g.n() == 0 {
        return Ok((Vec::new(), Metrics::default()));
    }
    match algo {
        Algo::Seq => {
            let red = seq_diameter_reduce(g, c.runs.unwrap_or_else(|| default_runs(g.n())), c.seed, false);
            let stats = red.stats();
            let m = Metrics {
                shortcuts: red.shortcuts.len() as u64,
                arcs_visited: stats.arcs_visited,
                max_search_dist: stats.max_search_depth as u64,
                retries: 0,
            };
            Ok((red.shortcuts.distinct_arcs(), m))
        }
        Algo::Par => {
            let p = params(g, c)?;
            let out = par_diam(g, &p, &par_config(c, false), &mut seeded(c.seed))
                .map_err(|e| Failure::Algorithm(e.into()))?;
            let m = Metrics {
                shortcuts: out.shortcuts.len() as u64,
                arcs_visited: out.run_stats.iter().map(|s| s.arcs_scanned).sum(),
                max_search_dist: out.run_stats.iter().map(|s| s.max_search_dist).max().unwrap_or(0),
                retries: out.retries,
            };
            Ok((out.shortcuts.distinct_arcs(), m))
        }
    }
}

fn reach(
    g: &Digraph,
    s: VertexId,
    algo: Algo,
    c: &Common,
) -> Result<shortcut_core::par::Reach, Failure> {
    match algo {
        Algo::Seq => {
            let runs = c.runs.unwrap_or_else(|| default_runs(g.n()));
            let hop_cap = shortcut_core::par::default_hop_cap(g.n());
            las_vegas(g, s, hop_cap, 64, |attempt| {
                let red = seq_diameter_reduce(g, runs, derive_seed(c.seed, attempt as u64), false);
                g.union_with_shortcuts(red.shortcuts.arcs())
            })
            .map_err(|e| Failure::Algorithm(e.into()))
        }
        Algo::Par => {
            let p = params(g, c)?;
            let cfg = ReachConfig {
                outer_rounds: c.rounds.unwrap_or(1),
                inner_runs: c.runs.unwrap_or(1),
                ..Default::default()
            };
            reachability(g, s, &p, &cfg, &mut seeded(c.seed)).map_err(|e| Failure::Algorithm(e.into()))
        }
    }
}

fn tree(g: &Digraph, s: VertexId, algo: Algo, c: &Common) -> Result<DirectedTree, Failure> {
    let history = match algo {
        Algo::Seq => {
            let runs = c.runs.unwrap_or_else(|| default_runs(g.n()));
            seq_diameter_reduce(g, runs, c.seed, true).history(g)
        }
        Algo::Par => {
            let p = params(g, c)?;
            par_diam(g, &p, &par_config(c, true), &mut seeded(c.seed))
                .map_err(|e| Failure::Algorithm(e.into()))?
                .into_history()
        }
    };
    extract_spanning_tree(&history, s).map_err(|e| Failure::Algorithm(e.into()))
}
