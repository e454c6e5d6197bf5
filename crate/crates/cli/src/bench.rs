use std::io;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context;
use clap::Args;
use serde::Serialize;
use shortcut_core::graph::generate;
use shortcut_core::oracle::{estimate_diameter, PairSpec};
use shortcut_core::rng::{derive_seed, seeded};

use crate::{graph_kind, shortcut, Algo, CmdResult, Common, Failure, Kind, Metrics};

/// Random pairs measured on top of the `(0, n-1)` endpoint pair.
const SAMPLED_PAIRS: usize = 32;

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "path")]
    kinds: Vec<Kind>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "seq")]
    algos: Vec<Algo>,
    /// Seeds, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seeds: Vec<u64>,
    /// Arc count for random graphs (default 4n).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 4)]
    width: usize,
    /// CSV destination; stdout if absent.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Record {
    algo: &'static str,
    kind: &'static str,
    n: usize,
    m: Option<usize>,
    seed: u64,
    shortcuts: Option<u64>,
    arcs_visited: Option<u64>,
    max_search_dist: Option<u64>,
    measured_diameter: Option<u32>,
    elapsed_millis: Option<u128>,
    retries: Option<u32>,
    error: Option<String>,
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Path => "path",
        Kind::Cycle => "cycle",
        Kind::Layered => "layered",
        Kind::Random => "random",
    }
}

fn cell(args: &BenchArgs, c: &Common, algo: Algo, kind: Kind, n: usize, seed: u64) -> Record {
    let mut rec = Record {
        algo: algo.name(),
        kind: kind_name(kind),
        n,
        m: None,
        seed,
        shortcuts: None,
        arcs_visited: None,
        max_search_dist: None,
        measured_diameter: None,
        elapsed_millis: None,
        retries: None,
        error: None,
    };
    let g = match generate(graph_kind(kind, n, args.m, args.width), n, seed) {
        Ok(g) => g,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.m = Some(g.m());
    let run = Common { seed, ..c.clone() };
    let start = Instant::now();
    let result = shortcut(&g, algo, &run);
    rec.elapsed_millis = Some(start.elapsed().as_millis());
    let (arcs, Metrics { shortcuts, arcs_visited, max_search_dist, retries }) = match result {
        Ok(r) => r,
        Err(Failure::Usage(e) | Failure::Algorithm(e)) => {
            rec.error = Some(format!("{e:#}"));
            return rec;
        }
    };
    rec.shortcuts = Some(shortcuts);
    rec.arcs_visited = Some(arcs_visited);
    rec.max_search_dist = Some(max_search_dist);
    rec.retries = Some(retries);
    let gs = g.union_with_shortcuts(&arcs).expect("shortcuts lie inside the graph");
    if n > 0 {
        let mut rng = seeded(derive_seed(seed, 0xd1a));
        let ends = estimate_diameter(&gs, &PairSpec::Explicit(vec![(0, n as u32 - 1)]), &mut rng);
        let sampled = estimate_diameter(&gs, &PairSpec::Sampled { count: SAMPLED_PAIRS }, &mut rng);
        rec.measured_diameter = ends.max(sampled);
    }
    rec
}

pub fn run(args: &BenchArgs, c: &Common) -> CmdResult {
    let out: Box<dyn io::Write> = match &args.csv {
        Some(path) => Box::new(
            std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(out);
    let mut cells = 0;
    let mut failed = 0;
    for &algo in &args.algos {
        for &kind in &args.kinds {
            for &n in &args.sizes {
                for &seed in &args.seeds {
                    let rec = cell(args, c, algo, kind, n, seed);
                    cells += 1;
                    if let Some(e) = &rec.error {
                        failed += 1;
                        eprintln!("{} {} n={n} seed={seed}: {e}", rec.algo, rec.kind);
                    }
                    w.serialize(&rec).context("cannot write CSV row")?;
                }
            }
        }
    }
    if cells == 0 {
        w.write_record([
            "algo", "kind", "n", "m", "seed", "shortcuts", "arcsVisited", "maxSearchDist",
            "measuredDiameter", "elapsedMillis", "retries", "error",
        ])
        .context("cannot write CSV header")?;
    }
    w.flush().context("cannot flush CSV")?;
    if cells > 0 && failed == cells {
        return Err(Failure::Algorithm(anyhow::anyhow!("all {cells} bench cells failed")));
    }
    Ok(())
}
