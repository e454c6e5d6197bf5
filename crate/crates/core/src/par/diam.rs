use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use super::algo::{par_sc, Abort, Budget, BudgetKind, ParScOptions, ParScOutput, ParScStats};
use super::params::ParScParams;
use crate::graph::Digraph;
use crate::rng::{derive_path, seeded};
use crate::search::Schedule;
use crate::shortcut::ShortcutSet;
use crate::tree::{BfsTreeRecord, History};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiamConfig {
    pub outer_rounds: u32,
    pub inner_runs: u32,
    /// Attempts per run before giving up.
    pub retry_cap: u32,
    pub record_trees: bool,
    pub schedule: Schedule,
}

impl DiamConfig {
    pub fn new(outer_rounds: u32, inner_runs: u32) -> Self {
        Self {
            outer_rounds,
            inner_runs,
            retry_cap: 16,
            record_trees: false,
            schedule: Schedule::Parallel,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiamError {
    #[error("round {round}, run {run}: {attempts} attempts aborted, last with: {last}")]
    RetriesExhausted {
        round: u32,
        run: u32,
        attempts: u32,
        last: Abort,
    },
}

impl DiamError {
    pub fn kind(&self) -> BudgetKind {
        match self {
            DiamError::RetriesExhausted { last, .. } => last.kind(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParDiamOutput {
    /// `G_0 = g`, then the graph after each outer round.
    pub snapshots: Vec<Digraph>,
    /// All surviving shortcuts; provenance carries round and run.
    pub shortcuts: ShortcutSet,
    /// Trees of every surviving run, with `round` set to the outer round.
    pub trees: Vec<BfsTreeRecord>,
    /// Aborted attempts that were discarded and redrawn.
    pub retries: u32,
    /// Per surviving run, in (round, run) order.
    pub run_stats: Vec<ParScStats>,
}

impl ParDiamOutput {
    pub fn final_graph(&self) -> &Digraph {
        self.snapshots.last().expect("snapshots start with G_0")
    }

    pub fn into_history(self) -> History {
        History {
            snapshots: self.snapshots,
            records: self.trees,
        }
    }
}

/// Repeated shortcutting: each outer round runs `inner_runs` independent
/// calls on the current graph and adds all their shortcuts to it.
pub fn par_diam(
    g: &Digraph,
    p: &ParScParams,
    cfg: &DiamConfig,
    rng: &mut impl Rng,
) -> Result<ParDiamOutput, DiamError> {
    let master: u64 = rng.gen();
    let mut out = ParDiamOutput {
        snapshots: vec![g.clone()],
        shortcuts: ShortcutSet::new(),
        trees: Vec::new(),
        retries: 0,
        run_stats: Vec::new(),
    };
    for round in 1..=cfg.outer_rounds {
        let current = out.final_graph();
        let opts = ParScOptions {
            record_trees: cfg.record_trees,
            round,
            schedule: cfg.schedule,
        };
        let attempt_run = |run: u32| -> Result<(ParScOutput, u32), DiamError> {
            let mut last = None;
            for attempt in 0..cfg.retry_cap.max(1) {
                let seed = derive_path(master, &[round as u64, run as u64, attempt as u64]);
                let mut budget = Budget::default();
                match par_sc(current, p.h_top, p, &mut seeded(seed), &mut budget, &opts) {
                    Ok(o) => return Ok((o, attempt)),
                    Err(e) => last = Some(e),
                }
            }
            Err(DiamError::RetriesExhausted {
                round,
                run,
                attempts: cfg.retry_cap.max(1),
                last: last.expect("at least one attempt"),
            })
        };
        let results: Vec<_> = match cfg.schedule {
            Schedule::Sequential => (0..cfg.inner_runs).map(attempt_run).collect(),
            _ => (0..cfg.inner_runs).into_par_iter().map(attempt_run).collect(),
        };
        let mut added = Vec::new();
        for (run, r) in results.into_iter().enumerate() {
            let (o, retries) = r?;
            out.retries += retries;
            out.run_stats.push(o.stats);
            added.extend_from_slice(o.shortcuts.arcs());
            let offset = out.trees.len() as u32;
            out.shortcuts.append(o.shortcuts, offset, |prov| prov.run = run as u32);
            out.trees.extend(o.trees);
        }
        let next = out
            .final_graph()
            .union_with_shortcuts(&added)
            .expect("shortcut endpoints are vertices of the graph");
        out.snapshots.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};
    use crate::oracle::transitive_closure;
    use crate::par::params::{make_params, ParamOverrides, Profile};

    fn desk(g: &Digraph) -> ParScParams {
        make_params(g.n(), g.m(), Profile::Desk, &ParamOverrides::default()).unwrap()
    }

    #[test]
    fn arcless_graph_is_unchanged() {
        let g = Digraph::empty(10);
        let out = par_diam(&g, &desk(&g), &DiamConfig::new(1, 1), &mut seeded(1)).unwrap();
        assert_eq!(out.snapshots.len(), 2);
        assert_eq!(out.snapshots[1], out.snapshots[0]);
    }

    #[test]
    fn closure_preserved_each_round() {
        for seed in 0..10 {
            let g = generate(GraphKind::Random { m: 120 }, 48, seed).unwrap();
            let out = par_diam(&g, &desk(&g), &DiamConfig::new(3, 2), &mut seeded(seed)).unwrap();
            let base = transitive_closure(&g).unwrap();
            for s in &out.snapshots {
                assert_eq!(transitive_closure(s).unwrap(), base);
            }
            assert!(out.shortcuts.provenance().iter().all(|p| (1..=3).contains(&p.round) && p.run < 2));
        }
    }

    #[test]
    fn exhausted_retries_report_budget() {
        let g = generate(GraphKind::Path, 10, 0).unwrap();
        let mut p = desk(&g);
        p.max_work = 0;
        let cfg = DiamConfig { retry_cap: 3, ..DiamConfig::new(1, 1) };
        let err = par_diam(&g, &p, &cfg, &mut seeded(1)).unwrap_err();
        assert_eq!(err.kind(), BudgetKind::Work);
        assert!(matches!(err, DiamError::RetriesExhausted { attempts: 3, .. }));
    }

    #[test]
    fn deterministic_across_schedules() {
        let g = generate(GraphKind::Random { m: 400 }, 128, 3).unwrap();
        let p = desk(&g);
        let a = par_diam(&g, &p, &DiamConfig::new(2, 3), &mut seeded(9)).unwrap();
        let cfg = DiamConfig { schedule: Schedule::Sequential, ..DiamConfig::new(2, 3) };
        let b = par_diam(&g, &p, &cfg, &mut seeded(9)).unwrap();
        assert_eq!(a.shortcuts, b.shortcuts);
        assert_eq!(a.snapshots, b.snapshots);
    }
}
