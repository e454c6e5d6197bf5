use std::borrow::Cow;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use super::params::ParScParams;
use super::schedule::{draw_distance, pivot_schedule};
use crate::graph::{Arc, Digraph, Direction, VertexId};
use crate::rng::{derive_seed, seeded};
use crate::search::{resolve, tagged_multi_search, Pivot, Schedule, SearchError, TagTable};
use crate::shortcut::{Provenance, ShortcutSet};
use crate::tree::BfsTreeRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BudgetKind {
    Work,
    Shortcuts,
    TagCapacity,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum Abort {
    #[error("work budget exhausted (used {used}, limit {limit})")]
    Work { used: u64, limit: u64 },
    #[error("shortcut budget exhausted (used {used}, limit {limit})")]
    Shortcuts { used: u64, limit: u64 },
    #[error("vertex {vertex} collected more than {cap} tags")]
    TagOverflow { vertex: VertexId, cap: usize },
}

impl Abort {
    pub fn kind(&self) -> BudgetKind {
        match self {
            Abort::Work { .. } => BudgetKind::Work,
            Abort::Shortcuts { .. } => BudgetKind::Shortcuts,
            Abort::TagOverflow { .. } => BudgetKind::TagCapacity,
        }
    }
}

/// Running totals checked against the budgets between recursion batches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub shortcuts_used: u64,
    pub work_used: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParScOptions {
    pub record_trees: bool,
    /// Written into provenance and tree records.
    pub round: u32,
    pub schedule: Schedule,
}

impl Default for ParScOptions {
    fn default() -> Self {
        Self {
            record_trees: false,
            round: 1,
            schedule: Schedule::Sequential,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParScStats {
    /// Largest fringe hop limit issued.
    pub max_search_dist: u64,
    /// Deepest vertex actually reached by any search.
    pub max_depth_reached: u32,
    pub max_tag_len: usize,
    pub core_visits: u64,
    pub fringe_visits: u64,
    pub searches: u64,
    /// Adjacency entries scanned by all searches.
    pub arcs_scanned: u64,
    pub subproblems: u64,
    pub batches: u32,
}

impl ParScStats {
    fn merge(&mut self, o: &ParScStats) {
        self.max_search_dist = self.max_search_dist.max(o.max_search_dist);
        self.max_depth_reached = self.max_depth_reached.max(o.max_depth_reached);
        self.max_tag_len = self.max_tag_len.max(o.max_tag_len);
        self.core_visits += o.core_visits;
        self.fringe_visits += o.fringe_visits;
        self.searches += o.searches;
        self.arcs_scanned += o.arcs_scanned;
        self.subproblems += o.subproblems;
    }
}

#[derive(Clone, Debug, Default)]
pub struct ParScOutput {
    pub shortcuts: ShortcutSet,
    pub trees: Vec<BfsTreeRecord>,
    pub stats: ParScStats,
    pub budget: Budget,
}

/// A pending call at the current height.
struct Subproblem<'g> {
    g: Cow<'g, Digraph>,
    /// Local to top-level ids; `None` for the top-level graph itself.
    global: Option<Vec<VertexId>>,
    seed: u64,
}

impl Subproblem<'_> {
    fn to_global(&self, v: VertexId) -> VertexId {
        self.global.as_ref().map_or(v, |m| m[v as usize])
    }
}

struct SubOutput {
    shortcuts: Vec<(Arc, Provenance)>,
    trees: Vec<BfsTreeRecord>,
    children: Vec<(Digraph, Vec<VertexId>)>,
    work: u64,
    stats: ParScStats,
}

/// Distance-limited shortcutting. Recursion runs breadth-first: every
/// subproblem of one height forms a batch, and the budgets are checked
/// between batches. On abort all partial output is dropped.
pub fn par_sc(
    g: &Digraph,
    h: u32,
    p: &ParScParams,
    rng: &mut impl Rng,
    budget: &mut Budget,
    opts: &ParScOptions,
) -> Result<ParScOutput, Abort> {
    let seed: u64 = rng.gen();
    check(p, budget)?;
    if budget.work_used >= p.max_work {
        return Err(Abort::Work {
            used: budget.work_used,
            limit: p.max_work,
        });
    }
    let mut out = ParScOutput::default();
    let mut batch = vec![Subproblem {
        g: Cow::Borrowed(g),
        global: None,
        seed,
    }];
    let mut height = h;
    while height >= 1 && !batch.is_empty() {
        let run = |s: &Subproblem| solve(s, height, p, opts);
        let results: Vec<Result<SubOutput, Abort>> = match opts.schedule {
            Schedule::Sequential => batch.iter().map(run).collect(),
            _ => batch.par_iter().map(run).collect(),
        };
        let mut next = Vec::new();
        for (s, r) in batch.iter().zip(results) {
            let r = r?;
            budget.work_used += r.work;
            budget.shortcuts_used += r.shortcuts.len() as u64;
            let offset = out.trees.len() as u32;
            for (arc, mut prov) in r.shortcuts {
                prov.tree = prov.tree.map(|t| t + offset);
                out.shortcuts.push(arc, prov);
            }
            out.trees.extend(r.trees);
            out.stats.merge(&r.stats);
            for (child, local) in r.children {
                let global = local.iter().map(|&v| s.to_global(v)).collect();
                next.push((child, global));
            }
        }
        out.stats.batches += 1;
        check(p, budget)?;
        batch = next
            .into_iter()
            .enumerate()
            .map(|(j, (child, global))| Subproblem {
                g: Cow::Owned(child),
                global: Some(global),
                seed: derive_seed(seed ^ height as u64, j as u64),
            })
            .collect();
        height -= 1;
    }
    out.budget = *budget;
    Ok(out)
}

fn check(p: &ParScParams, b: &Budget) -> Result<(), Abort> {
    if b.work_used > p.max_work {
        return Err(Abort::Work {
            used: b.work_used,
            limit: p.max_work,
        });
    }
    if b.shortcuts_used > p.max_shortcuts {
        return Err(Abort::Shortcuts {
            used: b.shortcuts_used,
            limit: p.max_shortcuts,
        });
    }
    Ok(())
}

fn search_abort(e: SearchError) -> Abort {
    match e {
        SearchError::TagOverflow { vertex, cap } => Abort::TagOverflow { vertex, cap },
        other => panic!("pivot search rejected its own input: {other}"),
    }
}

/// Sorted `a \ b` for sorted inputs.
fn difference(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    a.iter()
        .copied()
        .filter(|v| b.binary_search(v).is_err())
        .collect()
}

/// Sorted union of two sorted lists.
fn union(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let mut u: Vec<VertexId> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

fn solve(
    s: &Subproblem,
    h: u32,
    p: &ParScParams,
    opts: &ParScOptions,
) -> Result<SubOutput, Abort> {
    let g = s.g.as_ref();
    let n = g.n();
    let mut rng = seeded(s.seed);
    let sched = pivot_schedule(g.vertices(), p.eps, &mut rng);
    let mut dead = vec![false; n];
    let mut fwd_tags = TagTable::new(n, p.tag_cap);
    let mut bwd_tags = TagTable::new(n, p.tag_cap);
    let mut out = SubOutput {
        shortcuts: Vec::new(),
        trees: Vec::new(),
        children: Vec::new(),
        work: 0,
        stats: ParScStats {
            subproblems: 1,
            ..Default::default()
        },
    };

    for group in &sched.groups {
        let layer = draw_distance(&mut rng, p, h, group.index)
            .expect("parameters validated for this graph size");
        let core = layer.saturating_mul(p.d);
        let fringe = layer.saturating_add(1).saturating_mul(p.d);
        let pivots: Vec<Pivot> = sched
            .group(group)
            .iter()
            .enumerate()
            .map(|(j, &v)| Pivot {
                id: (group.start + j) as u32,
                vertex: v,
                alive: !dead[v as usize],
            })
            .collect();
        if pivots.iter().all(|p| !p.alive) {
            continue;
        }
        let blocked = |v: VertexId| dead[v as usize];
        let fwd = tagged_multi_search(g, &pivots, core, fringe, Direction::Forward, &mut fwd_tags, &blocked, opts.schedule)
            .map_err(search_abort)?;
        let bwd = tagged_multi_search(g, &pivots, core, fringe, Direction::Backward, &mut bwd_tags, &blocked, opts.schedule)
            .map_err(search_abort)?;
        debug_assert_eq!(fwd.ids, bwd.ids);
        out.work += fwd.work + bwd.work;
        out.stats.max_search_dist = out.stats.max_search_dist.max(fringe);
        out.stats.max_tag_len = out.stats.max_tag_len.max(fwd_tags.max_len()).max(bwd_tags.max_len());

        for r in fwd.raw.iter().chain(&bwd.raw) {
            let x = s.to_global(r.root);
            let tree = opts.record_trees.then(|| {
                out.trees.push(BfsTreeRecord::from_visits(
                    r.direction,
                    opts.round,
                    r.visits(),
                    |v| s.to_global(v),
                ));
                out.trees.len() as u32 - 1
            });
            let prov = Provenance {
                run: 0,
                round: opts.round,
                pivot: x,
                direction: r.direction,
                tree,
            };
            for v in r.visits().iter().skip(1) {
                let v = s.to_global(v.vertex);
                let arc = match r.direction {
                    Direction::Forward => (x, v),
                    Direction::Backward => (v, x),
                };
                out.shortcuts.push((arc, prov));
            }
            out.stats.searches += 1;
            out.stats.arcs_scanned += r.arcs_scanned;
            out.stats.core_visits += r.core().len() as u64;
            out.stats.fringe_visits += r.fringe().len() as u64;
            out.stats.max_depth_reached = out.stats.max_depth_reached.max(r.max_depth());
        }

        let min_tag = |v: VertexId| match (fwd_tags.min_tag(v), bwd_tags.min_tag(v)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let succ = resolve(&fwd.ids, &fwd.raw, min_tag);
        let pred = resolve(&bwd.ids, &bwd.raw, min_tag);
        if h > 1 {
            for (sj, pj) in succ.iter().zip(&pred) {
                let v_s = difference(&sj.core, &pj.core);
                let v_p = difference(&pj.core, &sj.core);
                for keep in [union(&v_s, &sj.fringe), union(&v_p, &pj.fringe)] {
                    if !keep.is_empty() {
                        let (child, map) = g.induced_subgraph(&keep);
                        out.children.push((child, map.kept().to_vec()));
                    }
                }
            }
        }
        for r in fwd.raw.iter().chain(&bwd.raw) {
            for v in r.core() {
                dead[v.vertex as usize] = true;
            }
        }
        fwd_tags.clear();
        bwd_tags.clear();
    }
    Ok(out)
}
