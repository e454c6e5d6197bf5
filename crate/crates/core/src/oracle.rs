//! Brute-force ground truth. Nothing here shares code with the algorithms
//! it checks: closures and hop distances come from plain queue BFS.

use std::collections::VecDeque;

use rand::Rng;
use thiserror::Error;

use crate::graph::{Arc, Digraph, VertexId};
use crate::tree::DirectedTree;

/// Largest graph the quadratic-memory oracles accept.
pub const ORACLE_MAX_N: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {0} vertices; the closure oracle is limited to {ORACLE_MAX_N}")]
    TooLarge(usize),
}

/// Reflexive reachability matrix, one bit row per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl ClosureMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn reaches(&self, u: VertexId, v: VertexId) -> bool {
        let (u, v) = (u as usize, v as usize);
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
    }

    /// Number of related ordered pairs, diagonal included.
    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

fn reach_from(g: &Digraph, s: VertexId) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.n()];
    dist[s as usize] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize].unwrap();
        for &v in g.out_neighbors(u) {
            if dist[v as usize].is_none() {
                dist[v as usize] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Sorted forward reach of `s` (includes `s`).
pub fn reach_set(g: &Digraph, s: VertexId) -> Vec<VertexId> {
    reach_from(g, s)
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_some())
        .map(|(v, _)| v as VertexId)
        .collect()
}

pub fn transitive_closure(g: &Digraph) -> Result<ClosureMatrix, OracleError> {
    let n = g.n();
    if n > ORACLE_MAX_N {
        return Err(OracleError::TooLarge(n));
    }
    let words = n.div_ceil(64);
    let mut m = ClosureMatrix {
        n,
        words,
        bits: vec![0; n * words],
    };
    for u in 0..n {
        for (v, d) in reach_from(g, u as VertexId).into_iter().enumerate() {
            if d.is_some() {
                m.set(u, v);
            }
        }
    }
    Ok(m)
}

pub fn hop_distance(g: &Digraph, u: VertexId, v: VertexId) -> Option<u32> {
    reach_from(g, u)[v as usize]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    InvalidShortcut(Arc),
    ClosureChanged,
    ArcNotInGraph(Arc),
    WrongRoot { expected: VertexId, found: VertexId },
    RootHasParent(VertexId),
    Cycle(VertexId),
    NotSpanning(VertexId),
    Unreachable(VertexId),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::InvalidShortcut((u, v)) => write!(f, "shortcut ({u}, {v}): {v} is not reachable from {u}"),
            Violation::ClosureChanged => write!(f, "closure of G ∪ S differs from closure of G"),
            Violation::ArcNotInGraph((u, v)) => write!(f, "tree arc ({u}, {v}) is not in the graph"),
            Violation::WrongRoot { expected, found } => write!(f, "tree rooted at {found}, expected {expected}"),
            Violation::RootHasParent(r) => write!(f, "root {r} has an incoming tree arc"),
            Violation::Cycle(v) => write!(f, "vertex {v} lies on a parent cycle"),
            Violation::NotSpanning(v) => write!(f, "not spanning: reachable vertex {v} missing"),
            Violation::Unreachable(v) => write!(f, "tree vertex {v} is not reachable from the root"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every shortcut must join a related pair, and adding them must leave the
/// closure unchanged.
pub fn verify_shortcuts(g: &Digraph, shortcuts: &[Arc]) -> Result<VerifyReport, OracleError> {
    let closure = transitive_closure(g)?;
    let mut report = VerifyReport::default();
    for &(u, v) in shortcuts {
        if u as usize >= g.n() || v as usize >= g.n() || !closure.reaches(u, v) {
            report.violations.push(Violation::InvalidShortcut((u, v)));
        }
    }
    if report.ok() {
        let gs = g
            .union_with_shortcuts(shortcuts)
            .expect("endpoints checked above");
        if transitive_closure(&gs)? != closure {
            report.violations.push(Violation::ClosureChanged);
        }
    }
    Ok(report)
}

/// Which pairs [`estimate_diameter`] measures.
#[derive(Clone, Debug)]
pub enum PairSpec {
    Explicit(Vec<(VertexId, VertexId)>),
    /// `count` uniformly random ordered pairs.
    Sampled { count: usize },
}

/// Largest finite hop distance over the chosen pairs; `None` when no pair
/// was related.
pub fn estimate_diameter(g: &Digraph, pairs: &PairSpec, rng: &mut impl Rng) -> Option<u32> {
    let pairs: Vec<(VertexId, VertexId)> = match pairs {
        PairSpec::Explicit(p) => p.clone(),
        PairSpec::Sampled { count } if g.n() > 0 => (0..*count)
            .map(|_| {
                let n = g.n() as VertexId;
                (rng.gen_range(0..n), rng.gen_range(0..n))
            })
            .collect(),
        PairSpec::Sampled { .. } => Vec::new(),
    };
    let mut by_source: Vec<(VertexId, VertexId)> = pairs;
    by_source.sort_unstable();
    let mut best = None;
    let mut i = 0;
    while i < by_source.len() {
        let s = by_source[i].0;
        let dist = reach_from(g, s);
        while i < by_source.len() && by_source[i].0 == s {
            if let Some(d) = dist[by_source[i].1 as usize] {
                best = best.max(Some(d));
            }
            i += 1;
        }
    }
    best
}

/// Checks that `t` is a directed spanning tree of the reach of `s` in `g`.
pub fn verify_tree(g: &Digraph, t: &DirectedTree, s: VertexId) -> VerifyReport {
    let mut report = VerifyReport::default();
    let v = &mut report.violations;
    if t.n() != g.n() || s as usize >= g.n() {
        v.push(Violation::WrongRoot { expected: s, found: t.root() });
        return report;
    }
    if t.root() != s {
        v.push(Violation::WrongRoot { expected: s, found: t.root() });
    }
    if t.parent(t.root()).is_some() {
        v.push(Violation::RootHasParent(t.root()));
    }
    for (p, c) in t.arcs() {
        if !g.has_arc(p, c) {
            v.push(Violation::ArcNotInGraph((p, c)));
        }
    }
    // Every tree vertex must climb to the root within n parent steps.
    let n = g.n();
    let mut rooted = vec![false; n];
    rooted[t.root() as usize] = true;
    for start in t.vertices() {
        let mut walk = Vec::new();
        let mut x = start;
        while !rooted[x as usize] && walk.len() <= n {
            walk.push(x);
            match t.parent(x) {
                Some(p) => x = p,
                None => break,
            }
        }
        if rooted[x as usize] {
            walk.iter().for_each(|&w| rooted[w as usize] = true);
        } else {
            v.push(Violation::Cycle(start));
        }
    }
    let reach = reach_from(g, s);
    for u in 0..n as VertexId {
        let in_tree = t.contains(u);
        let reachable = reach[u as usize].is_some();
        if reachable && !in_tree {
            v.push(Violation::NotSpanning(u));
        } else if in_tree && !reachable {
            v.push(Violation::Unreachable(u));
        }
    }
    report
}
