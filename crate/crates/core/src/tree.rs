//! Directed spanning trees of the original graph.
//!
//! A BFS tree of `s` in the final shortcutted graph `G_k` is walked back one
//! round at a time. At round `i` every vertex gets a label
//! `(high, low) = (depth in T_i, 0)`; the saved search trees of round `i`
//! contribute relabeled copies of their arcs (forward trees rooted at a tree
//! vertex `u` get `(high(u), depth)`, backward-tree paths standing in for a
//! used shortcut `(u, v)` get `(high(u), distance from u)`); every vertex
//! then keeps its incoming candidate with the smallest tail label. Every
//! kept arc climbs in label order, so the result is acyclic and uses only
//! arcs of `G_{i-1}`.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{Arc, Digraph, Direction, VertexId};
use crate::search::Visit;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree arc ({0}, {1}) is neither in the previous graph nor explained by a saved search tree")]
    MissingRecord(VertexId, VertexId),
    #[error("saved search tree reaches vertex {0}, which is not in the spanning tree")]
    NotSpanning(VertexId),
    #[error("vertex {0} received no incoming arc while splicing")]
    Orphan(VertexId),
    #[error("source {0} is out of range")]
    SourceOutOfRange(VertexId),
    #[error("history has no graph snapshots")]
    EmptyHistory,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeEntry {
    pub vertex: VertexId,
    pub parent: Option<VertexId>,
    pub depth: u32,
}

/// A saved search tree. Forward trees hold arcs `parent → child`, backward
/// trees hold arcs `child → parent`; both are arcs of the searched graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsTreeRecord {
    pub root: VertexId,
    pub direction: Direction,
    /// Splice level: the diameter-reduction round that searched `G_{round-1}`.
    pub round: u32,
    entries: Vec<TreeEntry>,
}

impl BfsTreeRecord {
    /// Builds a record from search visits, mapping vertex ids through `map`.
    pub fn from_visits<'a>(
        direction: Direction,
        round: u32,
        visits: impl IntoIterator<Item = &'a Visit>,
        map: impl Fn(VertexId) -> VertexId,
    ) -> Self {
        let mut entries: Vec<TreeEntry> = visits
            .into_iter()
            .map(|v| TreeEntry {
                vertex: map(v.vertex),
                parent: v.parent.map(&map),
                depth: v.depth,
            })
            .collect();
        entries.sort_unstable_by_key(|e| e.vertex);
        let root = entries
            .iter()
            .find(|e| e.parent.is_none())
            .map(|e| e.vertex)
            .expect("search visits include their root");
        Self {
            root,
            direction,
            round,
            entries,
        }
    }

    pub fn entries(&self) -> &[TreeEntry] {
        &self.entries
    }

    pub fn get(&self, v: VertexId) -> Option<&TreeEntry> {
        self.entries
            .binary_search_by_key(&v, |e| e.vertex)
            .ok()
            .map(|i| &self.entries[i])
    }

    /// Tree arcs oriented as graph arcs.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.entries.iter().filter_map(move |e| {
            e.parent.map(|p| match self.direction {
                Direction::Forward => (p, e.vertex),
                Direction::Backward => (e.vertex, p),
            })
        })
    }
}

/// A tree rooted at `root` whose arcs point away from the root. A vertex is
/// in the tree iff it is the root or has a parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedTree {
    root: VertexId,
    parent: Vec<Option<VertexId>>,
}

impl DirectedTree {
    pub fn new(n: usize, root: VertexId) -> Self {
        Self {
            root,
            parent: vec![None; n],
        }
    }

    /// Tree from explicit arcs; later arcs into the same head overwrite
    /// earlier ones. No validation: see [`crate::oracle::verify_tree`].
    pub fn from_arcs(n: usize, root: VertexId, arcs: &[Arc]) -> Self {
        let mut t = Self::new(n, root);
        for &(u, v) in arcs {
            t.parent[v as usize] = Some(u);
        }
        t
    }

    /// First-discoverer BFS tree of `s` in `g`.
    pub fn bfs(g: &Digraph, s: VertexId) -> Self {
        let mut t = Self::new(g.n(), s);
        let mut seen = vec![false; g.n()];
        seen[s as usize] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in g.out_neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    t.parent[v as usize] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        t
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v as usize]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v == self.root || self.parent[v as usize].is_some()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n() as VertexId).filter(move |&v| self.contains(v))
    }

    /// Arcs `(parent, child)` ordered by child.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v as VertexId)))
    }

    pub fn len(&self) -> usize {
        self.vertices().count()
    }

    pub fn is_empty(&self) -> bool {
        self.n() == 0
    }
}

/// `high(v)` = depth of `v` in `t`, by BFS from the root over child lists
/// (`low` is 0 for every tree vertex). Vertices outside the tree get `None`.
/// Parent cycles that never reach the root stay unlabeled.
pub fn label_tree(t: &DirectedTree) -> Vec<Option<u32>> {
    let n = t.n();
    let mut high = vec![None; n];
    if (t.root as usize) >= n {
        return high;
    }
    let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for (p, v) in t.arcs() {
        if v != t.root {
            children[p as usize].push(v);
        }
    }
    high[t.root as usize] = Some(0);
    let mut level = vec![t.root];
    let mut depth = 0;
    while !level.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for u in level {
            for &v in &children[u as usize] {
                high[v as usize] = Some(depth);
                next.push(v);
            }
        }
        level = next;
    }
    high
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    head: VertexId,
    high: u32,
    low: u32,
    /// 0 for arcs taken from `T_i`, record index + 1 otherwise.
    source: u32,
    tail: VertexId,
}

/// Rewrites `t_i` (a spanning tree in `G_i`) into a spanning tree of the same
/// vertex set using only arcs of `g_prev = G_{i-1}`, given the search trees
/// recorded while building `G_i` from `G_{i-1}`.
pub fn splice_level(
    t_i: &DirectedTree,
    records: &[&BfsTreeRecord],
    g_prev: &Digraph,
) -> Result<DirectedTree, TreeError> {
    let n = t_i.n();
    let high = label_tree(t_i);
    let mut by_root: HashMap<(VertexId, Direction), Vec<usize>> = HashMap::new();
    for (idx, r) in records.iter().enumerate() {
        by_root.entry((r.root, r.direction)).or_default().push(idx);
    }
    let rooted = |v: VertexId, dir: Direction| by_root.get(&(v, dir)).map_or(&[][..], |x| &x[..]);

    // Smallest label over all copies of each vertex, for the order check.
    let mut final_label: Vec<(u32, u32)> = vec![(u32::MAX, u32::MAX); n];
    let mut note = |v: VertexId, label: (u32, u32)| {
        let slot = &mut final_label[v as usize];
        *slot = (*slot).min(label);
    };

    let mut cands = Vec::new();
    for v in t_i.vertices() {
        note(v, (high[v as usize].unwrap_or(u32::MAX), 0));
    }
    for (u, v) in t_i.arcs() {
        let hu = high[u as usize].unwrap_or(u32::MAX);
        if g_prev.has_arc(u, v) {
            cands.push(Candidate { head: v, high: hu, low: 0, source: 0, tail: u });
            continue;
        }
        let mut explained = rooted(u, Direction::Forward)
            .iter()
            .any(|&ri| records[ri].get(v).is_some());
        for &ri in rooted(v, Direction::Backward) {
            let rec = records[ri];
            if rec.get(u).is_none() {
                continue;
            }
            explained = true;
            let (mut w, mut dist) = (u, 0u32);
            note(w, (hu, 0));
            while w != v {
                let p = rec
                    .get(w)
                    .and_then(|e| e.parent)
                    .expect("backward record path leads to its root");
                cands.push(Candidate { head: p, high: hu, low: dist, source: ri as u32 + 1, tail: w });
                w = p;
                dist += 1;
                note(w, (hu, dist));
            }
        }
        if !explained {
            return Err(TreeError::MissingRecord(u, v));
        }
    }
    for u in t_i.vertices() {
        let hu = high[u as usize].unwrap_or(u32::MAX);
        for &ri in rooted(u, Direction::Forward) {
            for e in records[ri].entries() {
                note(e.vertex, (hu, e.depth));
                if let Some(p) = e.parent {
                    cands.push(Candidate {
                        head: e.vertex,
                        high: hu,
                        low: e.depth - 1,
                        source: ri as u32 + 1,
                        tail: p,
                    });
                }
            }
        }
    }

    cands.sort_unstable();
    let mut out = DirectedTree::new(n, t_i.root);
    let mut last_head = None;
    for c in cands {
        if last_head == Some(c.head) || c.head == t_i.root {
            continue;
        }
        last_head = Some(c.head);
        if !t_i.contains(c.head) {
            return Err(TreeError::NotSpanning(c.head));
        }
        debug_assert!(
            (c.high, c.low) < final_label[c.head as usize],
            "spliced arc ({}, {}) does not climb in label order",
            c.tail,
            c.head
        );
        out.parent[c.head as usize] = Some(c.tail);
    }
    if let Some(v) = t_i.vertices().find(|&v| !out.contains(v)) {
        return Err(TreeError::Orphan(v));
    }
    Ok(out)
}

/// Graph snapshots `G_0..G_k` and the search trees recorded while building
/// them; a record with `round == i` searched `G_{i-1}`.
#[derive(Clone, Debug, Default)]
pub struct History {
    pub snapshots: Vec<Digraph>,
    pub records: Vec<BfsTreeRecord>,
}

impl History {
    pub fn rounds(&self) -> usize {
        self.snapshots.len().saturating_sub(1)
    }
}

/// Spanning tree of the forward reach of `s` in `G_0` using only `G_0` arcs.
pub fn extract_spanning_tree(history: &History, s: VertexId) -> Result<DirectedTree, TreeError> {
    let last = history.snapshots.last().ok_or(TreeError::EmptyHistory)?;
    if s as usize >= last.n() {
        return Err(TreeError::SourceOutOfRange(s));
    }
    let mut t = DirectedTree::bfs(last, s);
    for i in (1..=history.rounds()).rev() {
        let recs: Vec<&BfsTreeRecord> = history
            .records
            .iter()
            .filter(|r| r.round as usize == i)
            .collect();
        t = splice_level(&t, &recs, &history.snapshots[i - 1])?;
    }
    Ok(t)
}
