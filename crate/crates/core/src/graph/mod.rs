//! Immutable digraphs stored as paired forward/reverse CSR adjacency.
//!
//! Vertices are `0..n`. Self-loops are dropped on construction; parallel
//! arcs are kept. Each adjacency segment is sorted by neighbor id, so
//! iteration order over arcs is canonical for a given arc multiset.

mod generate;
mod io;

pub use generate::{generate, GraphKind};
pub use io::{read_edge_list, write_arcs, write_edge_list, ParseError};

use thiserror::Error;

/// Vertex index, 0-based and dense.
pub type VertexId = u32;

/// A directed arc `(tail, head)`.
pub type Arc = (VertexId, VertexId);

/// Search direction: along arcs (successors) or against them (predecessors).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("arc ({tail}, {head}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { tail: u64, head: u64, n: usize },
    #[error("vertex count {0} exceeds the 32-bit id space")]
    TooManyVertices(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    fwd_offsets: Vec<usize>,
    fwd_targets: Vec<VertexId>,
    rev_offsets: Vec<usize>,
    rev_sources: Vec<VertexId>,
}

impl Digraph {
    /// Builds a graph on `n` vertices. Self-loops are silently dropped and
    /// duplicate arcs are retained.
    pub fn new(n: usize, arcs: &[Arc]) -> Result<Self, GraphError> {
        if n > VertexId::MAX as usize {
            return Err(GraphError::TooManyVertices(n));
        }
        for &(u, v) in arcs {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::EndpointOutOfRange {
                    tail: u as u64,
                    head: v as u64,
                    n,
                });
            }
        }
        Ok(Self::from_checked_arcs(n, arcs.iter().copied()))
    }

    /// Graph with `n` vertices and no arcs.
    pub fn empty(n: usize) -> Self {
        Self::from_checked_arcs(n, std::iter::empty())
    }

    fn from_checked_arcs(n: usize, arcs: impl Iterator<Item = Arc> + Clone) -> Self {
        let (fwd_offsets, fwd_targets) = csr(n, arcs.clone().filter(|&(u, v)| u != v));
        let (rev_offsets, rev_sources) =
            csr(n, arcs.filter(|&(u, v)| u != v).map(|(u, v)| (v, u)));
        let g = Self {
            n,
            fwd_offsets,
            fwd_targets,
            rev_offsets,
            rev_sources,
        };
        debug_assert_eq!(g.fwd_targets.len(), g.rev_sources.len());
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.fwd_targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        0..self.n as VertexId
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.fwd_targets[self.fwd_offsets[v]..self.fwd_offsets[v + 1]]
    }

    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.rev_sources[self.rev_offsets[v]..self.rev_offsets[v + 1]]
    }

    pub fn neighbors(&self, v: VertexId, dir: Direction) -> &[VertexId] {
        match dir {
            Direction::Forward => self.out_neighbors(v),
            Direction::Backward => self.in_neighbors(v),
        }
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_neighbors(v).len()
    }

    /// All arcs in forward-adjacency order (by tail, then head).
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.vertices()
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    /// Arcs read off the reverse adjacency, reported as `(tail, head)`.
    pub fn reverse_arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.vertices()
            .flat_map(move |v| self.in_neighbors(v).iter().map(move |&u| (u, v)))
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        if u as usize >= self.n || v as usize >= self.n {
            return false;
        }
        let out = self.out_neighbors(u);
        let inc = self.in_neighbors(v);
        if out.len() <= inc.len() {
            out.binary_search(&v).is_ok()
        } else {
            inc.binary_search(&u).is_ok()
        }
    }

    /// The subgraph induced by `keep`, relabeled to `0..|keep|` in increasing
    /// original-id order. Out-of-range ids in `keep` are ignored.
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> (Digraph, SubgraphMap) {
        let map = SubgraphMap::new(keep.iter().copied().filter(|&v| (v as usize) < self.n));
        let mut arcs = Vec::new();
        for (local_u, &u) in map.kept.iter().enumerate() {
            for &v in self.out_neighbors(u) {
                if let Some(local_v) = map.to_local(v) {
                    arcs.push((local_u as VertexId, local_v));
                }
            }
        }
        let sub = Self::from_checked_arcs(map.len(), arcs.into_iter());
        (sub, map)
    }

    /// `G_S = (V, E ∪ S)`. Shortcuts that are self-loops, duplicates of
    /// each other, or duplicates of existing arcs are not added.
    pub fn union_with_shortcuts(&self, shortcuts: &[Arc]) -> Result<Digraph, GraphError> {
        for &(u, v) in shortcuts {
            if u as usize >= self.n || v as usize >= self.n {
                return Err(GraphError::EndpointOutOfRange {
                    tail: u as u64,
                    head: v as u64,
                    n: self.n,
                });
            }
        }
        let mut extra: Vec<Arc> = shortcuts
            .iter()
            .copied()
            .filter(|&(u, v)| u != v && !self.has_arc(u, v))
            .collect();
        extra.sort_unstable();
        extra.dedup();
        let all: Vec<Arc> = self.arcs().chain(extra).collect();
        Ok(Self::from_checked_arcs(self.n, all.into_iter()))
    }
}

fn csr(n: usize, arcs: impl Iterator<Item = Arc> + Clone) -> (Vec<usize>, Vec<VertexId>) {
    let mut offsets = vec![0usize; n + 1];
    for (u, _) in arcs.clone() {
        offsets[u as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut cursor = offsets.clone();
    let mut targets = vec![0 as VertexId; offsets[n]];
    for (u, v) in arcs {
        let slot = &mut cursor[u as usize];
        targets[*slot] = v;
        *slot += 1;
    }
    for i in 0..n {
        targets[offsets[i]..offsets[i + 1]].sort_unstable();
    }
    (offsets, targets)
}

/// Correspondence between an induced subgraph's local ids and the ids of
/// the graph it was cut from.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SubgraphMap {
    kept: Vec<VertexId>,
}

impl SubgraphMap {
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut kept: Vec<VertexId> = vertices.into_iter().collect();
        kept.sort_unstable();
        kept.dedup();
        Self { kept }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            kept: (0..n as VertexId).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.kept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kept.is_empty()
    }

    /// Original ids, strictly increasing; `kept()[local]` is the original id.
    pub fn kept(&self) -> &[VertexId] {
        &self.kept
    }

    pub fn to_original(&self, local: VertexId) -> VertexId {
        self.kept[local as usize]
    }

    pub fn to_local(&self, original: VertexId) -> Option<VertexId> {
        self.kept
            .binary_search(&original)
            .ok()
            .map(|i| i as VertexId)
    }
}
