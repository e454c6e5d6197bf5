//! Hop-limited searches.
//!
//! Single-source searches are ordinary queue BFS with a hop cutoff. The
//! multi-source search runs every pivot of one iteration as a single
//! level-synchronous BFS over `(vertex, pivot)` frontier entries: each
//! level reads shared state, writes candidates into its own output slots,
//! then a sort/dedup barrier commits the new tags. The committed result is
//! a function of the frontier *set*, so any task order gives the same
//! output.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Digraph, Direction, VertexId};
use crate::rng::{derive_seed, seeded};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search source {0} is blocked")]
    BlockedSource(VertexId),
    #[error("search source {0} is out of range")]
    SourceOutOfRange(VertexId),
    #[error("fringe distance {fringe} must exceed core distance {core}")]
    InvalidDistances { core: u64, fringe: u64 },
    #[error("pivot ids must be strictly increasing")]
    UnorderedPivots,
    #[error("vertex {vertex} was reached by more than {cap} pivots")]
    TagOverflow { vertex: VertexId, cap: usize },
}

/// How the per-arc tasks of one BFS level are executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Frontier order, one thread. The reference schedule.
    #[default]
    Sequential,
    /// Frontier shuffled before every level with a stream derived from the
    /// given seed.
    Permuted(u64),
    /// Rayon work-stealing over frontier entries.
    Parallel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Visit {
    pub vertex: VertexId,
    pub parent: Option<VertexId>,
    pub depth: u32,
}

/// Vertices found by one search, in nondecreasing depth order. The first
/// `core_len` visits are the core; the rest are the fringe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub root: VertexId,
    pub direction: Direction,
    visits: Vec<Visit>,
    core_len: usize,
    pub arcs_scanned: u64,
}

impl SearchResult {
    pub fn visits(&self) -> &[Visit] {
        &self.visits
    }

    pub fn core(&self) -> &[Visit] {
        &self.visits[..self.core_len]
    }

    pub fn fringe(&self) -> &[Visit] {
        &self.visits[self.core_len..]
    }

    pub fn core_vertices(&self) -> Vec<VertexId> {
        sorted_vertices(self.core())
    }

    pub fn fringe_vertices(&self) -> Vec<VertexId> {
        sorted_vertices(self.fringe())
    }

    pub fn depth_of(&self, v: VertexId) -> Option<u32> {
        self.visits.iter().find(|x| x.vertex == v).map(|x| x.depth)
    }

    pub fn max_depth(&self) -> u32 {
        self.visits.last().map_or(0, |v| v.depth)
    }
}

fn sorted_vertices(visits: &[Visit]) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = visits.iter().map(|v| v.vertex).collect();
    out.sort_unstable();
    out
}

/// Epoch-stamped visited marks, reusable across searches on one graph
/// without an O(n) reset.
#[derive(Clone, Debug)]
pub struct Scratch {
    mark: Vec<u32>,
    epoch: u32,
}

impl Scratch {
    pub fn new(n: usize) -> Self {
        Self {
            mark: vec![0; n],
            epoch: 0,
        }
    }

    fn next_epoch(&mut self) -> u32 {
        if self.epoch == u32::MAX {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.epoch
    }
}

/// Vertices within `dist` hops of `x` (or reaching `x` within `dist` hops,
/// for `Backward`), never entering a blocked vertex.
pub fn limited_search(
    g: &Digraph,
    x: VertexId,
    dist: u64,
    dir: Direction,
    blocked: impl Fn(VertexId) -> bool,
) -> Result<SearchResult, SearchError> {
    check_source(g, x, &blocked)?;
    Ok(bfs(g, x, dist, dist, dir, &blocked, &mut Scratch::new(g.n())))
}

/// One BFS to `fringe_dist` hops; visits at depth `<= core_dist` form the
/// core and the rest the fringe.
pub fn core_fringe_search(
    g: &Digraph,
    x: VertexId,
    core_dist: u64,
    fringe_dist: u64,
    dir: Direction,
    blocked: impl Fn(VertexId) -> bool,
) -> Result<SearchResult, SearchError> {
    if fringe_dist <= core_dist {
        return Err(SearchError::InvalidDistances {
            core: core_dist,
            fringe: fringe_dist,
        });
    }
    check_source(g, x, &blocked)?;
    Ok(bfs(g, x, core_dist, fringe_dist, dir, &blocked, &mut Scratch::new(g.n())))
}

fn check_source(
    g: &Digraph,
    x: VertexId,
    blocked: &impl Fn(VertexId) -> bool,
) -> Result<(), SearchError> {
    if x as usize >= g.n() {
        return Err(SearchError::SourceOutOfRange(x));
    }
    if blocked(x) {
        return Err(SearchError::BlockedSource(x));
    }
    Ok(())
}

/// Unchecked BFS used by the library's own drivers.
pub(crate) fn bfs(
    g: &Digraph,
    x: VertexId,
    core_dist: u64,
    fringe_dist: u64,
    dir: Direction,
    blocked: &impl Fn(VertexId) -> bool,
    scratch: &mut Scratch,
) -> SearchResult {
    let epoch = scratch.next_epoch();
    scratch.mark[x as usize] = epoch;
    let mut visits = vec![Visit {
        vertex: x,
        parent: None,
        depth: 0,
    }];
    let mut arcs_scanned = 0u64;
    let mut head = 0;
    while head < visits.len() {
        let Visit { vertex: u, depth, .. } = visits[head];
        head += 1;
        if depth as u64 >= fringe_dist {
            continue;
        }
        let nbrs = g.neighbors(u, dir);
        arcs_scanned += nbrs.len() as u64;
        for &v in nbrs {
            if scratch.mark[v as usize] != epoch && !blocked(v) {
                scratch.mark[v as usize] = epoch;
                visits.push(Visit {
                    vertex: v,
                    parent: Some(u),
                    depth: depth + 1,
                });
            }
        }
    }
    let core_len = visits.partition_point(|v| v.depth as u64 <= core_dist);
    SearchResult {
        root: x,
        direction: dir,
        visits,
        core_len,
        arcs_scanned,
    }
}

/// Per-vertex sorted list of pivot ids, bounded by `cap`. Clearing costs
/// time proportional to the vertices touched since the last clear.
#[derive(Clone, Debug)]
pub struct TagTable {
    lists: Vec<Vec<u32>>,
    touched: Vec<VertexId>,
    cap: usize,
    max_len: usize,
}

impl TagTable {
    pub fn new(n: usize, cap: usize) -> Self {
        Self {
            lists: vec![Vec::new(); n],
            touched: Vec::new(),
            cap,
            max_len: 0,
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn tags(&self, v: VertexId) -> &[u32] {
        &self.lists[v as usize]
    }

    pub fn contains(&self, v: VertexId, id: u32) -> bool {
        self.lists[v as usize].binary_search(&id).is_ok()
    }

    pub fn min_tag(&self, v: VertexId) -> Option<u32> {
        self.lists[v as usize].first().copied()
    }

    pub fn insert(&mut self, v: VertexId, id: u32) -> Result<(), SearchError> {
        let list = &mut self.lists[v as usize];
        if let Err(pos) = list.binary_search(&id) {
            if list.len() == self.cap {
                return Err(SearchError::TagOverflow {
                    vertex: v,
                    cap: self.cap,
                });
            }
            if list.is_empty() {
                self.touched.push(v);
            }
            list.insert(pos, id);
            self.max_len = self.max_len.max(list.len());
        }
        Ok(())
    }

    pub fn is_clear(&self) -> bool {
        self.touched.is_empty()
    }

    pub fn clear(&mut self) {
        for v in self.touched.drain(..) {
            self.lists[v as usize].clear();
        }
    }

    /// Longest list ever held since construction.
    pub fn max_len(&self) -> usize {
        self.max_len
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrontierEntry {
    pub vertex: VertexId,
    pub pivot: u32,
}

/// Sort by `(vertex, pivot)` and drop exact duplicates.
pub fn dedup_frontier(mut entries: Vec<FrontierEntry>) -> Vec<FrontierEntry> {
    entries.sort_unstable();
    entries.dedup();
    entries
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub id: u32,
    pub vertex: VertexId,
    pub alive: bool,
}

/// A pivot's core and fringe after first-core-wins resolution.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Resolved {
    pub pivot: u32,
    pub core: Vec<VertexId>,
    pub fringe: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSearch {
    /// Pivot ids of the searches that ran (live pivots, in order).
    pub ids: Vec<u32>,
    /// One raw result per searched pivot, parallel to `ids`.
    pub raw: Vec<SearchResult>,
    /// Raw sets with vertices carrying a smaller tag removed.
    pub resolved: Vec<Resolved>,
    /// Frontier entries processed plus arcs scanned.
    pub work: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Discovery {
    vertex: VertexId,
    slot: u32,
    parent: VertexId,
}

/// All live pivots' core/fringe searches of one iteration, in one direction.
///
/// `tags` must be clear on entry. On return it holds, for every vertex, the
/// ids of the pivots whose raw core contains it.
#[allow(clippy::too_many_arguments)]
pub fn tagged_multi_search<B>(
    g: &Digraph,
    pivots: &[Pivot],
    core_dist: u64,
    fringe_dist: u64,
    dir: Direction,
    tags: &mut TagTable,
    blocked: &B,
    schedule: Schedule,
) -> Result<MultiSearch, SearchError>
where
    B: Fn(VertexId) -> bool + Sync,
{
    if fringe_dist <= core_dist {
        return Err(SearchError::InvalidDistances {
            core: core_dist,
            fringe: fringe_dist,
        });
    }
    if pivots.windows(2).any(|w| w[0].id >= w[1].id) {
        return Err(SearchError::UnorderedPivots);
    }
    debug_assert!(tags.is_clear());

    let live: Vec<&Pivot> = pivots
        .iter()
        .filter(|p| p.alive && !blocked(p.vertex))
        .collect();
    let ids: Vec<u32> = live.iter().map(|p| p.id).collect();
    let mut visits: Vec<Vec<Visit>> = vec![Vec::new(); live.len()];
    let mut scanned = vec![0u64; live.len()];
    let mut frontier: Vec<Discovery> = Vec::with_capacity(live.len());
    for (slot, p) in live.iter().enumerate() {
        tags.insert(p.vertex, p.id)?;
        visits[slot].push(Visit {
            vertex: p.vertex,
            parent: None,
            depth: 0,
        });
        frontier.push(Discovery {
            vertex: p.vertex,
            slot: slot as u32,
            parent: p.vertex,
        });
    }
    let mut work = frontier.len() as u64;

    let mut level: u64 = 0;
    let mut fringe_tags: Option<TagTable> = None;
    let mut core_len = Vec::new();
    loop {
        if level == core_dist {
            core_len = visits.iter().map(Vec::len).collect();
        }
        if level == fringe_dist || frontier.is_empty() {
            break;
        }
        let in_core = level < core_dist;
        if !in_core && fringe_tags.is_none() {
            fringe_tags = Some(TagTable::new(g.n(), tags.cap()));
        }
        let seen = |v: VertexId, id: u32| {
            blocked(v)
                || tags.contains(v, id)
                || fringe_tags.as_ref().is_some_and(|t| t.contains(v, id))
        };
        for d in &frontier {
            scanned[d.slot as usize] += g.neighbors(d.vertex, dir).len() as u64;
        }
        let mut next = expand(g, &frontier, &ids, dir, &seen, schedule, level);
        next.sort_unstable();
        next.dedup_by_key(|d| (d.vertex, d.slot));
        level += 1;
        let table = match fringe_tags.as_mut() {
            Some(t) => t,
            None => &mut *tags,
        };
        for d in &next {
            table.insert(d.vertex, ids[d.slot as usize])?;
            visits[d.slot as usize].push(Visit {
                vertex: d.vertex,
                parent: Some(d.parent),
                depth: level as u32,
            });
        }
        work += next.len() as u64;
        frontier = next;
    }
    if core_len.is_empty() {
        core_len = visits.iter().map(Vec::len).collect();
    }
    work += scanned.iter().sum::<u64>();

    let raw: Vec<SearchResult> = live
        .iter()
        .zip(visits)
        .zip(core_len)
        .zip(scanned)
        .map(|(((p, visits), core_len), arcs_scanned)| SearchResult {
            root: p.vertex,
            direction: dir,
            visits,
            core_len,
            arcs_scanned,
        })
        .collect();
    let resolved = resolve(&ids, &raw, |v| tags.min_tag(v));
    Ok(MultiSearch {
        ids,
        raw,
        resolved,
        work,
    })
}

fn expand<S>(
    g: &Digraph,
    frontier: &[Discovery],
    ids: &[u32],
    dir: Direction,
    seen: &S,
    schedule: Schedule,
    level: u64,
) -> Vec<Discovery>
where
    S: Fn(VertexId, u32) -> bool + Sync,
{
    let task = |d: &Discovery| {
        let d = *d;
        let id = ids[d.slot as usize];
        g.neighbors(d.vertex, dir)
            .iter()
            .filter(move |&&v| !seen(v, id))
            .map(move |&v| Discovery {
                vertex: v,
                slot: d.slot,
                parent: d.vertex,
            })
    };
    match schedule {
        Schedule::Sequential => frontier.iter().flat_map(task).collect(),
        Schedule::Permuted(seed) => {
            let mut order: Vec<&Discovery> = frontier.iter().collect();
            order.shuffle(&mut seeded(derive_seed(seed, level)));
            order.into_iter().flat_map(task).collect()
        }
        Schedule::Parallel => frontier.par_iter().flat_map_iter(task).collect(),
    }
}

/// First-core-wins: drop from pivot `j`'s core and fringe every vertex whose
/// smallest tag is below `j`.
pub fn resolve(
    ids: &[u32],
    raw: &[SearchResult],
    min_tag: impl Fn(VertexId) -> Option<u32>,
) -> Vec<Resolved> {
    ids.iter()
        .zip(raw)
        .map(|(&id, r)| {
            let keep = |v: &VertexId| min_tag(*v).is_none_or(|t| t >= id);
            let mut core = r.core_vertices();
            core.retain(keep);
            let mut fringe = r.fringe_vertices();
            fringe.retain(keep);
            Resolved {
                pivot: id,
                core,
                fringe,
            }
        })
        .collect()
}

/// Result of a hop-capped single-source BFS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsLayers {
    pub distance: Vec<Option<u32>>,
    /// Reached vertices in BFS order.
    pub reached: Vec<VertexId>,
    /// True iff `reached` is the full forward reach of the source.
    pub exhausted: bool,
}

pub fn bfs_layers(g: &Digraph, s: VertexId, max_hops: u64) -> Result<BfsLayers, SearchError> {
    if s as usize >= g.n() {
        return Err(SearchError::SourceOutOfRange(s));
    }
    let mut distance = vec![None; g.n()];
    distance[s as usize] = Some(0);
    let mut reached = vec![s];
    let mut start = 0;
    let mut level = 0u64;
    let exhausted = loop {
        let end = reached.len();
        if start == end {
            break true;
        }
        if level == max_hops {
            break reached[start..end].iter().all(|&u| {
                g.out_neighbors(u)
                    .iter()
                    .all(|&v| distance[v as usize].is_some())
            });
        }
        for i in start..end {
            let u = reached[i];
            for &v in g.out_neighbors(u) {
                if distance[v as usize].is_none() {
                    distance[v as usize] = Some(level as u32 + 1);
                    reached.push(v);
                }
            }
        }
        start = end;
        level += 1;
    };
    Ok(BfsLayers {
        distance,
        reached,
        exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};
    use proptest::prelude::*;
    use rand::Rng;

    const NONE: fn(VertexId) -> bool = |_| false;

    fn example() -> Digraph {
        Digraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 2)]).unwrap()
    }

    fn path(n: usize) -> Digraph {
        generate(GraphKind::Path, n, 0).unwrap()
    }

    /// Repeated relaxation to a fixed point, bounded by `dist` rounds.
    fn relaxation_oracle(g: &Digraph, x: VertexId, dist: u64, dir: Direction, dead: &[bool]) -> Vec<Option<u32>> {
        let arcs: Vec<(VertexId, VertexId)> = match dir {
            Direction::Forward => g.arcs().collect(),
            Direction::Backward => g.arcs().map(|(u, v)| (v, u)).collect(),
        };
        let mut d: Vec<Option<u32>> = vec![None; g.n()];
        d[x as usize] = Some(0);
        for _ in 0..dist.min(g.n() as u64) {
            let prev = d.clone();
            for &(u, v) in &arcs {
                if dead[v as usize] {
                    continue;
                }
                if let Some(du) = prev[u as usize] {
                    if d[v as usize].is_none_or(|dv| du + 1 < dv) {
                        d[v as usize] = Some(du + 1);
                    }
                }
            }
        }
        d
    }

    #[test]
    fn limited_search_examples() {
        let g = example();
        let r = limited_search(&g, 0, 0, Direction::Forward, NONE).unwrap();
        assert_eq!(r.core_vertices(), vec![0]);
        let r = limited_search(&g, 0, 2, Direction::Forward, NONE).unwrap();
        assert_eq!(r.core_vertices(), vec![0, 1, 2]);
        let r = limited_search(&g, 3, 3, Direction::Backward, NONE).unwrap();
        assert_eq!(r.core_vertices(), vec![0, 1, 2, 3]);
        assert_eq!(r.depth_of(0), Some(3));
        assert!(r.fringe().is_empty());
    }

    #[test]
    fn blocked_vertices_never_appear() {
        let g = example();
        let r = limited_search(&g, 0, 10, Direction::Forward, |v| v == 2).unwrap();
        assert_eq!(r.core_vertices(), vec![0, 1]);
        assert_eq!(
            limited_search(&g, 2, 1, Direction::Forward, |v| v == 2).unwrap_err(),
            SearchError::BlockedSource(2)
        );
    }

    #[test]
    fn core_fringe_examples() {
        let r = core_fringe_search(&path(4), 0, 1, 3, Direction::Forward, NONE).unwrap();
        assert_eq!(r.core_vertices(), vec![0, 1]);
        assert_eq!(r.fringe_vertices(), vec![2, 3]);

        let r = core_fringe_search(&example(), 2, 1, 2, Direction::Forward, NONE).unwrap();
        assert_eq!(r.core_vertices(), vec![2, 3]);
        assert!(r.fringe_vertices().is_empty());

        assert_eq!(
            core_fringe_search(&path(4), 0, 2, 2, Direction::Forward, NONE).unwrap_err(),
            SearchError::InvalidDistances { core: 2, fringe: 2 }
        );
    }

    #[test]
    fn tagged_search_on_path() {
        let g = path(3);
        let pivots = [
            Pivot { id: 1, vertex: 0, alive: true },
            Pivot { id: 2, vertex: 1, alive: true },
        ];
        let mut tags = TagTable::new(3, 8);
        let ms = tagged_multi_search(&g, &pivots, 2, 3, Direction::Forward, &mut tags, &NONE, Schedule::Sequential)
            .unwrap();
        assert_eq!(ms.raw[0].core_vertices(), vec![0, 1, 2]);
        assert_eq!(ms.raw[1].core_vertices(), vec![1, 2]);
        assert_eq!(ms.resolved[0].core, vec![0, 1, 2]);
        assert!(ms.resolved[1].core.is_empty());
        assert_eq!(tags.tags(2), &[1, 2]);
        assert_eq!(tags.tags(0), &[1]);
    }

    #[test]
    fn tagged_search_disjoint_and_dead() {
        // 0->1->2 and 3->4->5
        let g = Digraph::new(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let pivots = [
            Pivot { id: 0, vertex: 0, alive: true },
            Pivot { id: 1, vertex: 3, alive: true },
        ];
        let mut tags = TagTable::new(6, 8);
        let ms = tagged_multi_search(&g, &pivots, 1, 5, Direction::Forward, &mut tags, &NONE, Schedule::Sequential)
            .unwrap();
        for (raw, res) in ms.raw.iter().zip(&ms.resolved) {
            assert_eq!(raw.core_vertices(), res.core);
            assert_eq!(raw.fringe_vertices(), res.fringe);
        }
        assert_eq!(ms.resolved[1].fringe, vec![5]);

        let dead = [
            Pivot { id: 0, vertex: 0, alive: false },
            Pivot { id: 1, vertex: 3, alive: false },
        ];
        let mut tags = TagTable::new(6, 8);
        let ms = tagged_multi_search(&g, &dead, 1, 2, Direction::Forward, &mut tags, &NONE, Schedule::Sequential)
            .unwrap();
        assert!(ms.raw.is_empty() && ms.resolved.is_empty());
        assert!(tags.is_clear());
    }

    #[test]
    fn tag_overflow_aborts() {
        // Three pivots all reach vertex 3.
        let g = Digraph::new(4, &[(0, 3), (1, 3), (2, 3)]).unwrap();
        let pivots: Vec<Pivot> = (0..3).map(|v| Pivot { id: v, vertex: v, alive: true }).collect();
        let mut tags = TagTable::new(4, 2);
        let err = tagged_multi_search(&g, &pivots, 1, 2, Direction::Forward, &mut tags, &NONE, Schedule::Sequential)
            .unwrap_err();
        assert_eq!(err, SearchError::TagOverflow { vertex: 3, cap: 2 });
    }

    #[test]
    fn unordered_pivots_rejected() {
        let g = path(3);
        let pivots = [
            Pivot { id: 2, vertex: 0, alive: true },
            Pivot { id: 1, vertex: 1, alive: true },
        ];
        let mut tags = TagTable::new(3, 8);
        assert_eq!(
            tagged_multi_search(&g, &pivots, 1, 2, Direction::Forward, &mut tags, &NONE, Schedule::Sequential)
                .unwrap_err(),
            SearchError::UnorderedPivots
        );
    }

    #[test]
    fn dedup_examples() {
        let e = |vertex, pivot| FrontierEntry { vertex, pivot };
        assert_eq!(dedup_frontier(vec![e(2, 5), e(2, 5), e(1, 9)]), vec![e(1, 9), e(2, 5)]);
        assert!(dedup_frontier(vec![]).is_empty());

        let mut rng = seeded(3);
        let entries: Vec<FrontierEntry> = (0..1000).map(|_| e(rng.gen_range(0..50), rng.gen_range(0..20))).collect();
        let mut oracle = entries.clone();
        oracle.sort_by_key(|a| (a.vertex, a.pivot));
        let mut unique: Vec<FrontierEntry> = Vec::new();
        for x in oracle {
            if unique.last() != Some(&x) {
                unique.push(x);
            }
        }
        assert_eq!(dedup_frontier(entries), unique);
    }

    #[test]
    fn bfs_layers_examples() {
        let g = path(5);
        let r = bfs_layers(&g, 0, 2).unwrap();
        assert_eq!(r.reached, vec![0, 1, 2]);
        assert!(!r.exhausted);
        let r = bfs_layers(&g, 0, 10).unwrap();
        assert_eq!(r.reached.len(), 5);
        assert!(r.exhausted);
        assert_eq!(r.distance[4], Some(4));

        let r = bfs_layers(&g, 4, 0).unwrap();
        assert_eq!(r.reached, vec![4]);
        assert!(r.exhausted);
        let r = bfs_layers(&g, 3, 0).unwrap();
        assert!(!r.exhausted);
        // Frontier empties exactly at the cap.
        assert!(bfs_layers(&g, 0, 4).unwrap().exhausted);
        assert!(bfs_layers(&g, 5, 1).is_err());
    }

    #[test]
    fn limited_search_matches_relaxation_oracle() {
        let mut rng = seeded(11);
        for case in 0..500u64 {
            let n = rng.gen_range(1..=128usize);
            let m = rng.gen_range(0..=(3 * n).min(n * (n - 1)));
            let g = generate(GraphKind::Random { m }, n, case).unwrap();
            let dead: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.1)).collect();
            let x = rng.gen_range(0..n as VertexId);
            if dead[x as usize] {
                continue;
            }
            let dist = rng.gen_range(0..8u64);
            for dir in [Direction::Forward, Direction::Backward] {
                let r = limited_search(&g, x, dist, dir, |v| dead[v as usize]).unwrap();
                let want = relaxation_oracle(&g, x, dist, dir, &dead);
                let want_set: Vec<VertexId> =
                    (0..n as VertexId).filter(|&v| want[v as usize].is_some()).collect();
                assert_eq!(r.core_vertices(), want_set, "case {case} {dir:?}");
                for v in r.visits() {
                    assert_eq!(Some(v.depth), want[v.vertex as usize]);
                }
            }
        }
    }

    fn arb_case() -> impl Strategy<Value = (usize, usize, u64, u64, u64)> {
        (2..48usize).prop_flat_map(|n| (Just(n), 0..3 * n, any::<u64>(), 0..5u64, 1..4u64))
    }

    proptest! {
        #[test]
        fn search_tree_invariants((n, m, seed, core, extra) in arb_case()) {
            let g = generate(GraphKind::Random { m: m.min(n * (n - 1)) }, n, seed).unwrap();
            let r = core_fringe_search(&g, 0, core, core + extra, Direction::Forward, NONE).unwrap();
            let whole = limited_search(&g, 0, core + extra, Direction::Forward, NONE).unwrap();
            let mut union: Vec<VertexId> = r.core_vertices();
            union.extend(r.fringe_vertices());
            union.sort_unstable();
            prop_assert_eq!(union, whole.core_vertices());
            prop_assert!(r.core().iter().all(|v| v.depth as u64 <= core));
            prop_assert!(r.fringe().iter().all(|v| v.depth as u64 > core && v.depth as u64 <= core + extra));
            for v in r.visits() {
                if let Some(p) = v.parent {
                    prop_assert!(g.has_arc(p, v.vertex));
                    prop_assert_eq!(r.depth_of(p), Some(v.depth - 1));
                }
            }
        }

        #[test]
        fn multi_search_matches_independent_searches(
            (n, m, seed, core, extra) in arb_case(),
            k in 1..6usize,
            perm_seed in any::<u64>(),
        ) {
            let g = generate(GraphKind::Random { m: m.min(n * (n - 1)) }, n, seed).unwrap();
            let pivots: Vec<Pivot> = (0..k.min(n))
                .map(|i| Pivot { id: 3 * i as u32 + 1, vertex: (i * 7 % n) as VertexId, alive: true })
                .collect();
            let mut distinct = pivots.clone();
            distinct.sort_by_key(|p| p.vertex);
            distinct.dedup_by_key(|p| p.vertex);
            prop_assume!(distinct.len() == pivots.len());
            for dir in [Direction::Forward, Direction::Backward] {
                let mut tags = TagTable::new(n, 64);
                let seq = tagged_multi_search(&g, &pivots, core, core + extra, dir, &mut tags, &NONE, Schedule::Sequential).unwrap();
                for (p, raw) in pivots.iter().zip(&seq.raw) {
                    let single = core_fringe_search(&g, p.vertex, core, core + extra, dir, NONE).unwrap();
                    prop_assert_eq!(raw.core_vertices(), single.core_vertices());
                    prop_assert_eq!(raw.fringe_vertices(), single.fringe_vertices());
                    for v in raw.visits() {
                        prop_assert_eq!(single.depth_of(v.vertex), Some(v.depth));
                    }
                }
                // resolved cores partition the union of raw cores
                let mut all: Vec<VertexId> = seq.raw.iter().flat_map(|r| r.core_vertices()).collect();
                all.sort_unstable();
                all.dedup();
                let mut parts: Vec<VertexId> = seq.resolved.iter().flat_map(|r| r.core.clone()).collect();
                parts.sort_unstable();
                prop_assert_eq!(parts, all);

                for schedule in [Schedule::Permuted(perm_seed), Schedule::Parallel] {
                    let mut t2 = TagTable::new(n, 64);
                    let other = tagged_multi_search(&g, &pivots, core, core + extra, dir, &mut t2, &NONE, schedule).unwrap();
                    prop_assert_eq!(&other, &seq);
                    for v in 0..n as VertexId {
                        prop_assert_eq!(t2.tags(v), tags.tags(v));
                    }
                }
            }
        }
    }
}
