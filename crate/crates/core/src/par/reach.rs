use rand::Rng;
use thiserror::Error;

use super::diam::{par_diam, DiamConfig, DiamError};
use super::params::{paper_distance, ParScParams};
use crate::graph::{Digraph, VertexId};
use crate::search::{bfs_layers, SearchError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReachConfig {
    pub outer_rounds: u32,
    pub inner_runs: u32,
    /// BFS hop limit on the shortcut graph; `None` means
    /// `4·⌈n^{2/3}(lg n)^{4/3}⌉`.
    pub hop_cap: Option<u64>,
    pub max_attempts: u32,
}

impl Default for ReachConfig {
    fn default() -> Self {
        Self {
            outer_rounds: 1,
            inner_runs: 1,
            hop_cap: None,
            max_attempts: 64,
        }
    }
}

pub fn default_hop_cap(n: usize) -> u64 {
    4 * paper_distance(n)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReachError<E: std::error::Error + 'static> {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("diameter reduction failed: {0}")]
    Reduce(#[source] E),
    #[error("hop-limited BFS did not finish in {0} attempts")]
    GaveUp(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reach {
    /// Sorted forward reach of the source.
    pub reached: Vec<VertexId>,
    /// Attempts discarded before the successful one.
    pub retries: u32,
}

/// Las Vegas loop: shortcut with `reduce(attempt)`, then BFS from `s` with
/// at most `hop_cap` hops. The answer is returned only once the BFS runs
/// out of new vertices before the cap, so it is always the exact reach.
pub fn las_vegas<E: std::error::Error + 'static>(
    g: &Digraph,
    s: VertexId,
    hop_cap: u64,
    max_attempts: u32,
    mut reduce: impl FnMut(u32) -> Result<Digraph, E>,
) -> Result<Reach, ReachError<E>> {
    if s as usize >= g.n() {
        return Err(SearchError::SourceOutOfRange(s).into());
    }
    for attempt in 0..max_attempts {
        let shortcut = reduce(attempt).map_err(ReachError::Reduce)?;
        let layers = bfs_layers(&shortcut, s, hop_cap)?;
        if layers.exhausted {
            let mut reached = layers.reached;
            reached.sort_unstable();
            return Ok(Reach {
                reached,
                retries: attempt,
            });
        }
    }
    Err(ReachError::GaveUp(max_attempts))
}

/// Forward reach of `s` through distance-limited shortcutting plus a
/// hop-limited BFS.
pub fn reachability(
    g: &Digraph,
    s: VertexId,
    p: &ParScParams,
    cfg: &ReachConfig,
    rng: &mut impl Rng,
) -> Result<Reach, ReachError<DiamError>> {
    let hop_cap = cfg.hop_cap.unwrap_or_else(|| default_hop_cap(g.n()));
    let diam = DiamConfig::new(cfg.outer_rounds, cfg.inner_runs);
    las_vegas(g, s, hop_cap, cfg.max_attempts, |_| {
        par_diam(g, p, &diam, rng).map(|o| o.snapshots.into_iter().last().expect("G_0 present"))
    })
}
