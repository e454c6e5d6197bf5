use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;
use thiserror::Error;

use super::{Arc, Digraph, VertexId};
use crate::rng::seeded;

/// Deterministic graph families used by tests and benchmarks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    /// `0 → 1 → … → n−1`
    Path,
    /// A path closed by `(n−1, 0)`.
    Cycle,
    /// `⌈n/width⌉` layers of `width` consecutive ids, complete bipartite
    /// arcs from each layer to the next.
    Layered { width: usize },
    /// `m` distinct non-loop arcs drawn uniformly.
    Random { m: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("layered graphs need width >= 1")]
    ZeroWidth,
    #[error("cannot place {m} distinct arcs on {n} vertices (max {max})")]
    TooManyArcs { n: usize, m: usize, max: u128 },
    #[error("vertex count {0} exceeds the 32-bit id space")]
    TooManyVertices(usize),
}

/// Pure function of `(kind, n, seed)`; the seed only matters for `Random`.
pub fn generate(kind: GraphKind, n: usize, seed: u64) -> Result<Digraph, GenerateError> {
    if n > VertexId::MAX as usize {
        return Err(GenerateError::TooManyVertices(n));
    }
    let arcs: Vec<Arc> = match kind {
        GraphKind::Path => (1..n).map(|v| ((v - 1) as VertexId, v as VertexId)).collect(),
        GraphKind::Cycle => {
            let mut arcs: Vec<Arc> = (1..n).map(|v| ((v - 1) as VertexId, v as VertexId)).collect();
            if n > 1 {
                arcs.push(((n - 1) as VertexId, 0));
            }
            arcs
        }
        GraphKind::Layered { width } => {
            if width == 0 {
                return Err(GenerateError::ZeroWidth);
            }
            let layers = n.div_ceil(width);
            let layer = |l: usize| (l * width)..((l + 1) * width).min(n);
            let mut arcs = Vec::new();
            for l in 1..layers {
                for u in layer(l - 1) {
                    for v in layer(l) {
                        arcs.push((u as VertexId, v as VertexId));
                    }
                }
            }
            arcs
        }
        GraphKind::Random { m } => random_arcs(n, m, seed)?,
    };
    Ok(Digraph::from_checked_arcs(n, arcs.into_iter()))
}

fn random_arcs(n: usize, m: usize, seed: u64) -> Result<Vec<Arc>, GenerateError> {
    let max = n as u128 * (n as u128).saturating_sub(1);
    if m as u128 > max {
        return Err(GenerateError::TooManyArcs { n, m, max });
    }
    let mut rng = seeded(seed);
    // Off-diagonal pairs are indexed 0..n(n-1): row u, column skipping u.
    let decode = |k: u64| {
        let u = k / (n as u64 - 1);
        let c = k % (n as u64 - 1);
        let v = if c >= u { c + 1 } else { c };
        (u as VertexId, v as VertexId)
    };
    if m == 0 {
        return Ok(Vec::new());
    }
    if 2 * m as u128 >= max {
        let picks = index::sample(&mut rng, max as usize, m);
        let mut arcs: Vec<Arc> = picks.into_iter().map(|k| decode(k as u64)).collect();
        arcs.sort_unstable();
        return Ok(arcs);
    }
    let mut seen = HashSet::with_capacity(m);
    let mut arcs = Vec::with_capacity(m);
    while arcs.len() < m {
        let k = rng.gen_range(0..max as u64);
        if seen.insert(k) {
            arcs.push(decode(k));
        }
    }
    Ok(arcs)
}
