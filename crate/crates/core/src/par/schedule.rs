use rand::seq::SliceRandom;
use rand::Rng;

use super::params::{ParScParams, ParamError};
use crate::graph::VertexId;

/// `⌊(1+ε)^i⌋`.
pub fn group_size(eps: f64, i: u64) -> u64 {
    ((1.0 + eps).powf(i as f64) + 1e-9).floor() as u64
}

/// Smallest `k` with `2·Σ_{i=1..k} ⌊(1+ε)^i⌋ ≥ n`.
pub fn half_length(n: usize, eps: f64) -> usize {
    let (mut k, mut covered) = (0usize, 0u64);
    while 2 * covered < n as u64 {
        k += 1;
        covered += group_size(eps, k as u64);
    }
    k
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Group {
    /// Iteration number `i` in `1..=2k`.
    pub index: u64,
    pub start: usize,
    pub len: usize,
}

/// A random pivot order split into mirrored groups
/// `|X_i| = |X_{2k-i+1}| = ⌊(1+ε)^i⌋`; the two middle groups share what is
/// left over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotSchedule {
    pub permutation: Vec<VertexId>,
    /// Nonempty groups in iteration order, covering `permutation` exactly.
    pub groups: Vec<Group>,
}

impl PivotSchedule {
    pub fn group(&self, g: &Group) -> &[VertexId] {
        &self.permutation[g.start..g.start + g.len]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.len).collect()
    }
}

/// Group sizes for `n` pivots, indexed by iteration `1..=2k`, zeros kept.
fn mirrored_sizes(n: usize, eps: f64) -> Vec<u64> {
    let k = half_length(n, eps);
    if k == 0 {
        return Vec::new();
    }
    let mut sizes = vec![0u64; 2 * k];
    let mut outer = 0u64;
    for i in 1..k {
        let s = group_size(eps, i as u64);
        sizes[i - 1] = s;
        sizes[2 * k - i] = s;
        outer += 2 * s;
    }
    let rest = n as u64 - outer;
    sizes[k - 1] = group_size(eps, k as u64).min(rest);
    sizes[k] = rest - sizes[k - 1];
    sizes
}

pub fn pivot_schedule(
    vertices: impl IntoIterator<Item = VertexId>,
    eps: f64,
    rng: &mut impl Rng,
) -> PivotSchedule {
    let mut permutation: Vec<VertexId> = vertices.into_iter().collect();
    permutation.shuffle(rng);
    let mut groups = Vec::new();
    let mut start = 0;
    for (i, &len) in mirrored_sizes(permutation.len(), eps).iter().enumerate() {
        if len > 0 {
            groups.push(Group {
                index: i as u64 + 1,
                start,
                len: len as usize,
            });
            start += len as usize;
        }
    }
    debug_assert_eq!(start, permutation.len());
    PivotSchedule {
        permutation,
        groups,
    }
}

/// `raw + h·N_k·N_L − i·N_L` for a raw layer `raw ∈ 1..N_L`.
pub fn layer_for(raw: u64, p: &ParScParams, h: u32, i: u64) -> Result<u64, ParamError> {
    if h == 0 {
        return Err(ParamError::ZeroHeight);
    }
    if i == 0 || i > p.n_k {
        return Err(ParamError::IterationOutOfRange { i, n_k: p.n_k });
    }
    debug_assert!((1..p.n_l).contains(&raw));
    let offset = (h as u128 * p.n_k as u128 - i as u128) * p.n_l as u128;
    Ok((raw as u128 + offset).min(u64::MAX as u128) as u64)
}

/// Draws the layer index `d` for iteration `i` at height `h`. Searches of
/// that iteration use core distance `d·D` and fringe distance `(d+1)·D`.
pub fn draw_distance(
    rng: &mut impl Rng,
    p: &ParScParams,
    h: u32,
    i: u64,
) -> Result<u64, ParamError> {
    let raw = rng.gen_range(1..p.n_l);
    layer_for(raw, p, h, i)
}
