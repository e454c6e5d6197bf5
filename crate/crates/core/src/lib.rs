//! Randomized diameter reduction for directed graphs.
//!
//! Shortcut arcs `(u, v)` with `v` already reachable from `u` are added so
//! that every reachable pair ends up joined by a short path, after which a
//! hop-capped BFS answers single-source reachability exactly. The crate
//! provides:
//!
//! - [`graph`]: immutable CSR digraphs, induced subgraphs, generators, I/O.
//! - [`search`]: hop-limited BFS, core/fringe search, tagged multi-pivot search.
//! - [`seq`]: the sequential pivot-and-recurse shortcutting driver.
//! - [`par`]: the distance-limited variant with batched pivots, budgets and
//!   a Las Vegas reachability driver.
//! - [`tree`]: recovering a directed spanning tree of the original graph.
//! - [`oracle`]: brute-force ground truth used by tests and the CLI.

pub mod graph;
pub mod oracle;
pub mod par;
pub mod rng;
pub mod search;
pub mod seq;
pub mod shortcut;
pub mod tree;

pub use graph::{Arc, Digraph, Direction, VertexId};
pub use shortcut::{Provenance, ShortcutSet};

/// `⌈log₂ n⌉`, clamped below at 1 so that `n <= 2` still gets one level.
pub fn ceil_lg(n: usize) -> u32 {
    if n <= 2 {
        1
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::ceil_lg;

    #[test]
    fn ceil_lg_values() {
        assert_eq!(
            [0, 1, 2, 3, 4, 5, 1024, 1025, 4096].map(ceil_lg),
            [1, 1, 1, 2, 2, 3, 10, 11, 12]
        );
    }
}
