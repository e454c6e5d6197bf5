use crate::graph::{Arc, Direction, VertexId};

/// Where a shortcut came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Provenance {
    /// Independent run that produced it.
    pub run: u32,
    /// Outer diameter-reduction round (1-based); sequential runs use 1.
    pub round: u32,
    /// Search root the shortcut is incident to.
    pub pivot: VertexId,
    /// `Forward` for `(pivot, v)`, `Backward` for `(u, pivot)`.
    pub direction: Direction,
    /// Index of the search tree that found the far endpoint, if recorded.
    pub tree: Option<u32>,
}

/// Raw shortcut arcs with per-arc provenance. Duplicates are kept.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShortcutSet {
    arcs: Vec<Arc>,
    provenance: Vec<Provenance>,
}

impl ShortcutSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, arc: Arc, prov: Provenance) {
        self.arcs.push(arc);
        self.provenance.push(prov);
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn iter(&self) -> impl Iterator<Item = (Arc, &Provenance)> + '_ {
        self.arcs.iter().copied().zip(&self.provenance)
    }

    /// Appends `other`, shifting its tree references by `tree_offset` and
    /// rewriting run/round ids through `relabel`.
    pub fn append(
        &mut self,
        other: ShortcutSet,
        tree_offset: u32,
        relabel: impl Fn(&mut Provenance),
    ) {
        self.arcs.extend(other.arcs);
        self.provenance.extend(other.provenance.into_iter().map(|mut p| {
            p.tree = p.tree.map(|t| t + tree_offset);
            relabel(&mut p);
            p
        }));
    }

    /// Sorted arcs with duplicates removed.
    pub fn distinct_arcs(&self) -> Vec<Arc> {
        let mut arcs = self.arcs.clone();
        arcs.sort_unstable();
        arcs.dedup();
        arcs
    }
}
