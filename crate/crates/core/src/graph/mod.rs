//! Compressed adjacency graphs, partitions and the generators that build them.

mod generators;
mod io;

pub use generators::{
    gen_er, gen_lattice, gen_planted, gen_regular, gen_ring, gen_tree, sample_configuration,
    sample_simple_configuration, PlantedSpec,
};
pub use io::{load_edge_list, write_edge_list, LoadedGraph};

use std::ops::Range;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Read access shared by [`Graph`] and [`MultiGraph`], which is all a walk needs.
pub trait Adjacency: Sync {
    fn node_count(&self) -> usize;

    /// Concatenation of every neighbor list. Node `v` occurs `degree(v)` times.
    fn neighbor_slots(&self) -> &[NodeId];

    /// Where `v`'s neighbors sit in [`Adjacency::neighbor_slots`].
    fn slot_range(&self, v: NodeId) -> Range<usize>;

    /// Hint that `slot_range(v)` is about to be read.
    fn prefetch_node(&self, _v: NodeId) {}

    /// Neighbors of `v`; a multigraph repeats a neighbor once per parallel edge.
    #[inline]
    fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.neighbor_slots()[self.slot_range(v)]
    }

    #[inline]
    fn degree(&self, v: NodeId) -> usize {
        self.slot_range(v).len()
    }

    /// Sum of degrees, i.e. twice the edge count.
    fn volume(&self) -> usize {
        self.neighbor_slots().len()
    }
}

/// Cache hint for `value`'s line; a no-op off x86-64.
#[inline(always)]
pub(crate) fn prefetch<T>(value: &T) {
    #[cfg(target_arch = "x86_64")]
    // SAFETY: a prefetch never faults, and the pointer comes from a live reference.
    unsafe {
        use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
        _mm_prefetch::<_MM_HINT_T0>((value as *const T).cast::<i8>());
    }
    #[cfg(not(target_arch = "x86_64"))]
    let _ = value;
}

/// Buckets undirected pairs into CSR form, each pair contributing a half-edge
/// in both directions, and sorts every neighbor list. A counting pass avoids
/// a global sort, which dominates on large inputs.
fn csr_from_pairs(n: usize, pairs: &[(NodeId, NodeId)]) -> (Vec<usize>, Vec<NodeId>) {
    let mut offsets = vec![0usize; n + 1];
    for &(u, v) in pairs {
        offsets[u + 1] += 1;
        offsets[v + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets[..n].to_vec();
    let mut neighbors = vec![0; offsets[n]];
    for &(u, v) in pairs {
        neighbors[fill[u]] = v;
        fill[u] += 1;
        neighbors[fill[v]] = u;
        fill[v] += 1;
    }
    for v in 0..n {
        neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
    }
    (offsets, neighbors)
}

fn checked_pairs<I>(n: usize, pairs: I) -> Result<Vec<(NodeId, NodeId)>>
where
    I: IntoIterator<Item = (NodeId, NodeId)>,
{
    pairs
        .into_iter()
        .map(|(u, v)| match u.max(v) {
            w if w >= n => Err(Error::NodeOutOfRange { node: w, node_count: n }),
            _ => Ok((u, v)),
        })
        .collect()
}

/// Immutable undirected simple graph.
///
/// Neighbor lists are sorted ascending; there are no self-loops or parallel
/// edges. Isolated nodes are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
}

impl Graph {
    /// Builds a graph on `n` nodes. Self-loops and repeated edges (in either
    /// orientation) are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let pairs = checked_pairs(n, edges.into_iter().filter(|&(u, v)| u != v))?;
        let (mut offsets, mut neighbors) = csr_from_pairs(n, &pairs);
        // Compact away repeated neighbors in place.
        let mut write = 0;
        for v in 0..n {
            let (start, end) = (offsets[v], offsets[v + 1]);
            offsets[v] = write;
            for read in start..end {
                if read == start || neighbors[read] != neighbors[read - 1] {
                    neighbors[write] = neighbors[read];
                    write += 1;
                }
            }
        }
        offsets[n] = write;
        neighbors.truncate(write);
        Ok(Graph { offsets, neighbors })
    }

    pub fn empty(n: usize) -> Self {
        Graph { offsets: vec![0; n + 1], neighbors: Vec::new() }
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count())
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|v| self.degree(v)).collect()
    }

    /// Nodes with at least one neighbor, ascending.
    pub fn active_nodes(&self) -> Vec<NodeId> {
        (0..self.node_count()).filter(|&v| self.degree(v) > 0).collect()
    }

    /// Checks every structural invariant, reporting the first violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.node_count();
        if self.offsets.first() != Some(&0) || self.offsets.last() != Some(&self.neighbors.len()) {
            return Err("offsets do not span the neighbor array".into());
        }
        if self.offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err("offsets are not monotone".into());
        }
        for u in 0..n {
            let nbrs = self.neighbors(u);
            if nbrs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("neighbors of {u} are not strictly ascending"));
            }
            for &v in nbrs {
                if v >= n {
                    return Err(format!("neighbor {v} of {u} out of range"));
                }
                if v == u {
                    return Err(format!("self-loop at {u}"));
                }
                if !self.has_edge(v, u) {
                    return Err(format!("edge {u}-{v} is not symmetric"));
                }
            }
        }
        if !self.neighbors.len().is_multiple_of(2) {
            return Err("degree sum is odd".into());
        }
        Ok(())
    }
}

impl Adjacency for Graph {
    fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    fn slot_range(&self, v: NodeId) -> Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    #[inline]
    fn prefetch_node(&self, v: NodeId) {
        prefetch(&self.offsets[v]);
    }

    fn neighbor_slots(&self) -> &[NodeId] {
        &self.neighbors
    }
}

/// Undirected multigraph with self-loops and parallel edges.
///
/// A self-loop at `v` appears twice in `v`'s neighbor list, so it contributes
/// two to the degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
}

impl MultiGraph {
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let pairs = checked_pairs(n, pairs)?;
        let (offsets, neighbors) = csr_from_pairs(n, &pairs);
        Ok(MultiGraph { offsets, neighbors })
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|v| self.degree(v)).collect()
    }

    /// Multiplicity of the edge `u`-`v`; a self-loop counts once per loop.
    pub fn multiplicity(&self, u: NodeId, v: NodeId) -> usize {
        let count = self.neighbors(u).iter().filter(|&&w| w == v).count();
        if u == v {
            count / 2
        } else {
            count
        }
    }

    pub fn is_simple(&self) -> bool {
        (0..self.node_count()).all(|u| {
            let nbrs = self.neighbors(u);
            !nbrs.contains(&u) && nbrs.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Symmetry as a multiset, plus an even self-loop count per node.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.node_count();
        for u in 0..n {
            let nbrs = self.neighbors(u);
            if nbrs.windows(2).any(|w| w[0] > w[1]) {
                return Err(format!("neighbors of {u} are not sorted"));
            }
            for &v in nbrs {
                if v >= n {
                    return Err(format!("neighbor {v} of {u} out of range"));
                }
                let forward = nbrs.iter().filter(|&&w| w == v).count();
                let backward = self.neighbors(v).iter().filter(|&&w| w == u).count();
                if forward != backward {
                    return Err(format!("edge {u}-{v} is not symmetric"));
                }
                if u == v && forward % 2 != 0 {
                    return Err(format!("odd self-loop slot count at {u}"));
                }
            }
        }
        Ok(())
    }
}

impl Adjacency for MultiGraph {
    fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    fn slot_range(&self, v: NodeId) -> Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    #[inline]
    fn prefetch_node(&self, v: NodeId) {
        prefetch(&self.offsets[v]);
    }

    fn neighbor_slots(&self) -> &[NodeId] {
        &self.neighbors
    }
}

/// Assignment of every node to exactly one community, ids dense in `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    community_count: usize,
}

impl Partition {
    /// Accepts arbitrary labels and renumbers them densely in order of first
    /// appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let assignment = labels
            .iter()
            .map(|&label| {
                let next = remap.len();
                *remap.entry(label).or_insert(next)
            })
            .collect();
        Partition { assignment, community_count: remap.len() }
    }

    pub fn single(n: usize) -> Self {
        Partition { assignment: vec![0; n], community_count: usize::from(n > 0) }
    }

    pub fn singletons(n: usize) -> Self {
        Partition { assignment: (0..n).collect(), community_count: n }
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn community_of(&self, v: NodeId) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Members of each community, ascending within each group.
    pub fn groups(&self) -> Vec<Vec<NodeId>> {
        let mut groups = vec![Vec::new(); self.community_count];
        for (v, &c) in self.assignment.iter().enumerate() {
            groups[c].push(v);
        }
        groups
    }
}
