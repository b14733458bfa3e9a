//! Seeded local community search.
//!
//! Ring-terminated walks are launched from the seed. Every node on a walk's
//! trail is credited `1 / (l * degree)`, where `l` is that walk's ring length,
//! so nodes that short walks keep returning to score highest. Ordering the
//! touched nodes by score gives a support vector, and the community is a
//! prefix of it at a local minimum of conductance.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Adjacency, Graph, NodeId};
use crate::seed::walk_rng;
use crate::walk::RingWalker;

/// Walks per seed used when the caller has no preference.
pub const DEFAULT_WALKS: usize = 1000;

/// `cut / min(vol, total - vol)`, or 1.0 when that minimum is zero.
fn conductance_from_counts(cut: usize, vol: usize, total: usize) -> f64 {
    let denom = vol.min(total - vol);
    if denom == 0 {
        1.0
    } else {
        cut as f64 / denom as f64
    }
}

/// Conductance of a node set: edges leaving the set over the smaller of the
/// set's volume and its complement's. Repeated members count once.
pub fn conductance(g: &Graph, set: &[NodeId]) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = g.node_count();
    let mut inside = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(Error::NodeOutOfRange { node: v, node_count: n });
        }
        inside[v] = true;
    }
    let (mut cut, mut vol) = (0usize, 0usize);
    for v in (0..n).filter(|&v| inside[v]) {
        vol += g.degree(v);
        cut += g.neighbors(v).iter().filter(|&&u| !inside[u]).count();
    }
    Ok(conductance_from_counts(cut, vol, g.volume()))
}

/// Accumulated visit scores from the walks of one seed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreTable {
    pub scores: HashMap<NodeId, f64>,
    pub walks_done: usize,
}

impl ScoreTable {
    pub fn score(&self, v: NodeId) -> Option<f64> {
        self.scores.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Runs `walks` ring-terminated walks from `seed_node`; walk `i` draws from
/// `walk_rng(rng_seed, i)`.
pub fn accumulate_scores(g: &Graph, seed_node: NodeId, walks: usize, rng_seed: u64) -> Result<ScoreTable> {
    accumulate_with(&mut RingWalker::new(), g, seed_node, walks, rng_seed)
}

fn accumulate_with(
    walker: &mut RingWalker,
    g: &Graph,
    seed_node: NodeId,
    walks: usize,
    rng_seed: u64,
) -> Result<ScoreTable> {
    if walks == 0 {
        return Err(Error::invalid("at least one walk is required"));
    }
    let mut table = ScoreTable::default();
    let mut trail = Vec::new();
    for index in 0..walks {
        let mut rng = walk_rng(rng_seed, index as u64);
        let ring_length = walker.walk(g, seed_node, &mut rng, &mut trail)? as f64;
        // The closing node already appears earlier in the trail.
        for &v in &trail[..trail.len() - 1] {
            *table.scores.entry(v).or_insert(0.0) += 1.0 / (ring_length * g.degree(v) as f64);
        }
        table.walks_done += 1;
    }
    Ok(table)
}

/// Nodes ordered for the sweep: the seed first, then descending score with
/// ties broken by ascending id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportVector {
    nodes: Vec<NodeId>,
}

impl SupportVector {
    pub fn from_scores(table: &ScoreTable, seed_node: NodeId) -> Self {
        let mut ranked: Vec<(NodeId, f64)> =
            table.scores.iter().filter(|(&v, _)| v != seed_node).map(|(&v, &s)| (v, s)).collect();
        ranked.sort_unstable_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let nodes = std::iter::once(seed_node).chain(ranked.into_iter().map(|(v, _)| v)).collect();
        SupportVector { nodes }
    }

    /// An explicit ordering, checked for duplicates and range.
    pub fn from_order(g: &Graph, nodes: Vec<NodeId>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut seen = HashSet::with_capacity(nodes.len());
        for &v in &nodes {
            if v >= g.node_count() {
                return Err(Error::NodeOutOfRange { node: v, node_count: g.node_count() });
            }
            if !seen.insert(v) {
                return Err(Error::invalid(format!("node {v} repeated in support vector")));
            }
        }
        Ok(SupportVector { nodes })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Prefix conductances of a support vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepProfile {
    /// `phi[i]` is the conductance of the first `i + 1` nodes.
    pub phi: Vec<f64>,
    pub local_minima: Vec<usize>,
}

/// Conductance of every prefix, maintained incrementally: adding `v` changes
/// the cut by `degree(v) - 2 * |N(v) ∩ S|`.
pub fn sweep(g: &Graph, support: &SupportVector) -> SweepProfile {
    let total = g.volume();
    let mut inside = HashSet::with_capacity(support.len());
    let (mut cut, mut vol) = (0usize, 0usize);
    let mut phi = Vec::with_capacity(support.len());
    for &v in support.nodes() {
        let deg = g.degree(v);
        let internal = g.neighbors(v).iter().filter(|u| inside.contains(*u)).count();
        inside.insert(v);
        cut = cut + deg - 2 * internal;
        vol += deg;
        phi.push(conductance_from_counts(cut, vol, total));
    }
    let local_minima = local_minima(&phi);
    SweepProfile { phi, local_minima }
}

/// Indices `k` in `1..len-1` that sit strictly below both neighbors. A flat
/// run counts once, at its first index, when both sides of the run are
/// strictly larger. Index 0 never qualifies.
pub fn local_minima(phi: &[f64]) -> Vec<usize> {
    let mut minima = Vec::new();
    let mut i = 1;
    while i + 1 < phi.len() {
        let mut j = i;
        while j + 1 < phi.len() && phi[j + 1] == phi[i] {
            j += 1;
        }
        if j + 1 < phi.len() && phi[i - 1] > phi[i] && phi[j + 1] > phi[i] {
            minima.push(i);
        }
        i = j + 1;
    }
    minima
}

/// A community found from one seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Community {
    /// Members in ascending id order.
    pub members: Vec<NodeId>,
    pub conductance: f64,
    pub seed: NodeId,
    /// Which local minimum was taken, 0 being the first.
    pub rank: usize,
}

impl Community {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Everything the seeded search produces, for callers that want to plot the
/// sweep as well as read the community.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSearch {
    pub community: Community,
    pub support: SupportVector,
    pub profile: SweepProfile,
}

pub fn find_community(g: &Graph, seed_node: NodeId, walks: usize, rng_seed: u64, rank: usize) -> Result<Community> {
    Ok(search(g, seed_node, walks, rng_seed, rank)?.community)
}

pub fn search(g: &Graph, seed_node: NodeId, walks: usize, rng_seed: u64, rank: usize) -> Result<LocalSearch> {
    search_with(&mut RingWalker::new(), g, seed_node, walks, rng_seed, rank)
}

/// [`search`] with caller-owned walk state, for running many seeds on one
/// thread without reallocating.
pub fn search_with(
    walker: &mut RingWalker,
    g: &Graph,
    seed_node: NodeId,
    walks: usize,
    rng_seed: u64,
    rank: usize,
) -> Result<LocalSearch> {
    let table = accumulate_with(walker, g, seed_node, walks, rng_seed)?;
    let support = SupportVector::from_scores(&table, seed_node);
    let profile = sweep(g, &support);

    let (cutoff, rank) = match profile.local_minima.len() {
        0 => (global_minimum_prefix(&profile.phi), 0),
        count => {
            let rank = rank.min(count - 1);
            (profile.local_minima[rank], rank)
        }
    };
    let mut members = support.nodes()[..=cutoff].to_vec();
    members.sort_unstable();
    let conductance = conductance(g, &members)?;
    Ok(LocalSearch { community: Community { members, conductance, seed: seed_node, rank }, support, profile })
}

/// Smallest index of the minimum over prefixes of two or more nodes.
fn global_minimum_prefix(phi: &[f64]) -> usize {
    (1..phi.len()).fold(1.min(phi.len() - 1), |best, i| if phi[i] < phi[best] { i } else { best })
}
