//! Global quality measures and the per-graph report.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Adjacency, Graph, NodeId, Partition};
use crate::local::{self, Community, DEFAULT_WALKS};
use crate::seed::{derive_seed, domain, task_rng};
use crate::walk::{random_walk_modularity, task_ranges, RingWalker, RwmConfig};

/// Newman modularity `sum_c (e_cc - a_c^2)`.
pub fn newman_modularity(g: &Graph, part: &Partition) -> Result<f64> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::NoEdges);
    }
    if part.node_count() != g.node_count() {
        return Err(Error::invalid(format!(
            "partition covers {} nodes, graph has {}",
            part.node_count(),
            g.node_count()
        )));
    }
    let k = part.community_count();
    let mut internal = vec![0usize; k];
    let mut volume = vec![0usize; k];
    for v in 0..g.node_count() {
        let c = part.community_of(v);
        volume[c] += g.degree(v);
    }
    for (u, v) in g.edges() {
        if part.community_of(u) == part.community_of(v) {
            internal[part.community_of(u)] += 1;
        }
    }
    let m = m as f64;
    Ok(internal
        .iter()
        .zip(&volume)
        .map(|(&e, &a)| {
            let a = a as f64 / (2.0 * m);
            e as f64 / m - a * a
        })
        .sum())
}

/// Candidate merge in the greedy heap. `gain` is the modularity gain scaled by
/// `2 m^2`, which keeps it an exact integer.
#[derive(Debug)]
struct Merge {
    gain: i128,
    pair: Reverse<(usize, usize)>,
    versions: (u32, u32),
}

impl Ord for Merge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain.cmp(&other.gain).then_with(|| self.pair.cmp(&other.pair))
    }
}

impl PartialEq for Merge {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Merge {}

impl PartialOrd for Merge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Agglomerative modularity maximization for small graphs.
///
/// Starting from singletons, the pair of adjacent communities with the largest
/// modularity gain is merged until no merge gains anything. Ties go to the
/// smallest pair of community ids. Gains are compared as exact integers.
pub fn greedy_newman(g: &Graph) -> Result<(Partition, f64)> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::NoEdges);
    }
    let n = g.node_count();
    let two_m = 2 * m as i128;
    let mut degree: Vec<i128> = (0..n).map(|v| g.degree(v) as i128).collect();
    let mut links: Vec<BTreeMap<usize, i128>> =
        (0..n).map(|v| g.neighbors(v).iter().map(|&u| (u, 1)).collect()).collect();
    let mut members: Vec<Vec<NodeId>> = (0..n).map(|v| vec![v]).collect();
    let mut version = vec![0u32; n];
    let mut alive = vec![true; n];

    let candidate = |i: usize, j: usize, e: i128, degree: &[i128], version: &[u32]| {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        Merge { gain: two_m * e - degree[a] * degree[b], pair: Reverse((a, b)), versions: (version[a], version[b]) }
    };
    let mut heap: BinaryHeap<Merge> = g.edges().map(|(u, v)| candidate(u, v, 1, &degree, &version)).collect();

    while let Some(best) = heap.pop() {
        let Reverse((a, b)) = best.pair;
        if !alive[a] || !alive[b] || best.versions != (version[a], version[b]) {
            continue;
        }
        if best.gain <= 0 {
            break;
        }
        // b folds into a.
        let absorbed = std::mem::take(&mut links[b]);
        for (&c, &e) in &absorbed {
            links[c].remove(&b);
            if c != a {
                *links[a].entry(c).or_insert(0) += e;
                *links[c].entry(a).or_insert(0) += e;
            }
        }
        links[a].remove(&b);
        degree[a] += degree[b];
        let moved = std::mem::take(&mut members[b]);
        members[a].extend(moved);
        alive[b] = false;
        version[a] += 1;
        for (&c, &e) in &links[a] {
            heap.push(candidate(a, c, e, &degree, &version));
        }
    }

    let mut labels = vec![0usize; n];
    for (c, group) in members.iter().enumerate() {
        for &v in group {
            labels[v] = c;
        }
    }
    let partition = Partition::from_labels(&labels);
    let q = newman_modularity(g, &partition)?;
    Ok((partition, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub node: NodeId,
    pub conductance: f64,
    pub size: usize,
}

/// Conductance of the first community found from each profiled seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConductanceProfile {
    pub entries: Vec<ProfileEntry>,
    /// Profiled seeds over all nodes.
    pub coverage: f64,
}

impl ConductanceProfile {
    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.conductance).collect()
    }

    pub fn mean_conductance(&self) -> f64 {
        self.entries.iter().map(|e| e.conductance).sum::<f64>() / self.entries.len() as f64
    }

    pub fn mean_size(&self) -> f64 {
        self.entries.iter().map(|e| e.size as f64).sum::<f64>() / self.entries.len() as f64
    }
}

/// Runs the rank-0 community search from every node in `seeds`, in parallel,
/// returning the communities in seed order. Seed `s` uses walk seed
/// `derive_seed(rng_seed, s)`.
pub fn seeded_communities(g: &Graph, seeds: &[NodeId], walks: usize, rng_seed: u64) -> Result<Vec<Community>> {
    let blocks = task_ranges(seeds.len())
        .into_par_iter()
        .map(|range| {
            let mut walker = RingWalker::new();
            seeds[range]
                .iter()
                .map(|&s| Ok(local::search_with(&mut walker, g, s, walks, derive_seed(rng_seed, s as u64), 0)?.community))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// Conductance and size of each seed's community, see [`seeded_communities`].
pub fn conductance_profile(g: &Graph, seeds: &[NodeId], walks: usize, rng_seed: u64) -> Result<ConductanceProfile> {
    if seeds.is_empty() {
        return Err(Error::EmptySet);
    }
    let entries = seeded_communities(g, seeds, walks, rng_seed)?
        .into_iter()
        .map(|c| ProfileEntry { node: c.seed, conductance: c.conductance, size: c.size() })
        .collect();
    Ok(ConductanceProfile { entries, coverage: seeds.len() as f64 / g.node_count() as f64 })
}

/// `max_c sqrt((1 - c) f(c))`, where `f(c)` is the fraction of values at or
/// below `c`. The maximum is attained at an observed value, so only those are
/// tried.
pub fn conductance_modularity(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let total = sorted.len() as f64;
    let mut best = 0.0f64;
    for (i, &c) in sorted.iter().enumerate() {
        if i + 1 < sorted.len() && sorted[i + 1] == c {
            continue;
        }
        let f = (i + 1) as f64 / total;
        best = best.max(((1.0 - c) * f).max(0.0).sqrt());
    }
    Ok(best)
}

/// `|A ∩ B| / sqrt(|A| |B|)` over distinct members.
pub fn similarity(a: &[NodeId], b: &[NodeId]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let a: HashSet<NodeId> = a.iter().copied().collect();
    let b: HashSet<NodeId> = b.iter().copied().collect();
    let shared = a.intersection(&b).count() as f64;
    Ok(shared / ((a.len() * b.len()) as f64).sqrt())
}

/// Mean over `truth` of the best similarity any `found` community achieves.
pub fn best_match_score(truth: &[Vec<NodeId>], found: &[Vec<NodeId>]) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut total = 0.0;
    for t in truth {
        let mut best = 0.0f64;
        for f in found {
            best = best.max(similarity(t, f)?);
        }
        total += best;
    }
    Ok(total / truth.len() as f64)
}

/// Statistics row for one graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModularityReport {
    pub rwm: f64,
    /// Absent when the graph is above the greedy size threshold.
    pub newman: Option<f64>,
    pub cm: f64,
    pub avg_conductance: f64,
    pub arl: f64,
    pub avg_size: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub rwm: RwmConfig,
    pub community_walks: usize,
    /// Profile this many uniformly sampled seeds; `None` applies the default
    /// policy of every node up to 10^5 nodes, 10^4 sampled seeds above.
    pub seed_sample: Option<usize>,
    /// Greedy Newman modularity is computed only up to this many nodes.
    pub greedy_max_nodes: usize,
}

pub const FULL_PROFILE_MAX_NODES: usize = 100_000;
pub const SAMPLED_PROFILE_SEEDS: usize = 10_000;
pub const GREEDY_MAX_NODES: usize = 10_000;

impl ReportConfig {
    pub fn for_graph(g: &Graph) -> Self {
        ReportConfig {
            rwm: RwmConfig::for_graph(g),
            community_walks: DEFAULT_WALKS,
            seed_sample: None,
            greedy_max_nodes: GREEDY_MAX_NODES,
        }
    }
}

/// Seeds to profile: all non-isolated nodes, or a uniform sample of them in
/// ascending order.
pub fn profile_seeds(g: &Graph, sample: Option<usize>, rng_seed: u64) -> Vec<NodeId> {
    let active = g.active_nodes();
    let wanted = match sample {
        Some(k) => k,
        None if active.len() <= FULL_PROFILE_MAX_NODES => active.len(),
        None => SAMPLED_PROFILE_SEEDS,
    };
    if wanted >= active.len() {
        return active;
    }
    let mut rng = task_rng(derive_seed(rng_seed, domain::SEED_SAMPLE));
    let mut picked: Vec<NodeId> = index::sample(&mut rng, active.len(), wanted).into_iter().map(|i| active[i]).collect();
    picked.sort_unstable();
    picked
}

pub fn full_report(g: &Graph, config: &ReportConfig, rng_seed: u64) -> Result<ModularityReport> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let rwm = random_walk_modularity(g, &config.rwm, rng_seed)?;
    let seeds = profile_seeds(g, config.seed_sample, rng_seed);
    if seeds.is_empty() {
        return Err(Error::invalid("seed sample size must be at least 1"));
    }
    let profile = conductance_profile(g, &seeds, config.community_walks, derive_seed(rng_seed, domain::COMMUNITY))?;
    let newman = if g.node_count() <= config.greedy_max_nodes { Some(greedy_newman(g)?.1) } else { None };
    Ok(ModularityReport {
        rwm: rwm.q,
        newman,
        cm: conductance_modularity(&profile.values())?,
        avg_conductance: profile.mean_conductance(),
        arl: rwm.l_g.mean_length,
        avg_size: profile.mean_size(),
    })
}
