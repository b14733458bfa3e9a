//! Ring-terminated random walks and the statistics built from their lengths.
//!
//! A walk starts at a node and moves to a uniformly chosen neighbor at every
//! step. It stops the first time it lands on a node already on its trail. The
//! ring length is the number of transitions minus one, so the shortest
//! possible walk `s -> v -> s` has length 1. Under this convention a walk on a
//! d-regular tree-like graph closes with probability `1/d` per step, which is
//! what [`expected_rwl_regular`] sums.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{sample_configuration, sample_simple_configuration, Adjacency, Graph, NodeId};
use crate::seed::{derive_seed, domain, walk_rng};

/// Parallel tasks per rayon thread. The split has no influence on results.
const TASKS_PER_THREAD: usize = 4;

/// Splits `0..len` into contiguous ranges, one per parallel task.
pub(crate) fn task_ranges(len: usize) -> Vec<std::ops::Range<usize>> {
    let tasks = (rayon::current_num_threads() * TASKS_PER_THREAD).clamp(1, len.max(1));
    (0..tasks).map(|t| t * len / tasks..(t + 1) * len / tasks).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkOutcome {
    /// Visited nodes, start first; the last entry repeats an earlier one.
    pub trail: Vec<NodeId>,
    pub ring_length: usize,
}

/// Trails up to this length are searched linearly; longer trails move into a
/// hash set. Neither needs per-graph state, so a walker is O(1) to create.
const SCAN_LIMIT: usize = 32;

/// Membership test for the nodes of the current trail.
#[derive(Debug, Clone, Default)]
struct TrailSet {
    hashed: bool,
    set: FxHashSet<NodeId>,
}

impl TrailSet {
    fn reset(&mut self) {
        if self.hashed {
            self.set.clear();
            self.hashed = false;
        }
    }

    /// Whether `next` is already on `trail`; otherwise records it.
    #[inline]
    fn revisits(&mut self, trail: &[NodeId], next: NodeId) -> bool {
        if self.hashed {
            return !self.set.insert(next);
        }
        if trail.contains(&next) {
            return true;
        }
        if trail.len() >= SCAN_LIMIT {
            self.set.extend(trail.iter().copied());
            self.set.insert(next);
            self.hashed = true;
        }
        false
    }
}

/// Reusable scratch space for single walks.
#[derive(Debug, Clone, Default)]
pub struct RingWalker {
    visited: TrailSet,
}

impl RingWalker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs one walk from `start`, leaving the visited nodes in `trail`, and
    /// returns the ring length.
    pub fn walk<G, R>(&mut self, g: &G, start: NodeId, rng: &mut R, trail: &mut Vec<NodeId>) -> Result<usize>
    where
        G: Adjacency + ?Sized,
        R: Rng + ?Sized,
    {
        let n = g.node_count();
        if start >= n {
            return Err(Error::NodeOutOfRange { node: start, node_count: n });
        }
        if g.degree(start) == 0 {
            return Err(Error::IsolatedStart(start));
        }
        self.visited.reset();
        trail.clear();
        trail.push(start);
        loop {
            let nbrs = g.neighbors(trail[trail.len() - 1]);
            let next = nbrs[rng.random_range(0..nbrs.len())];
            let closed = self.visited.revisits(trail, next);
            trail.push(next);
            if closed {
                return Ok(ring_length(trail.len()));
            }
        }
    }
}

/// Ring length for a finished trail of `len` entries (`len - 1` transitions).
/// A self-loop taken on the first step closes after one transition and is
/// still counted as length 1.
#[inline]
fn ring_length(len: usize) -> usize {
    (len - 2).max(1)
}

/// One ring-terminated walk from `start`.
pub fn walk_until_ring<G, R>(g: &G, start: NodeId, rng: &mut R) -> Result<WalkOutcome>
where
    G: Adjacency + ?Sized,
    R: Rng + ?Sized,
{
    let mut trail = Vec::new();
    let ring_length = RingWalker::new().walk(g, start, rng, &mut trail)?;
    Ok(WalkOutcome { trail, ring_length })
}

/// Expected ring length on a d-regular graph of n nodes when only immediate
/// backtracking closes a ring: `d - (d + n) (1 - 1/d)^n`.
pub fn expected_rwl_regular(d: u64, n: u64) -> f64 {
    assert!(d >= 1 && n >= 1, "degree and size must be positive");
    if d == 1 {
        return 1.0;
    }
    let d = d as f64;
    let n = n as f64;
    let tail = (n * (-1.0 / d).ln_1p()).exp();
    d - (d + n) * tail
}

/// Exact count, sum and sum of squares of ring lengths. Merging is integer
/// addition, so any split of the walks across threads gives identical totals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthStats {
    pub count: u64,
    pub sum: u64,
    pub sum_sq: u128,
}

impl LengthStats {
    pub fn push(&mut self, length: usize) {
        let l = length as u64;
        self.count += 1;
        self.sum += l;
        self.sum_sq += u128::from(l) * u128::from(l);
    }

    pub fn merge(self, other: Self) -> Self {
        LengthStats {
            count: self.count + other.count,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }

    pub fn mean(&self) -> f64 {
        self.sum as f64 / self.count as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let count = u128::from(self.count);
        let sum = u128::from(self.sum);
        let scaled = count * self.sum_sq - sum * sum;
        scaled as f64 / (count * (count - 1)) as f64
    }
}

/// Mean ring length of a batch of walks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RwlEstimate {
    pub mean_length: f64,
    pub walk_count: u64,
    pub std_error: f64,
    pub stats: LengthStats,
}

impl RwlEstimate {
    pub fn from_stats(stats: LengthStats) -> Self {
        RwlEstimate {
            mean_length: stats.mean(),
            walk_count: stats.count,
            std_error: (stats.variance() / stats.count as f64).sqrt(),
            stats,
        }
    }
}

/// How walk start nodes are drawn.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartPolicy {
    /// Uniform over nodes with at least one neighbor.
    #[default]
    Uniform,
    /// Proportional to degree.
    DegreeProportional,
}

impl std::str::FromStr for StartPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(StartPolicy::Uniform),
            "degree" | "degree-proportional" => Ok(StartPolicy::DegreeProportional),
            other => Err(Error::invalid(format!("unknown start policy {other:?}"))),
        }
    }
}

impl fmt::Display for StartPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StartPolicy::Uniform => "uniform",
            StartPolicy::DegreeProportional => "degree",
        })
    }
}

/// Mean ring length over `walks` walks. Walk `i` uses `walk_rng(seed, i)` for
/// both its start node and its steps.
pub fn average_rwl<G: Adjacency>(g: &G, policy: StartPolicy, walks: usize, seed: u64) -> Result<RwlEstimate> {
    Ok(RwlEstimate::from_stats(ring_length_stats(g, policy, walks, seed)?))
}

fn ring_length_stats<G: Adjacency>(g: &G, policy: StartPolicy, walks: usize, seed: u64) -> Result<LengthStats> {
    if walks == 0 {
        return Err(Error::invalid("at least one walk is required"));
    }
    let active: Vec<NodeId> = (0..g.node_count()).filter(|&v| g.degree(v) > 0).collect();
    if active.is_empty() {
        return Err(Error::AllIsolated);
    }
    let starts = StartSampler { policy, active: &active, slots: g.neighbor_slots() };
    Ok(task_ranges(walks)
        .into_par_iter()
        .map(|range| interleaved_stats(g, &starts, range, seed))
        .reduce(LengthStats::default, LengthStats::merge))
}

struct StartSampler<'a> {
    policy: StartPolicy,
    active: &'a [NodeId],
    slots: &'a [NodeId],
}

impl StartSampler<'_> {
    fn sample<R: Rng>(&self, rng: &mut R) -> NodeId {
        match self.policy {
            StartPolicy::Uniform => self.active[rng.random_range(0..self.active.len())],
            StartPolicy::DegreeProportional => self.slots[rng.random_range(0..self.slots.len())],
        }
    }
}

/// Independent walks advanced in lockstep. On large graphs every step is a
/// cache miss; each lane prefetches what it reads next and then yields to the
/// others, so the misses overlap. Random draws per walk are unchanged.
const LANES: usize = 16;

struct Lane {
    rng: ChaCha8Rng,
    trail: Vec<NodeId>,
    visited: TrailSet,
    /// Slot chosen for the next transition, read on the lane's next turn.
    pending: Option<usize>,
}

impl Lane {
    fn new<G: Adjacency>(g: &G, starts: &StartSampler<'_>, seed: u64, index: usize) -> Self {
        let mut lane =
            Lane { rng: walk_rng(seed, index as u64), trail: Vec::new(), visited: TrailSet::default(), pending: None };
        lane.restart(g, starts, seed, index);
        lane
    }

    fn restart<G: Adjacency>(&mut self, g: &G, starts: &StartSampler<'_>, seed: u64, index: usize) {
        self.rng = walk_rng(seed, index as u64);
        let start = starts.sample(&mut self.rng);
        g.prefetch_node(start);
        self.trail.clear();
        self.trail.push(start);
        self.visited.reset();
        self.pending = None;
    }

    /// Half a transition: either choose a slot or read it. Returns the ring
    /// length once the walk closes.
    #[inline]
    fn advance<G: Adjacency>(&mut self, g: &G) -> Option<usize> {
        let slots = g.neighbor_slots();
        match self.pending.take() {
            None => {
                let range = g.slot_range(self.trail[self.trail.len() - 1]);
                let slot = range.start + self.rng.random_range(0..range.len());
                crate::graph::prefetch(&slots[slot]);
                self.pending = Some(slot);
                None
            }
            Some(slot) => {
                let next = slots[slot];
                let closed = self.visited.revisits(&self.trail, next);
                self.trail.push(next);
                if closed {
                    return Some(ring_length(self.trail.len()));
                }
                g.prefetch_node(next);
                None
            }
        }
    }
}

fn interleaved_stats<G: Adjacency>(
    g: &G,
    starts: &StartSampler<'_>,
    range: std::ops::Range<usize>,
    seed: u64,
) -> LengthStats {
    let mut stats = LengthStats::default();
    let mut next_index = range.start;
    let mut lanes: Vec<Lane> = Vec::with_capacity(LANES);
    while lanes.len() < LANES && next_index < range.end {
        lanes.push(Lane::new(g, starts, seed, next_index));
        next_index += 1;
    }
    while !lanes.is_empty() {
        let mut i = 0;
        while i < lanes.len() {
            if let Some(length) = lanes[i].advance(g) {
                stats.push(length);
                if next_index < range.end {
                    lanes[i].restart(g, starts, seed, next_index);
                    next_index += 1;
                } else {
                    lanes.swap_remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }
    stats
}

/// The null graph a random-walk-modularity estimate compares against.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullModel {
    /// Configuration-model samples with loops and parallel edges swapped out,
    /// see [`sample_simple_configuration`].
    #[default]
    Configuration,
    /// Raw stub matching with loops and parallel edges kept.
    ConfigurationMulti,
    /// The graph itself, walked with independent seeds. Useful as a
    /// calibration check: the expected modularity is exactly zero.
    Identity,
}

impl std::str::FromStr for NullModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "configuration" => Ok(NullModel::Configuration),
            "configuration-multi" => Ok(NullModel::ConfigurationMulti),
            "identity" => Ok(NullModel::Identity),
            other => Err(Error::invalid(format!("unknown null model {other:?}"))),
        }
    }
}

impl fmt::Display for NullModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NullModel::Configuration => "configuration",
            NullModel::ConfigurationMulti => "configuration-multi",
            NullModel::Identity => "identity",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RwmConfig {
    pub walks: usize,
    pub null_samples: usize,
    pub policy: StartPolicy,
    pub null_model: NullModel,
}

impl RwmConfig {
    /// `max(10 n, 10^4)` walks per graph and three null samples.
    pub fn for_graph(g: &Graph) -> Self {
        RwmConfig {
            walks: default_walks(g.node_count()),
            null_samples: 3,
            policy: StartPolicy::Uniform,
            null_model: NullModel::Configuration,
        }
    }
}

pub fn default_walks(node_count: usize) -> usize {
    (10 * node_count).max(10_000)
}

/// Random walk modularity `1 - L(G) / L(G_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RwmEstimate {
    pub q: f64,
    pub l_g: RwlEstimate,
    pub l_gr: RwlEstimate,
    pub null_samples: usize,
}

impl RwmEstimate {
    fn from_parts(l_g: RwlEstimate, l_gr: RwlEstimate, null_samples: usize) -> Self {
        RwmEstimate { q: 1.0 - l_g.mean_length / l_gr.mean_length, l_g, l_gr, null_samples }
    }

    /// Delta-method standard error of `q`, treating the two means as independent.
    pub fn std_error(&self) -> f64 {
        let ratio = self.l_g.mean_length / self.l_gr.mean_length;
        let rel_g = self.l_g.std_error / self.l_g.mean_length;
        let rel_r = self.l_gr.std_error / self.l_gr.mean_length;
        ratio * (rel_g * rel_g + rel_r * rel_r).sqrt()
    }
}

pub fn random_walk_modularity(g: &Graph, config: &RwmConfig, seed: u64) -> Result<RwmEstimate> {
    if config.null_samples == 0 {
        return Err(Error::invalid("at least one null sample is required"));
    }
    let l_g = average_rwl(g, config.policy, config.walks, derive_seed(seed, domain::GRAPH_WALKS))?;

    let graph_seeds = derive_seed(seed, domain::NULL_GRAPHS);
    let walk_seeds = derive_seed(seed, domain::NULL_WALKS);
    let mut pooled = LengthStats::default();
    for k in 0..config.null_samples as u64 {
        let walk_seed = derive_seed(walk_seeds, k);
        let stats = match config.null_model {
            NullModel::Configuration => {
                let null = sample_simple_configuration(g, derive_seed(graph_seeds, k))?;
                ring_length_stats(&null, config.policy, config.walks, walk_seed)?
            }
            NullModel::ConfigurationMulti => {
                let null = sample_configuration(g, derive_seed(graph_seeds, k))?;
                ring_length_stats(&null, config.policy, config.walks, walk_seed)?
            }
            NullModel::Identity => ring_length_stats(g, config.policy, config.walks, walk_seed)?,
        };
        pooled = pooled.merge(stats);
    }
    Ok(RwmEstimate::from_parts(l_g, RwlEstimate::from_stats(pooled), config.null_samples))
}
