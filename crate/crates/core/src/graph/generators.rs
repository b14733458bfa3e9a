use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Adjacency, Graph, MultiGraph, NodeId, Partition};
use crate::error::{Error, Result};
use crate::seed::task_rng;

/// Erdős–Rényi G(n, p). Pairs are visited with geometric skips, so the cost is
/// proportional to the number of edges produced rather than to n².
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::invalid("ER graph needs at least one node"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} outside [0, 1]")));
    }
    if p == 0.0 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        return Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))));
    }

    let mut rng = task_rng(seed);
    let log_q = (1.0 - p).ln();
    let mut edges = Vec::new();
    // Row v holds candidate partners w < v, enumerated in lexicographic order.
    let (mut v, mut w): (usize, i64) = (1, -1);
    while v < n {
        let r: f64 = rng.random();
        let skip = ((1.0 - r).ln() / log_q).floor();
        w += 1 + skip as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    Graph::from_edges(n, edges)
}

/// Parameters of the planted l-partition benchmark.
///
/// Every node expects `avg_degree` neighbors, a fraction `mix` of them outside
/// its own group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub n: usize,
    pub groups: usize,
    pub avg_degree: f64,
    pub mix: f64,
}

impl PlantedSpec {
    pub fn new(n: usize, groups: usize, avg_degree: f64, mix: f64) -> Result<Self> {
        let spec = PlantedSpec { n, groups, avg_degree, mix };
        spec.validate()?;
        Ok(spec)
    }

    /// The 128-node, 4-group benchmark with expected degree 16.
    pub fn newman(mix: f64) -> Result<Self> {
        Self::new(128, 4, 16.0, mix)
    }

    pub fn group_size(&self) -> usize {
        self.n / self.groups
    }

    pub fn z_out(&self) -> f64 {
        self.mix * self.avg_degree
    }

    pub fn z_in(&self) -> f64 {
        self.avg_degree - self.z_out()
    }

    pub fn p_in(&self) -> f64 {
        let size = self.group_size();
        if size <= 1 {
            0.0
        } else {
            self.z_in() / (size - 1) as f64
        }
    }

    pub fn p_out(&self) -> f64 {
        let outside = self.n - self.group_size();
        if outside == 0 {
            0.0
        } else {
            self.z_out() / outside as f64
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.groups == 0 || self.n == 0 || !self.n.is_multiple_of(self.groups) {
            return Err(Error::invalid(format!(
                "{} nodes cannot be split into {} equal groups",
                self.n, self.groups
            )));
        }
        if !(0.0..=1.0).contains(&self.mix) {
            return Err(Error::invalid(format!("mix {} outside [0, 1]", self.mix)));
        }
        if !self.avg_degree.is_finite() || self.avg_degree < 0.0 {
            return Err(Error::invalid(format!("average degree {} is invalid", self.avg_degree)));
        }
        let size = self.group_size();
        if self.z_in() > 0.0 && size <= 1 {
            return Err(Error::invalid("groups of one node cannot hold internal edges"));
        }
        if self.z_out() > 0.0 && self.groups == 1 {
            return Err(Error::invalid("a single group cannot hold external edges"));
        }
        for (name, p) in [("internal", self.p_in()), ("external", self.p_out())] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("derived {name} edge probability {p} exceeds 1")));
            }
        }
        Ok(())
    }

    /// Ground truth: node `v` belongs to group `v / group_size`.
    pub fn ground_truth(&self) -> Partition {
        let size = self.group_size();
        Partition::from_labels(&(0..self.n).map(|v| v / size).collect::<Vec<_>>())
    }
}

/// Planted partition graph with independent Bernoulli edges.
pub fn gen_planted(spec: &PlantedSpec, seed: u64) -> Result<(Graph, Partition)> {
    spec.validate()?;
    let mut rng = task_rng(seed);
    let size = spec.group_size();
    let (p_in, p_out) = (spec.p_in(), spec.p_out());
    let mut edges = Vec::new();
    for u in 0..spec.n {
        for v in u + 1..spec.n {
            let p = if u / size == v / size { p_in } else { p_out };
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Ok((Graph::from_edges(spec.n, edges)?, spec.ground_truth()))
}

/// Cycle on `n` nodes.
pub fn gen_ring(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::invalid("a ring needs at least 3 nodes"));
    }
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
}

/// Complete `children`-ary tree filled breadth first and cut off at `n` nodes.
pub fn gen_tree(n: usize, children: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::invalid("a tree needs at least 2 nodes"));
    }
    if children == 0 {
        return Err(Error::invalid("tree nodes need at least one child"));
    }
    Graph::from_edges(n, (1..n).map(|v| ((v - 1) / children, v)))
}

/// Non-periodic `rows` x `cols` grid; node `(r, c)` has id `r * cols + c`.
pub fn gen_lattice(rows: usize, cols: usize) -> Result<Graph> {
    if rows < 2 || cols < 2 {
        return Err(Error::invalid("a lattice needs at least 2 rows and 2 columns"));
    }
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Graph::from_edges(rows * cols, edges)
}

const REGULAR_MAX_RESTARTS: usize = 1000;
const REGULAR_BLIND_TRIES: usize = 64;

/// Random simple `d`-regular graph.
///
/// Stubs are paired one random pair at a time; a pair that would form a loop or
/// a parallel edge is rejected and redrawn. When no admissible pair remains the
/// whole construction restarts.
pub fn gen_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d >= n {
        return Err(Error::invalid(format!("degree {d} must be below node count {n}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(Error::invalid(format!("n * d = {} must be even", n * d)));
    }
    let mut rng = task_rng(seed);
    for _ in 0..REGULAR_MAX_RESTARTS {
        if let Some(edges) = try_pair_regular(n, d, &mut rng) {
            return Graph::from_edges(n, edges);
        }
    }
    Err(Error::NoConvergence(REGULAR_MAX_RESTARTS))
}

fn try_pair_regular<R: Rng>(n: usize, d: usize, rng: &mut R) -> Option<Vec<(NodeId, NodeId)>> {
    let mut stubs: Vec<NodeId> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut adjacent: Vec<Vec<NodeId>> = vec![Vec::with_capacity(d); n];
    let mut edges = Vec::with_capacity(n * d / 2);
    let admissible = |adjacent: &[Vec<NodeId>], u: NodeId, v: NodeId| u != v && !adjacent[u].contains(&v);

    while !stubs.is_empty() {
        let mut chosen = None;
        for _ in 0..REGULAR_BLIND_TRIES {
            let i = rng.random_range(0..stubs.len());
            let j = rng.random_range(0..stubs.len());
            if i != j && admissible(&adjacent, stubs[i], stubs[j]) {
                chosen = Some((i, j));
                break;
            }
        }
        if chosen.is_none() {
            let mut candidates = Vec::new();
            for i in 0..stubs.len() {
                for j in i + 1..stubs.len() {
                    if admissible(&adjacent, stubs[i], stubs[j]) {
                        candidates.push((i, j));
                    }
                }
            }
            if candidates.is_empty() {
                return None;
            }
            chosen = Some(candidates[rng.random_range(0..candidates.len())]);
        }
        let (i, j) = chosen?;
        let (u, v) = (stubs[i], stubs[j]);
        adjacent[u].push(v);
        adjacent[v].push(u);
        edges.push((u, v));
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        stubs.swap_remove(hi);
        stubs.swap_remove(lo);
    }
    Some(edges)
}

/// Configuration-model null graph: a uniformly random perfect matching of the
/// degree stubs of `g`. Loops and parallel edges are kept so the degree
/// sequence is reproduced exactly.
pub fn sample_configuration<G: Adjacency>(g: &G, seed: u64) -> Result<MultiGraph> {
    if g.volume() == 0 {
        return Err(Error::NoEdges);
    }
    let mut stubs: Vec<NodeId> =
        (0..g.node_count()).flat_map(|v| std::iter::repeat_n(v, g.degree(v))).collect();
    stubs.shuffle(&mut task_rng(seed));
    MultiGraph::from_pairs(g.node_count(), stubs.chunks_exact(2).map(|pair| (pair[0], pair[1])))
}

const REPAIR_TRIES_PER_DEFECT: usize = 1000;

/// Configuration model without loops or parallel edges.
///
/// Stubs are matched uniformly as in [`sample_configuration`]; every loop or
/// repeated edge is then swapped against randomly chosen edges, `(a, b), (c, d)
/// -> (a, d), (c, b)`, until both replacements are new simple edges. Swaps keep
/// every degree, so the degree sequence of `g` is reproduced exactly. A defect
/// that cannot be repaired (possible only in near-complete graphs) is left in
/// place, which is why the result is still a [`MultiGraph`].
pub fn sample_simple_configuration<G: Adjacency>(g: &G, seed: u64) -> Result<MultiGraph> {
    if g.volume() == 0 {
        return Err(Error::NoEdges);
    }
    let n = g.node_count() as u64;
    let mut rng = task_rng(seed);
    let mut stubs: Vec<NodeId> =
        (0..g.node_count()).flat_map(|v| std::iter::repeat_n(v, g.degree(v))).collect();
    stubs.shuffle(&mut rng);
    let mut edges: Vec<(NodeId, NodeId)> = stubs.chunks_exact(2).map(|pair| (pair[0], pair[1])).collect();
    drop(stubs);

    let key = |u: NodeId, v: NodeId| {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        a as u64 * n + b as u64
    };
    let mut counts: rustc_hash::FxHashMap<u64, u32> = rustc_hash::FxHashMap::default();
    counts.reserve(edges.len());
    for &(u, v) in &edges {
        *counts.entry(key(u, v)).or_insert(0) += 1;
    }
    let defects: Vec<usize> = (0..edges.len())
        .filter(|&i| {
            let (u, v) = edges[i];
            u == v || counts[&key(u, v)] > 1
        })
        .collect();

    let m = edges.len();
    for i in defects {
        for _ in 0..REPAIR_TRIES_PER_DEFECT {
            let (a, b) = edges[i];
            if a != b && counts[&key(a, b)] == 1 {
                break;
            }
            let j = rng.random_range(0..m);
            if j == i {
                continue;
            }
            let (c, d) = if rng.random::<bool>() { edges[j] } else { (edges[j].1, edges[j].0) };
            let (first, second) = (key(a, d), key(c, b));
            if a == d || c == b || first == second || counts.contains_key(&first) || counts.contains_key(&second) {
                continue;
            }
            for old in [key(a, b), key(c, d)] {
                let slot = counts.get_mut(&old).expect("edge is counted");
                *slot -= 1;
                if *slot == 0 {
                    counts.remove(&old);
                }
            }
            counts.insert(first, 1);
            counts.insert(second, 1);
            edges[i] = (a, d);
            edges[j] = (c, b);
        }
    }
    MultiGraph::from_pairs(g.node_count(), edges)
}
