//! Synthetic benchmark recipes: parameter sweeps over ER and planted graphs,
//! and the deterministic-network table.

use clap::ValueEnum;
use ringwalk::graph::{gen_er, gen_lattice, gen_planted, gen_ring, gen_tree, Adjacency, Graph, NodeId, Partition, PlantedSpec};
use ringwalk::quality::{
    best_match_score, conductance_modularity, greedy_newman, profile_seeds, seeded_communities,
};
use ringwalk::seed::{derive_seed, domain};
use ringwalk::walk::{average_rwl, default_walks, random_walk_modularity, RwmConfig, StartPolicy};

use crate::args::{Experiment, ReproArgs};
use crate::error::CliError;
use crate::output::{Cell, Report};

/// Node count of the ER sweeps.
pub const ER_NODES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ReproConfig {
    pub seed: u64,
    pub reps: usize,
    pub walks: Option<usize>,
    pub null_samples: usize,
    pub community_walks: usize,
    pub seeds_sample: Option<usize>,
}

impl ReproConfig {
    pub fn new(seed: u64) -> Self {
        ReproConfig {
            seed,
            reps: 20,
            walks: None,
            null_samples: 3,
            community_walks: ringwalk::local::DEFAULT_WALKS,
            seeds_sample: None,
        }
    }

    fn from_args(args: &ReproArgs, seed: u64) -> Self {
        ReproConfig {
            seed,
            reps: args.reps,
            walks: args.walks,
            null_samples: args.null_samples,
            community_walks: args.community_walks,
            seeds_sample: args.seeds_sample,
        }
    }

    fn rwm_config(&self, g: &Graph) -> RwmConfig {
        RwmConfig {
            walks: self.walks.unwrap_or_else(|| default_walks(g.node_count())),
            null_samples: self.null_samples,
            ..RwmConfig::for_graph(g)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Mean ring length on the graph itself.
    Arl,
    Rm,
    Nm,
    Cm,
    /// Best-match similarity of the seeded communities to the planted groups.
    Similarity,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Arl => "ARL",
            Measure::Rm => "RM",
            Measure::Nm => "NM",
            Measure::Cm => "CM",
            Measure::Similarity => "similarity",
        }
    }
}

/// Measurements at one grid value: `values[rep][measure]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub x: f64,
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub x_name: &'static str,
    pub measures: Vec<Measure>,
    pub points: Vec<Point>,
}

impl Sweep {
    /// Every repetition's value of `measure` at point `index`.
    pub fn samples(&self, index: usize, measure: Measure) -> Vec<f64> {
        let m = self.measures.iter().position(|&x| x == measure).expect("measure was swept");
        self.points[index].values.iter().map(|rep| rep[m]).collect()
    }

    pub fn means(&self, measure: Measure) -> Vec<f64> {
        (0..self.points.len()).map(|i| mean_se(&self.samples(i, measure)).0).collect()
    }

    /// All `(x, value)` pairs for one measure, one per graph.
    pub fn pairs(&self, measure: Measure) -> (Vec<f64>, Vec<f64>) {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (i, point) in self.points.iter().enumerate() {
            for y in self.samples(i, measure) {
                xs.push(point.x);
                ys.push(y);
            }
        }
        (xs, ys)
    }
}

/// `p = 0.01, 0.02, ..., 0.1`.
pub fn er_grid() -> Vec<f64> {
    (1..=10).map(|k| k as f64 / 100.0).collect()
}

/// `mix = 0.05, 0.10, ..., 0.45`.
pub fn mix_grid() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 20.0).collect()
}

pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// 1-based ranks with ties sharing their average rank.
fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation: Pearson correlation of the ranks.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut cov = 0.0;
    let (mut vx, mut vy) = (0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        cov += (a - mx) * (b - my);
        vx += (a - mx).powi(2);
        vy += (b - my).powi(2);
    }
    cov / (vx * vy).sqrt()
}

fn measure_graph(
    g: &Graph,
    truth: Option<&Partition>,
    measures: &[Measure],
    config: &ReproConfig,
    seed: u64,
) -> Result<Vec<f64>, CliError> {
    let rwm = if measures.contains(&Measure::Rm) {
        Some(random_walk_modularity(g, &config.rwm_config(g), seed)?)
    } else {
        None
    };
    let communities = if measures.iter().any(|m| matches!(m, Measure::Cm | Measure::Similarity)) {
        let seeds = profile_seeds(g, config.seeds_sample, seed);
        seeded_communities(g, &seeds, config.community_walks, derive_seed(seed, domain::COMMUNITY))?
    } else {
        Vec::new()
    };
    measures
        .iter()
        .map(|m| {
            Ok(match m {
                Measure::Arl => match &rwm {
                    Some(est) => est.l_g.mean_length,
                    None => {
                        let walks = config.rwm_config(g).walks;
                        average_rwl(g, StartPolicy::Uniform, walks, derive_seed(seed, domain::GRAPH_WALKS))?.mean_length
                    }
                },
                Measure::Rm => rwm.as_ref().map(|est| est.q).expect("computed above"),
                Measure::Nm => greedy_newman(g)?.1,
                Measure::Cm => {
                    let values: Vec<f64> = communities.iter().map(|c| c.conductance).collect();
                    conductance_modularity(&values)?
                }
                Measure::Similarity => {
                    let truth = truth.ok_or_else(|| CliError::usage("similarity needs a planted graph"))?;
                    let found: Vec<Vec<NodeId>> = communities.iter().map(|c| c.members.clone()).collect();
                    best_match_score(&truth.groups(), &found)?
                }
            })
        })
        .collect()
}

/// Seed of repetition `rep` at grid index `point`.
fn rep_seed(master: u64, point: usize, rep: usize) -> u64 {
    derive_seed(master, ((point as u64) << 32) | rep as u64)
}

fn sweep<F>(x_name: &'static str, grid: &[f64], measures: &[Measure], config: &ReproConfig, build: F) -> Result<Sweep, CliError>
where
    F: Fn(f64, u64) -> Result<(Graph, Option<Partition>), CliError>,
{
    let mut points = Vec::with_capacity(grid.len());
    for (k, &x) in grid.iter().enumerate() {
        let mut values = Vec::with_capacity(config.reps);
        for rep in 0..config.reps {
            let seed = rep_seed(config.seed, k, rep);
            let (g, truth) = build(x, derive_seed(seed, domain::GENERATOR))?;
            values.push(measure_graph(&g, truth.as_ref(), measures, config, seed)?);
        }
        points.push(Point { x, values });
    }
    Ok(Sweep { x_name, measures: measures.to_vec(), points })
}

/// ER graphs on `n` nodes at each edge probability in `grid`.
pub fn sweep_er(config: &ReproConfig, n: usize, grid: &[f64], measures: &[Measure]) -> Result<Sweep, CliError> {
    sweep("p", grid, measures, config, |p, seed| Ok((gen_er(n, p, seed)?, None)))
}

/// 128-node, 4-group planted graphs of average degree 16 at each mix in `grid`.
pub fn sweep_planted(config: &ReproConfig, grid: &[f64], measures: &[Measure]) -> Result<Sweep, CliError> {
    sweep("mix", grid, measures, config, |mix, seed| {
        let (g, truth) = gen_planted(&PlantedSpec::newman(mix)?, seed)?;
        Ok((g, Some(truth)))
    })
}

/// RM, NM and CM for the ring, tree and lattice, in that order.
pub fn deterministic_table(config: &ReproConfig) -> Result<Vec<(&'static str, Vec<f64>)>, CliError> {
    let networks = [("ring", gen_ring(1000)?), ("tree", gen_tree(1000, 2)?), ("lattice", gen_lattice(100, 100)?)];
    let measures = [Measure::Rm, Measure::Nm, Measure::Cm];
    networks
        .iter()
        .enumerate()
        .map(|(i, (name, g))| Ok((*name, measure_graph(g, None, &measures, config, derive_seed(config.seed, i as u64))?)))
        .collect()
}

fn sweep_report(report: &mut Report, sweep: &Sweep, ceiling: bool) {
    let mut columns = vec![sweep.x_name.to_owned(), "reps".to_owned()];
    for m in &sweep.measures {
        columns.push(format!("{}_mean", m.name()));
        columns.push(format!("{}_se", m.name()));
    }
    if ceiling {
        columns.push("ceiling".to_owned());
    }
    report.columns = columns;
    for (i, point) in sweep.points.iter().enumerate() {
        let mut row: Vec<Cell> = vec![point.x.into(), point.values.len().into()];
        for &m in &sweep.measures {
            let (mean, se) = mean_se(&sweep.samples(i, m));
            row.push(mean.into());
            row.push(se.into());
        }
        if ceiling {
            row.push(1.0.into());
        }
        report.rows.push(row);
    }
}

fn grid_text(grid: &[f64]) -> String {
    grid.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

pub fn run(args: &ReproArgs, seed: u64) -> Result<Report, CliError> {
    let config = ReproConfig::from_args(args, seed);
    if config.reps == 0 {
        return Err(CliError::usage("--reps must be at least 1"));
    }
    let name = args.experiment.to_possible_value().expect("no experiment is hidden");
    let name = name.get_name();
    let mut report = Report::new(&format!("repro {name}"));
    report
        .config("seed", seed)
        .config("reps", config.reps)
        .config("walks", config.walks.map_or("default".to_owned(), |w| w.to_string()))
        .config("null_samples", config.null_samples)
        .config("community_walks", config.community_walks)
        .config("seeds_sample", config.seeds_sample.map_or("default".to_owned(), |k| k.to_string()));
    let modularity = [Measure::Rm, Measure::Nm, Measure::Cm];
    match args.experiment {
        Experiment::FigEr | Experiment::FigErMod => {
            let measures: &[Measure] = if args.experiment == Experiment::FigEr { &[Measure::Arl] } else { &modularity };
            report.config("graph", format!("er n={ER_NODES}")).config("grid", grid_text(&er_grid()));
            let sweep = sweep_er(&config, ER_NODES, &er_grid(), measures)?;
            sweep_report(&mut report, &sweep, false);
        }
        Experiment::FigGl | Experiment::FigGlMod => {
            let measures: &[Measure] = if args.experiment == Experiment::FigGl { &[Measure::Arl] } else { &modularity };
            report.config("graph", "planted n=128 groups=4 deg=16").config("grid", grid_text(&mix_grid()));
            let sweep = sweep_planted(&config, &mix_grid(), measures)?;
            if args.experiment == Experiment::FigGl {
                let (xs, ys) = sweep.pairs(Measure::Arl);
                report.summary("spearman_ARL_mix", spearman(&xs, &ys));
            }
            sweep_report(&mut report, &sweep, false);
        }
        Experiment::FigAccuracy => {
            report.config("graph", "planted n=128 groups=4 deg=16").config("grid", grid_text(&mix_grid()));
            let sweep = sweep_planted(&config, &mix_grid(), &[Measure::Similarity])?;
            sweep_report(&mut report, &sweep, true);
        }
        Experiment::TableDeterministic => {
            report.config("graphs", "ring n=1000, tree n=1000 children=2, lattice 100x100");
            let table = deterministic_table(&config)?;
            let mut columns = vec!["measure"];
            columns.extend(table.iter().map(|(name, _)| *name));
            report.columns(&columns);
            for (m, label) in ["RandomWalk", "Newman", "Conductance"].iter().enumerate() {
                let mut row: Vec<Cell> = vec![(*label).into()];
                row.extend(table.iter().map(|(_, values)| Cell::from(values[m])));
                report.row(row);
            }
        }
    }
    Ok(report)
}
