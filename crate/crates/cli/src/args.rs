use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ringwalk::walk::{NullModel, StartPolicy};

use crate::output::Format;
use crate::source::{GenKind, GenSpec};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "ringwalk", version, about = "Community structure from ring-terminated random walks")]
pub struct Cli {
    /// Master seed; every random choice derives from it.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads (defaults to the number of CPUs). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,

    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic graph as an edge list.
    Generate(GenerateArgs),
    /// Estimate random walk modularity.
    Rwm(RwmArgs),
    /// Find the community around one seed node.
    Community(CommunityArgs),
    /// Compute the full statistics row (RM, NM, CM, AvgC, ARL, AvgS).
    Report(ReportArgs),
    /// Run a synthetic benchmark recipe.
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GraphSource {
    /// Edge-list file: two integer ids per line, '#' comments.
    #[arg(long, required_unless_present = "generator", conflicts_with = "generator")]
    pub input: Option<PathBuf>,

    /// Generator spec such as "ring:n=1000" or "planted:n=128,mix=0.1".
    #[arg(long = "gen", id = "generator", value_name = "SPEC")]
    pub generator: Option<GenSpec>,
}

#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    /// Walks per graph (default max(10 n, 10^4)).
    #[arg(long)]
    pub walks: Option<usize>,

    #[arg(long, default_value_t = 3)]
    pub null_samples: usize,

    #[arg(long, value_parser = parse_start, default_value = "uniform")]
    pub start: StartPolicy,

    #[arg(long, value_parser = parse_null, default_value = "configuration")]
    pub null: NullModel,
}

fn parse_start(s: &str) -> Result<StartPolicy, String> {
    s.parse().map_err(|e: ringwalk::Error| e.to_string())
}

fn parse_null(s: &str) -> Result<NullModel, String> {
    s.parse().map_err(|e: ringwalk::Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability (er).
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub groups: Option<usize>,
    /// Average degree (planted) or exact degree (regular).
    #[arg(long)]
    pub deg: Option<f64>,
    /// Fraction of each node's expected degree that leaves its group (planted).
    #[arg(long)]
    pub mix: Option<f64>,
    #[arg(long)]
    pub children: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Ground-truth file for planted graphs (default: OUTPUT.truth).
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

impl GenerateArgs {
    pub fn spec(&self) -> GenSpec {
        GenSpec {
            kind: Some(self.kind),
            n: self.n,
            p: self.p,
            groups: self.groups,
            deg: self.deg,
            mix: self.mix,
            children: self.children,
            rows: self.rows,
            cols: self.cols,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RwmArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[command(flatten)]
    pub walk: WalkArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommunityArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Seed node, as it appears in the input.
    #[arg(long)]
    pub node: u64,
    /// Which local minimum of the sweep to return, 0 being the first.
    #[arg(long, default_value_t = 0)]
    pub rank: usize,
    #[arg(long, default_value_t = ringwalk::local::DEFAULT_WALKS)]
    pub walks: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Walks per seed for the community profile.
    #[arg(long, default_value_t = ringwalk::local::DEFAULT_WALKS)]
    pub community_walks: usize,
    /// Profile this many sampled seeds (default: all nodes up to 10^5, else 10^4).
    #[arg(long)]
    pub seeds_sample: Option<usize>,
    /// Skip greedy Newman modularity above this many nodes.
    #[arg(long, default_value_t = ringwalk::quality::GREEDY_MAX_NODES)]
    pub greedy_max_nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    /// Mean ring length against p on ER graphs.
    FigEr,
    /// Mean ring length against mix on planted graphs.
    FigGl,
    /// RM, NM and CM against p on ER graphs.
    FigErMod,
    /// RM, NM and CM against mix on planted graphs.
    FigGlMod,
    /// RM, NM and CM on ring, tree and lattice.
    TableDeterministic,
    /// Best-match similarity against mix on planted graphs.
    FigAccuracy,
}

#[derive(Debug, Clone, Args)]
pub struct ReproArgs {
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// Graphs per grid point.
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    /// Walks per graph for ring-length estimates (default max(10 n, 10^4)).
    #[arg(long)]
    pub walks: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub null_samples: usize,
    #[arg(long, default_value_t = ringwalk::local::DEFAULT_WALKS)]
    pub community_walks: usize,
    /// Profile this many sampled seeds per graph for CM (default: all nodes).
    #[arg(long)]
    pub seeds_sample: Option<usize>,
}
