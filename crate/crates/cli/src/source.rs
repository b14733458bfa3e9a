//! Where a command's graph comes from: an edge-list file or a generator spec
//! such as `ring:n=1000` or `planted:n=128,groups=4,deg=16,mix=0.1`.

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use ringwalk::graph::{
    gen_er, gen_lattice, gen_planted, gen_regular, gen_ring, gen_tree, load_edge_list, Adjacency, Graph, NodeId, Partition,
    PlantedSpec,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Ring,
    Tree,
    Lattice,
    Er,
    Planted,
    Regular,
}

impl GenKind {
    fn name(self) -> &'static str {
        match self {
            GenKind::Ring => "ring",
            GenKind::Tree => "tree",
            GenKind::Lattice => "lattice",
            GenKind::Er => "er",
            GenKind::Planted => "planted",
            GenKind::Regular => "regular",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            GenKind::Ring => &["n"],
            GenKind::Tree => &["n", "children"],
            GenKind::Lattice => &["rows", "cols"],
            GenKind::Er => &["n", "p", "seed"],
            GenKind::Planted => &["n", "groups", "deg", "mix", "seed"],
            GenKind::Regular => &["n", "deg", "seed"],
        }
    }
}

/// A generator and its parameters. Unset parameters take the defaults used by
/// the experiment recipes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenSpec {
    pub kind: Option<GenKind>,
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub groups: Option<usize>,
    pub deg: Option<f64>,
    pub mix: Option<f64>,
    pub children: Option<usize>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    /// Overrides the command's `--seed` for generation only.
    pub seed: Option<u64>,
}

pub struct Generated {
    pub graph: Graph,
    pub truth: Option<Partition>,
}

impl GenSpec {
    pub fn new(kind: GenKind) -> Self {
        GenSpec { kind: Some(kind), ..GenSpec::default() }
    }

    fn kind(&self) -> GenKind {
        self.kind.expect("generator kind is set on construction")
    }

    pub fn generate(&self, seed: u64) -> Result<Generated, CliError> {
        let seed = self.seed.unwrap_or(seed);
        let mut truth = None;
        let graph = match self.kind() {
            GenKind::Ring => gen_ring(self.n.unwrap_or(1000))?,
            GenKind::Tree => gen_tree(self.n.unwrap_or(1000), self.children.unwrap_or(2))?,
            GenKind::Lattice => gen_lattice(self.rows.unwrap_or(100), self.cols.unwrap_or(100))?,
            GenKind::Er => gen_er(self.n.unwrap_or(1000), self.p.unwrap_or(0.01), seed)?,
            GenKind::Regular => {
                let d = self.deg.unwrap_or(16.0);
                if d.fract() != 0.0 || d < 0.0 {
                    return Err(CliError::usage(format!("regular degree must be a whole number, got {d}")));
                }
                gen_regular(self.n.unwrap_or(1000), d as usize, seed)?
            }
            GenKind::Planted => {
                let spec = PlantedSpec::new(
                    self.n.unwrap_or(128),
                    self.groups.unwrap_or(4),
                    self.deg.unwrap_or(16.0),
                    self.mix.unwrap_or(0.1),
                )?;
                let (graph, part) = gen_planted(&spec, seed)?;
                truth = Some(part);
                graph
            }
        };
        Ok(Generated { graph, truth })
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().name())?;
        let mut parts = Vec::new();
        let mut push = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                parts.push(format!("{key}={v}"));
            }
        };
        push("n", self.n.map(|v| v.to_string()));
        push("p", self.p.map(|v| v.to_string()));
        push("groups", self.groups.map(|v| v.to_string()));
        push("deg", self.deg.map(|v| v.to_string()));
        push("mix", self.mix.map(|v| v.to_string()));
        push("children", self.children.map(|v| v.to_string()));
        push("rows", self.rows.map(|v| v.to_string()));
        push("cols", self.cols.map(|v| v.to_string()));
        push("seed", self.seed.map(|v| v.to_string()));
        if !parts.is_empty() {
            write!(f, ":{}", parts.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for GenSpec {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let (kind, params) = text.split_once(':').unwrap_or((text, ""));
        let kind = GenKind::from_str(kind, true)?;
        let mut spec = GenSpec::new(kind);
        for pair in params.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = pair.split_once('=').ok_or_else(|| format!("expected key=value, got {pair:?}"))?;
            if !kind.keys().contains(&key) {
                return Err(format!("{key:?} does not apply to {}; expected one of {:?}", kind.name(), kind.keys()));
            }
            let bad = || format!("invalid value {value:?} for {key}");
            match key {
                "n" => spec.n = Some(value.parse().map_err(|_| bad())?),
                "p" => spec.p = Some(value.parse().map_err(|_| bad())?),
                "groups" => spec.groups = Some(value.parse().map_err(|_| bad())?),
                "deg" => spec.deg = Some(value.parse().map_err(|_| bad())?),
                "mix" => spec.mix = Some(value.parse().map_err(|_| bad())?),
                "children" => spec.children = Some(value.parse().map_err(|_| bad())?),
                "rows" => spec.rows = Some(value.parse().map_err(|_| bad())?),
                "cols" => spec.cols = Some(value.parse().map_err(|_| bad())?),
                "seed" => spec.seed = Some(value.parse().map_err(|_| bad())?),
                _ => unreachable!("keys are checked above"),
            }
        }
        Ok(spec)
    }
}

/// A graph ready for analysis, with the ids to report results in.
pub struct Network {
    pub name: String,
    pub graph: Graph,
    /// Original id of each node for loaded files; generated graphs use their
    /// own node ids.
    pub labels: Option<Vec<u64>>,
    pub truth: Option<Partition>,
}

impl Network {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let file = File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let loaded = load_edge_list(BufReader::new(file))?;
        let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        Ok(Network { name, graph: loaded.graph, labels: Some(loaded.labels), truth: None })
    }

    pub fn generate(spec: &GenSpec, seed: u64) -> Result<Self, CliError> {
        let generated = spec.generate(seed)?;
        Ok(Network { name: spec.to_string(), graph: generated.graph, labels: None, truth: generated.truth })
    }

    pub fn label(&self, v: NodeId) -> u64 {
        self.labels.as_ref().map_or(v as u64, |labels| labels[v])
    }

    pub fn node(&self, label: u64) -> Option<NodeId> {
        match &self.labels {
            Some(labels) => labels.iter().position(|&l| l == label),
            None => usize::try_from(label).ok().filter(|&v| v < self.graph.node_count()),
        }
    }
}
