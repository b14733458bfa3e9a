use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use ringwalk::graph::{write_edge_list, Adjacency, Partition};
use ringwalk::local::search;
use ringwalk::quality::{full_report, ReportConfig};
use ringwalk::walk::{default_walks, random_walk_modularity, RwmConfig};

use crate::args::{CommunityArgs, GenerateArgs, GraphSource, ReportArgs, RwmArgs, WalkArgs};
use crate::error::CliError;
use crate::output::{Cell, Report};
use crate::source::Network;

/// Reading of random walk modularity: below 0.05 no community structure,
/// up to 0.1 weak, above that clear.
pub fn rm_band(q: f64) -> &'static str {
    if q < 0.05 {
        "none"
    } else if q < 0.1 {
        "weak"
    } else {
        "clear"
    }
}

/// Newman and conductance modularity read as clear structure at 0.3 and 0.5.
fn threshold_band(value: f64, clear: f64) -> &'static str {
    if value >= clear {
        "clear"
    } else {
        "unclear"
    }
}

pub fn load(source: &GraphSource, seed: u64) -> Result<Network, CliError> {
    match (&source.input, &source.generator) {
        (Some(path), None) => Network::load(path),
        (None, Some(spec)) => Network::generate(spec, seed),
        _ => Err(CliError::usage("exactly one of --input and --gen is required")),
    }
}

fn echo_source(report: &mut Report, source: &GraphSource) {
    match (&source.input, &source.generator) {
        (Some(path), _) => report.config("input", path.display()),
        (_, Some(spec)) => report.config("gen", spec),
        _ => report,
    };
}

fn rwm_config(net: &Network, args: &WalkArgs) -> RwmConfig {
    RwmConfig {
        walks: args.walks.unwrap_or_else(|| default_walks(net.graph.node_count())),
        null_samples: args.null_samples,
        policy: args.start,
        null_model: args.null,
    }
}

fn echo_walks(report: &mut Report, config: &RwmConfig) {
    report
        .config("walks", config.walks)
        .config("null_samples", config.null_samples)
        .config("start", config.policy)
        .config("null", config.null_model);
}

/// Writes the edge list, plus the ground truth for planted graphs, and
/// returns where the truth went.
pub fn generate(args: &GenerateArgs, seed: u64, output: Option<&Path>) -> Result<Option<PathBuf>, CliError> {
    let generated = args.spec().generate(seed)?;
    match output {
        Some(path) => write_edge_list(&generated.graph, BufWriter::new(create(path)?))?,
        None => write_edge_list(&generated.graph, std::io::stdout().lock())?,
    }
    let Some(truth) = generated.truth else { return Ok(None) };
    let truth_path = match (&args.truth, output) {
        (Some(path), _) => path.clone(),
        (None, Some(path)) => {
            let mut name = path.as_os_str().to_owned();
            name.push(".truth");
            PathBuf::from(name)
        }
        (None, None) => return Err(CliError::usage("planted graphs written to stdout need --truth PATH")),
    };
    write_truth(&truth, &truth_path)?;
    Ok(Some(truth_path))
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// One `node_id community_id` line per node.
fn write_truth(truth: &Partition, path: &Path) -> Result<(), CliError> {
    let mut out = BufWriter::new(create(path)?);
    for (v, c) in truth.assignment().iter().enumerate() {
        writeln!(out, "{v} {c}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn rwm(args: &RwmArgs, seed: u64) -> Result<Report, CliError> {
    let net = load(&args.source, seed)?;
    let config = rwm_config(&net, &args.walk);
    let started = Instant::now();
    let est = random_walk_modularity(&net.graph, &config, seed)?;
    let elapsed = started.elapsed().as_secs_f64();
    let walks = est.l_g.walk_count + est.l_gr.walk_count;
    // Timing varies between runs, so it stays out of the result file.
    eprintln!("rwm: {walks} walks in {elapsed:.3} s ({:.0} walks/s)", walks as f64 / elapsed);

    let mut report = Report::new("rwm");
    echo_source(&mut report, &args.source);
    report.config("seed", seed);
    echo_walks(&mut report, &config);
    report.columns(&["network", "nodes", "edges", "q", "q_se", "L_G", "L_G_se", "L_Gr", "L_Gr_se", "structure"]);
    report.row(vec![
        net.name.clone().into(),
        net.graph.node_count().into(),
        net.graph.edge_count().into(),
        est.q.into(),
        est.std_error().into(),
        est.l_g.mean_length.into(),
        est.l_g.std_error.into(),
        est.l_gr.mean_length.into(),
        est.l_gr.std_error.into(),
        rm_band(est.q).into(),
    ]);
    Ok(report)
}

pub fn community(args: &CommunityArgs, seed: u64) -> Result<Report, CliError> {
    let net = load(&args.source, seed)?;
    let node = net.node(args.node).ok_or_else(|| CliError::usage(format!("node {} is not in the graph", args.node)))?;
    let found = search(&net.graph, node, args.walks, seed, args.rank)?;
    let members: Vec<String> = found.community.members.iter().map(|&v| net.label(v).to_string()).collect();

    let mut report = Report::new("community");
    echo_source(&mut report, &args.source);
    report.config("seed", seed).config("node", args.node).config("rank", args.rank).config("walks", args.walks);
    report
        .summary("size", found.community.size())
        .summary("conductance", found.community.conductance)
        .summary("members", members.join(","));
    report.columns(&["index", "node", "phi", "local_minimum", "member"]);
    let cutoff = found.community.size();
    for (i, (&v, &phi)) in found.support.nodes().iter().zip(&found.profile.phi).enumerate() {
        let is_min = found.profile.local_minima.binary_search(&i).is_ok();
        report.row(vec![i.into(), net.label(v).into(), phi.into(), usize::from(is_min).into(), usize::from(i < cutoff).into()]);
    }
    Ok(report)
}

pub fn report(args: &ReportArgs, seed: u64) -> Result<Report, CliError> {
    let net = load(&args.source, seed)?;
    let config = ReportConfig {
        rwm: rwm_config(&net, &args.walk),
        community_walks: args.community_walks,
        seed_sample: args.seeds_sample,
        greedy_max_nodes: args.greedy_max_nodes,
    };
    let started = Instant::now();
    let row = full_report(&net.graph, &config, seed)?;
    eprintln!("report: {:.3} s", started.elapsed().as_secs_f64());

    let mut report = Report::new("report");
    echo_source(&mut report, &args.source);
    report.config("seed", seed);
    echo_walks(&mut report, &config.rwm);
    report
        .config("community_walks", config.community_walks)
        .config("seeds_sample", config.seed_sample.map_or("default".to_owned(), |k| k.to_string()))
        .config("greedy_max_nodes", config.greedy_max_nodes);
    report.summary("rm_structure", rm_band(row.rwm));
    if let Some(nm) = row.newman {
        report.summary("nm_structure", threshold_band(nm, 0.3));
    }
    report.summary("cm_structure", threshold_band(row.cm, 0.5));
    report.columns(&["network", "RM", "NM", "CM", "AvgC", "ARL", "AvgS"]);
    report.row(vec![
        net.name.clone().into(),
        row.rwm.into(),
        row.newman.map_or(Cell::Int(-1), Cell::Float),
        row.cm.into(),
        row.avg_conductance.into(),
        row.arl.into(),
        row.avg_size.into(),
    ]);
    Ok(report)
}
