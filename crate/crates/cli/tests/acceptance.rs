//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

use rand::seq::SliceRandom;
use ringwalk::graph::{gen_er, gen_regular, Graph, NodeId, Partition};
use ringwalk::local::{sweep, SupportVector};
use ringwalk::quality::{greedy_newman, newman_modularity};
use ringwalk::seed::task_rng;
use ringwalk::walk::{average_rwl, expected_rwl_regular, random_walk_modularity, NullModel, RwmConfig, StartPolicy};
use ringwalk_cli::repro::{deterministic_table, er_grid, mean_se, mix_grid, spearman, sweep_er, sweep_planted, Measure, ReproConfig};

const SEED: u64 = 20240611;

type Check = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1 regular graph ring length", ac1_regular_ring_length),
        ("AC2 graph as its own null", ac2_self_null),
        ("AC3 flat RM on ER graphs", ac3_er_flat),
        ("AC4 ring/tree/lattice bands", ac4_deterministic_bands),
        ("AC5 ARL rises with mixing", ac5_arl_trend),
        ("AC6 planted community accuracy", ac6_accuracy),
        ("AC7 sweep vs brute force", ac7_sweep_oracle),
        ("AC8 modularity oracles", ac8_modularity_oracles),
        ("AC9 near-linear rwm scaling", ac9_scaling),
        ("AC10 single-thread determinism", ac10_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        let status = if pass { "PASS" } else { "FAIL" };
        println!("{status} {name}: {detail} [{:.1} s]", started.elapsed().as_secs_f64());
        failed += usize::from(!pass);
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ac1_regular_ring_length() -> Check {
    let started = Instant::now();
    let g = gen_regular(10_000, 16, SEED).map_err(err)?;
    let est = average_rwl(&g, StartPolicy::Uniform, 100_000, SEED).map_err(err)?;
    let secs = started.elapsed().as_secs_f64();
    let expected = expected_rwl_regular(16, 10_000);
    let rel = (est.mean_length - expected).abs() / expected;
    Ok((
        rel < 0.02 && secs < 10.0,
        format!("mean {:.4} vs {expected:.4}, rel err {rel:.4} (< 0.02), {secs:.2} s (< 10)", est.mean_length),
    ))
}

fn ac2_self_null() -> Check {
    let graphs = [
        ("er p=0.01", gen_er(1000, 0.01, SEED)),
        ("er p=0.02", gen_er(1000, 0.02, SEED + 1)),
        ("er p=0.05", gen_er(1000, 0.05, SEED + 2)),
        ("regular d=8", gen_regular(1000, 8, SEED + 3)),
        ("regular d=16", gen_regular(1000, 16, SEED + 4)),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, (name, g)) in graphs.into_iter().enumerate() {
        let g = g.map_err(err)?;
        let config = RwmConfig { null_model: NullModel::Identity, ..RwmConfig::for_graph(&g) };
        let est = random_walk_modularity(&g, &config, SEED + i as u64).map_err(err)?;
        let z = est.q.abs() / est.std_error();
        pass &= z < 3.0;
        parts.push(format!("{name} |q|/se={z:.2}"));
    }
    Ok((pass, format!("{} (each < 3)", parts.join(", "))))
}

fn ac3_er_flat() -> Check {
    let started = Instant::now();
    let sweep = sweep_er(&ReproConfig::new(SEED), 1000, &er_grid(), &[Measure::Rm]).map_err(err)?;
    let secs = started.elapsed().as_secs_f64();
    let worst = (0..sweep.points.len())
        .flat_map(|i| sweep.samples(i, Measure::Rm))
        .fold(0.0f64, |acc, q| acc.max(q.abs()));
    let means: Vec<String> = sweep.means(Measure::Rm).iter().map(|q| format!("{q:.4}")).collect();
    Ok((
        worst < 0.05 && secs < 120.0,
        format!("max |q| over 200 graphs {worst:.4} (< 0.05), means [{}], {secs:.1} s (< 120)", means.join(" ")),
    ))
}

fn ac4_deterministic_bands() -> Check {
    let table = deterministic_table(&ReproConfig::new(SEED)).map_err(err)?;
    let value = |name: &str, k: usize| table.iter().find(|(n, _)| *n == name).map(|(_, v)| v[k]).expect("network in table");
    let (rm_ring, rm_tree, rm_lattice) = (value("ring", 0), value("tree", 0), value("lattice", 0));
    let (nm_ring, cm_ring) = (value("ring", 1), value("ring", 2));
    let pass = rm_ring < 0.05 && rm_tree < 0.05 && rm_lattice < 0.12 && nm_ring >= 0.85 && cm_ring >= 0.85;
    Ok((
        pass,
        format!(
            "RM ring {rm_ring:.4} (< 0.05), tree {rm_tree:.4} (< 0.05), lattice {rm_lattice:.4} (< 0.12); \
             NM ring {nm_ring:.4} (>= 0.85); CM ring {cm_ring:.4} (>= 0.85)"
        ),
    ))
}

fn ac5_arl_trend() -> Check {
    let sweep = sweep_planted(&ReproConfig::new(SEED), &mix_grid(), &[Measure::Arl]).map_err(err)?;
    let means = sweep.means(Measure::Arl);
    let increasing = means.windows(2).all(|w| w[1] > w[0]);
    let (xs, ys) = sweep.pairs(Measure::Arl);
    let rho = spearman(&xs, &ys);
    let text: Vec<String> = means.iter().map(|m| format!("{m:.3}")).collect();
    Ok((
        increasing && rho > 0.9,
        format!("means [{}] strictly increasing: {increasing}; spearman over 180 graphs {rho:.4} (> 0.9)", text.join(" ")),
    ))
}

fn ac6_accuracy() -> Check {
    let started = Instant::now();
    let config = ReproConfig { community_walks: 1000, ..ReproConfig::new(SEED) };
    let sweep = sweep_planted(&config, &mix_grid(), &[Measure::Similarity]).map_err(err)?;
    let secs = started.elapsed().as_secs_f64();
    let means = sweep.means(Measure::Similarity);
    let low_mix_ok = sweep.points.iter().zip(&means).filter(|(p, _)| p.x <= 0.2 + 1e-12).all(|(_, &m)| m >= 0.85);
    let non_increasing = means.windows(2).all(|w| w[1] <= w[0]);
    let text: Vec<String> = sweep
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (m, se) = mean_se(&sweep.samples(i, Measure::Similarity));
            format!("{}:{m:.3}±{se:.3}", p.x)
        })
        .collect();
    Ok((
        low_mix_ok && non_increasing && secs < 300.0,
        format!(
            "{}; >= 0.85 up to mix 0.2: {low_mix_ok}; non-increasing: {non_increasing}; {secs:.1} s (< 300)",
            text.join(" ")
        ),
    ))
}

/// Conductance straight from the edge list.
fn brute_conductance(n: usize, edges: &[(NodeId, NodeId)], set: &[NodeId]) -> f64 {
    let mut inside = vec![false; n];
    for &v in set {
        inside[v] = true;
    }
    let (mut cut, mut vol, mut total) = (0usize, 0usize, 0usize);
    for &(u, v) in edges {
        total += 2;
        vol += usize::from(inside[u]) + usize::from(inside[v]);
        cut += usize::from(inside[u] != inside[v]);
    }
    let denom = vol.min(total - vol);
    if denom == 0 {
        1.0
    } else {
        cut as f64 / denom as f64
    }
}

fn ac7_sweep_oracle() -> Check {
    let mut worst = 0.0f64;
    let mut prefixes = 0;
    for i in 0..200u64 {
        let mut rng = task_rng(SEED ^ i);
        let n = 1 + (i % 12) as usize;
        let p = [0.15, 0.3, 0.5, 0.8][(i / 12 % 4) as usize];
        let g = gen_er(n, p, SEED + i).map_err(err)?;
        let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
        let mut order: Vec<NodeId> = (0..n).collect();
        order.shuffle(&mut rng);
        let profile = sweep(&g, &SupportVector::from_order(&g, order.clone()).map_err(err)?);
        for (k, &phi) in profile.phi.iter().enumerate() {
            worst = worst.max((phi - brute_conductance(n, &edges, &order[..=k])).abs());
            prefixes += 1;
        }
    }
    Ok((worst <= 1e-12, format!("200 graphs, {prefixes} prefixes, max deviation {worst:e} (<= 1e-12)")))
}

/// Every set partition of `0..n` as label vectors.
fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn extend(labels: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if labels.len() == n {
            out.push(labels.clone());
            return;
        }
        let next = labels.iter().max().map_or(0, |&m| m + 1);
        for label in 0..=next {
            labels.push(label);
            extend(labels, n, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), n, &mut out);
    out
}

/// Greedy against the exhaustive optimum; `None` when the graph has no edges.
fn greedy_gap(g: &Graph, partitions: &[Vec<usize>]) -> Result<Option<f64>, String> {
    if g.edge_count() == 0 {
        return Ok(None);
    }
    let (_, q) = greedy_newman(g).map_err(err)?;
    let mut best = f64::NEG_INFINITY;
    for labels in partitions {
        best = best.max(newman_modularity(g, &Partition::from_labels(labels)).map_err(err)?);
    }
    Ok(Some(q - best))
}

fn ac8_modularity_oracles() -> Check {
    let triangle = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).map_err(err)?;
    let barbell = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).map_err(err)?;
    let hand = [
        ("one community", newman_modularity(&barbell, &Partition::single(6)).map_err(err)?, 0.0),
        ("two triangles", newman_modularity(&barbell, &Partition::from_labels(&[0, 0, 0, 1, 1, 1])).map_err(err)?, 5.0 / 14.0),
        ("triangle singletons", newman_modularity(&triangle, &Partition::singletons(3)).map_err(err)?, -1.0 / 3.0),
    ];
    let hand_dev = hand.iter().fold(0.0f64, |acc, (_, got, want)| acc.max((got - want).abs()));

    // Every labelled graph up to 5 nodes, then random graphs on 6 to 8 nodes.
    let mut worst_gap = f64::NEG_INFINITY;
    let mut graphs = 0;
    for n in 2..=5usize {
        let partitions = all_partitions(n);
        let pairs: Vec<(NodeId, NodeId)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 0u32..1 << pairs.len() {
            let edges = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e);
            let g = Graph::from_edges(n, edges).map_err(err)?;
            if let Some(gap) = greedy_gap(&g, &partitions)? {
                worst_gap = worst_gap.max(gap);
                graphs += 1;
            }
        }
    }
    for n in 6..=8usize {
        let partitions = all_partitions(n);
        for i in 0..60u64 {
            let g = gen_er(n, 0.2 + 0.1 * (i % 6) as f64, SEED + 1000 * n as u64 + i).map_err(err)?;
            if let Some(gap) = greedy_gap(&g, &partitions)? {
                worst_gap = worst_gap.max(gap);
                graphs += 1;
            }
        }
    }
    let values: Vec<String> = hand.iter().map(|(name, got, _)| format!("{name} {got:.5}")).collect();
    Ok((
        hand_dev <= 1e-12 && worst_gap <= 1e-12,
        format!(
            "{} (max dev {hand_dev:e} <= 1e-12); greedy minus optimum over {graphs} graphs at most {worst_gap:e} (<= 1e-12)",
            values.join(", ")
        ),
    ))
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ringwalk"))
}

fn run(args: &[&str]) -> Result<Output, String> {
    let out = binary().args(args).output().map_err(err)?;
    if !out.status.success() {
        return Err(format!("ringwalk {} failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr).trim()));
    }
    Ok(out)
}

fn ac9_scaling() -> Check {
    let mut times = Vec::new();
    for (n, edges) in [(10_000usize, "1e5"), (100_000, "1e6")] {
        let spec = format!("er:n={n},p={}", 20.0 / (n - 1) as f64);
        let started = Instant::now();
        run(&["rwm", "--gen", &spec, "--seed", "7"])?;
        times.push((edges, started.elapsed().as_secs_f64()));
    }
    let ratio = times[1].1 / times[0].1;
    Ok((
        ratio <= 15.0,
        format!("m={} {:.2} s, m={} {:.2} s, ratio {ratio:.2} (<= 15)", times[0].0, times[0].1, times[1].0, times[1].1),
    ))
}

fn scratch_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).expect("scratch directory");
    dir
}

fn ac10_determinism() -> Check {
    let dir = scratch_dir();
    let edges = dir.join("planted.txt");
    let edges_arg = edges.to_str().ok_or("non-utf8 scratch path")?;
    run(&["generate", "planted", "--output", edges_arg])?;

    let commands: Vec<Vec<&str>> = vec![
        vec!["generate", "er", "--n", "300", "--p", "0.03"],
        vec!["rwm", "--gen", "er:n=2000,p=0.005"],
        vec!["rwm", "--input", edges_arg, "--format", "json"],
        vec!["community", "--input", edges_arg, "--node", "5"],
        vec!["report", "--gen", "planted:mix=0.2"],
        vec!["repro", "fig-gl", "--reps", "2"],
        vec!["repro", "fig-accuracy", "--reps", "2"],
    ];
    let mut mismatched = Vec::new();
    for args in &commands {
        let mut full = vec!["--threads", "1"];
        full.extend(args);
        let (a, b) = (run(&full)?, run(&full)?);
        if a.stdout != b.stdout || a.stdout.is_empty() {
            mismatched.push(args.join(" "));
        }
    }

    let truth: Vec<Vec<u8>> = (0..2)
        .map(|k| {
            let path = dir.join(format!("truth{k}.txt"));
            let out = dir.join(format!("graph{k}.txt"));
            run(&[
                "--threads",
                "1",
                "generate",
                "planted",
                "--mix",
                "0.3",
                "--output",
                out.to_str().ok_or("non-utf8 scratch path")?,
                "--truth",
                path.to_str().ok_or("non-utf8 scratch path")?,
            ])?;
            let mut bytes = std::fs::read(out).map_err(err)?;
            bytes.extend(std::fs::read(path).map_err(err)?);
            Ok(bytes)
        })
        .collect::<Result<_, String>>()?;
    if truth[0] != truth[1] {
        mismatched.push("generate planted --output --truth".to_owned());
    }

    let total = commands.len() + 1;
    Ok((
        mismatched.is_empty(),
        if mismatched.is_empty() {
            format!("{total} invocations byte-identical across two runs")
        } else {
            format!("outputs differ for: {}", mismatched.join("; "))
        },
    ))
}
