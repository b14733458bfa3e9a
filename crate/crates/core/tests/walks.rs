use proptest::prelude::*;
use ringwalk::graph::*;
use ringwalk::seed::walk_rng;
use ringwalk::walk::*;

/// Exact mean ring length on K_n. After `t - 1` transitions the trail holds `t`
/// distinct nodes, and the next step revisits with probability
/// `(t - 1) / (n - 1)`.
fn complete_graph_mean(n: usize) -> f64 {
    let q = (n - 1) as f64;
    let mut survive = 1.0;
    let mut mean = 0.0;
    for t in 2..=n {
        let close = (t - 1) as f64 / q;
        mean += (t - 1) as f64 * close * survive;
        survive *= 1.0 - close;
    }
    mean
}

fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

fn check_outcome<G: Adjacency>(g: &G, start: NodeId, out: &WalkOutcome) -> Result<(), TestCaseError> {
    let (last, body) = out.trail.split_last().unwrap();
    prop_assert_eq!(body[0], start);
    prop_assert!(body.windows(2).all(|w| g.neighbors(w[0]).contains(&w[1])));
    prop_assert!(g.neighbors(body[body.len() - 1]).contains(last));
    let mut sorted = body.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    prop_assert_eq!(sorted.len(), body.len());
    prop_assert!(body.contains(last));
    prop_assert_eq!(out.ring_length, (out.trail.len() - 2).max(1));
    prop_assert!(out.ring_length >= 1 && out.ring_length <= g.node_count());
    Ok(())
}

proptest! {
    #[test]
    fn trails_close_on_first_revisit(n in 2usize..40, p in 0.05f64..1.0, seed in any::<u64>()) {
        let g = gen_er(n, p, seed).unwrap();
        for (i, start) in g.active_nodes().into_iter().enumerate().take(10) {
            let out = walk_until_ring(&g, start, &mut walk_rng(seed, i as u64)).unwrap();
            check_outcome(&g, start, &out)?;
        }
    }

    #[test]
    fn multigraph_trails_close_on_first_revisit(n in 2usize..30, p in 0.1f64..1.0, seed in any::<u64>()) {
        let g = gen_er(n, p, seed).unwrap();
        prop_assume!(g.edge_count() > 0);
        let multi = sample_configuration(&g, seed).unwrap();
        for (i, start) in g.active_nodes().into_iter().enumerate().take(10) {
            let out = walk_until_ring(&multi, start, &mut walk_rng(seed, i as u64)).unwrap();
            check_outcome(&multi, start, &out)?;
        }
    }
}

#[test]
fn complete_graph_oracle() {
    assert!((complete_graph_mean(3) - 1.5).abs() < 1e-15);
    assert!((complete_graph_mean(5) - 2.21875).abs() < 1e-15);
    for n in [3, 5, 8, 20] {
        let est = average_rwl(&complete(n), StartPolicy::Uniform, 200_000, n as u64).unwrap();
        let exact = complete_graph_mean(n);
        assert!(
            (est.mean_length - exact).abs() < 3.0 * est.std_error,
            "K{n}: {} vs {exact} (se {})",
            est.mean_length,
            est.std_error
        );
    }
}

#[test]
fn triangle_mean() {
    let est = average_rwl(&complete(3), StartPolicy::Uniform, 100_000, 42).unwrap();
    assert!((est.mean_length - 1.5).abs() < 0.02);
}

#[test]
fn single_edge_is_deterministic() {
    let g = Graph::from_edges(2, [(0, 1)]).unwrap();
    let est = average_rwl(&g, StartPolicy::DegreeProportional, 500, 1).unwrap();
    assert_eq!(est.mean_length, 1.0);
    assert_eq!(est.std_error, 0.0);
}

#[test]
fn er_length_grows_with_density() {
    let means: Vec<f64> = [0.01, 0.03, 0.06, 0.1]
        .iter()
        .map(|&p| {
            let g = gen_er(1000, p, 3).unwrap();
            average_rwl(&g, StartPolicy::Uniform, 20_000, 3).unwrap().mean_length
        })
        .collect();
    assert!(means.windows(2).all(|w| w[0] < w[1]), "{means:?}");
}

#[test]
fn estimates_are_deterministic() {
    let g = gen_er(2000, 0.004, 8).unwrap();
    let a = average_rwl(&g, StartPolicy::Uniform, 30_000, 99).unwrap();
    let b = average_rwl(&g, StartPolicy::Uniform, 30_000, 99).unwrap();
    assert_eq!(a, b);
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let c = single.install(|| average_rwl(&g, StartPolicy::Uniform, 30_000, 99)).unwrap();
    assert_eq!(a, c);
}

#[test]
fn q_matches_its_components_exactly() {
    let g = gen_er(500, 0.02, 4).unwrap();
    let config = RwmConfig { walks: 20_000, ..RwmConfig::for_graph(&g) };
    let est = random_walk_modularity(&g, &config, 11).unwrap();
    assert_eq!(est.q.to_bits(), (1.0 - est.l_g.mean_length / est.l_gr.mean_length).to_bits());
    assert!(est.q < 1.0);
    assert_eq!(est.l_gr.walk_count, 3 * 20_000);
}

#[test]
fn relabeling_does_not_shift_the_mean() {
    let g = gen_er(800, 0.01, 6).unwrap();
    let n = g.node_count();
    // gcd(7, 800) = 1, so this is a bijection.
    let perm: Vec<NodeId> = (0..n).map(|v| (v * 7 + 3) % n).collect();
    let mut seen = perm.clone();
    seen.sort_unstable();
    assert_eq!(seen, (0..n).collect::<Vec<_>>());
    let h = Graph::from_edges(n, g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap();
    let a = average_rwl(&g, StartPolicy::Uniform, 100_000, 1).unwrap();
    let b = average_rwl(&h, StartPolicy::Uniform, 100_000, 1).unwrap();
    let se = a.std_error.hypot(b.std_error);
    assert!((a.mean_length - b.mean_length).abs() < 4.0 * se);
}

#[test]
fn identity_null_is_near_zero() {
    let g = gen_regular(1000, 6, 2).unwrap();
    let config = RwmConfig { null_model: NullModel::Identity, ..RwmConfig::for_graph(&g) };
    let est = random_walk_modularity(&g, &config, 5).unwrap();
    assert!(est.q.abs() < 3.0 * est.std_error(), "q {} se {}", est.q, est.std_error());
}

#[test]
fn closed_form_values() {
    assert_eq!(expected_rwl_regular(1, 50), 1.0);
    assert!((expected_rwl_regular(16, 128) - (16.0 - 144.0 * (15.0f64 / 16.0).powi(128))).abs() < 1e-12);
    assert!((expected_rwl_regular(2, 1000) - 2.0).abs() < 1e-9);
}

#[test]
fn isolated_and_empty_inputs_fail() {
    let g = Graph::from_edges(3, [(0, 1)]).unwrap();
    assert!(walk_until_ring(&g, 2, &mut walk_rng(0, 0)).is_err());
    assert!(average_rwl(&Graph::empty(4), StartPolicy::Uniform, 10, 0).is_err());
    assert!(average_rwl(&g, StartPolicy::Uniform, 0, 0).is_err());
}
