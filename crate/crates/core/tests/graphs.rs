use proptest::prelude::*;
use ringwalk::graph::*;

fn edge_list_text(pairs: &[(u64, u64)]) -> String {
    let mut text = String::from("# generated\n");
    for (u, v) in pairs {
        text.push_str(&format!("{u}\t{v}\n"));
    }
    text
}

proptest! {
    #[test]
    fn er_output_is_valid(n in 1usize..60, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = gen_er(n, p, seed).unwrap();
        prop_assert_eq!(g.node_count(), n);
        prop_assert!(g.validate().is_ok());
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn planted_output_is_valid(groups in 1usize..5, size in 4usize..20, mix in 0.0f64..0.6, seed in any::<u64>()) {
        let spec = PlantedSpec::new(groups * size, groups, 2.0, mix);
        prop_assume!(spec.is_ok());
        let (g, truth) = gen_planted(&spec.unwrap(), seed).unwrap();
        prop_assert!(g.validate().is_ok());
        for v in 0..g.node_count() {
            prop_assert_eq!(truth.community_of(v), v / size);
        }
    }

    #[test]
    fn deterministic_shapes_are_valid(n in 3usize..200, children in 1usize..5, rows in 2usize..12, cols in 2usize..12) {
        let ring = gen_ring(n).unwrap();
        prop_assert!(ring.validate().is_ok());
        prop_assert!(ring.degrees().iter().all(|&d| d == 2));
        let tree = gen_tree(n, children).unwrap();
        prop_assert!(tree.validate().is_ok());
        prop_assert_eq!(tree.edge_count(), n - 1);
        let grid = gen_lattice(rows, cols).unwrap();
        prop_assert!(grid.validate().is_ok());
        prop_assert_eq!(grid.edge_count(), rows * (cols - 1) + cols * (rows - 1));
    }

    #[test]
    fn regular_output_is_valid(half_n in 3usize..40, d in 1usize..6, seed in any::<u64>()) {
        let n = 2 * half_n;
        prop_assume!(d < n);
        let g = gen_regular(n, d, seed).unwrap();
        prop_assert!(g.validate().is_ok());
        prop_assert!(g.degrees().iter().all(|&x| x == d));
    }

    #[test]
    fn loaded_graph_is_valid(pairs in prop::collection::vec((0u64..30, 0u64..30), 1..80)) {
        let loaded = load_edge_list(edge_list_text(&pairs).as_bytes()).unwrap();
        let g = &loaded.graph;
        prop_assert!(g.validate().is_ok());
        for &(u, v) in &pairs {
            let a = loaded.labels.iter().position(|&x| x == u).unwrap();
            let b = loaded.labels.iter().position(|&x| x == v).unwrap();
            prop_assert_eq!(g.has_edge(a, b), u != v);
        }
    }

    #[test]
    fn configuration_preserves_degrees(n in 2usize..50, p in 0.05f64..0.8, seed in any::<u64>()) {
        let g = gen_er(n, p, seed).unwrap();
        prop_assume!(g.edge_count() > 0);
        let multi = sample_configuration(&g, seed ^ 1).unwrap();
        prop_assert!(multi.validate().is_ok());
        prop_assert_eq!(multi.degrees(), g.degrees());
        let simple = sample_simple_configuration(&g, seed ^ 2).unwrap();
        prop_assert!(simple.validate().is_ok());
        prop_assert_eq!(simple.degrees(), g.degrees());
    }
}

#[test]
fn generators_are_reproducible() {
    assert_eq!(gen_er(300, 0.05, 9).unwrap(), gen_er(300, 0.05, 9).unwrap());
    assert_ne!(gen_er(300, 0.05, 9).unwrap(), gen_er(300, 0.05, 10).unwrap());
    let spec = PlantedSpec::newman(0.2).unwrap();
    assert_eq!(gen_planted(&spec, 4).unwrap(), gen_planted(&spec, 4).unwrap());
    assert_eq!(gen_regular(100, 4, 2).unwrap(), gen_regular(100, 4, 2).unwrap());
    let g = gen_er(100, 0.1, 1).unwrap();
    assert_eq!(sample_configuration(&g, 3).unwrap(), sample_configuration(&g, 3).unwrap());
}

#[test]
fn edge_list_round_trip() {
    let g = gen_er(200, 0.03, 5).unwrap();
    let mut buf = Vec::new();
    write_edge_list(&g, &mut buf).unwrap();
    let back = load_edge_list(buf.as_slice()).unwrap();
    assert_eq!(back.graph.edge_count(), g.edge_count());
    for (u, v) in back.graph.edges() {
        assert!(g.has_edge(back.labels[u] as usize, back.labels[v] as usize));
    }
}
