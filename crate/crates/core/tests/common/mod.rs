#![allow(dead_code)]

use std::path::PathBuf;

use modbc::io::parse_graph_file;
use modbc::{Edge, Graph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> Graph {
    let bytes = std::fs::read(fixture_path(name)).expect("fixture readable");
    parse_graph_file(&bytes).expect("fixture parses")
}

/// Relabels arbitrary module tags to `0..k` in order of first appearance.
pub fn compact_modules(tags: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    tags.iter()
        .map(|t| match seen.iter().position(|s| s == t) {
            Some(i) => i,
            None => {
                seen.push(*t);
                seen.len() - 1
            }
        })
        .collect()
}

/// Random simple graph. Small integer weights make equal-length paths common.
pub fn random_graph(
    rng: &mut impl Rng,
    n: usize,
    edge_prob: f64,
    max_weight: u32,
    modules: usize,
) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(edge_prob) {
                edges.push(Edge::new(u, v, rng.random_range(1..=max_weight) as f64));
            }
        }
    }
    let tags: Vec<usize> = (0..n)
        .map(|_| rng.random_range(0..modules.max(1)))
        .collect();
    Graph::build(n, &edges, compact_modules(&tags)).expect("valid random graph")
}

pub fn seeded_graph(seed: u64, n: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = rng.random_range(0.2..0.9);
    let w = rng.random_range(1..=4);
    random_graph(&mut rng, n, p, w, 3)
}

prop_compose! {
    /// Graphs with 2..=max_n nodes, random modules and tie-heavy weights.
    pub fn arb_graph(max_n: usize)(
        n in 2..=max_n,
        seed in any::<u64>(),
    ) -> Graph {
        seeded_graph(seed, n)
    }
}

prop_compose! {
    /// Random trees with random positive real weights.
    pub fn arb_tree(max_n: usize)(
        n in 2..=max_n,
        seed in any::<u64>(),
    ) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges: Vec<Edge> = (1..n)
            .map(|v| Edge::new(rng.random_range(0..v), v, rng.random_range(0.1..10.0)))
            .collect();
        Graph::from_edges(n, &edges).expect("valid tree")
    }
}

pub fn rel_gap(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    modbc::centrality::max_abs_diff(a, b) / scale
}
