//! Deterministic verification corpora: exhaustive labeled connected graphs
//! on few vertices, doubled-edge multigraph variants, and seeded random
//! connected multigraphs kept inside the enumeration cap.  Shared by the
//! test suites and the `verify` command.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::count::DEFAULT_ENUM_CAP;
use crate::graph::{MultiGraph, Vertex};

/// Every labeled connected simple graph on exactly `n` vertices, in
/// edge-bitmask order.  Sizes: 1, 1, 4, 38, 728, 26704 for n = 1..=6.
pub fn connected_simple_graphs(n: usize) -> Vec<MultiGraph> {
    assert!((1..=6).contains(&n), "exhaustive listing is for n <= 6");
    let pairs: Vec<(Vertex, Vertex)> = (1..=n)
        .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(Vertex, Vertex)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let g = MultiGraph::simple(n, &edges).expect("listed pairs are valid");
        if g.connected() {
            out.push(g);
        }
    }
    out
}

/// Multigraph corpus: all connected graphs on up to 4 vertices with every
/// edge doubled, plus the 5-vertex ones with their first edge doubled.
/// All stay within the default enumeration cap.
pub fn multiplicity2_corpus() -> Vec<MultiGraph> {
    let mut out = Vec::new();
    for n in 2..=4 {
        for g in connected_simple_graphs(n) {
            let doubled: Vec<(Vertex, Vertex, u64)> =
                g.edges().map(|(u, v, m)| (u, v, 2 * m)).collect();
            out.push(MultiGraph::build(n, &doubled).unwrap());
        }
    }
    for g in connected_simple_graphs(5) {
        let mut edges: Vec<(Vertex, Vertex, u64)> = g.edges().collect();
        edges[0].2 = 2;
        out.push(MultiGraph::build(5, &edges).unwrap());
    }
    out
}

/// One random connected multigraph: a random spanning tree plus extra
/// (possibly parallel) edges, capped at `max_instances` edge instances.
pub fn random_connected_graph(
    rng: &mut impl Rng,
    n_min: usize,
    n_max: usize,
    max_instances: usize,
) -> MultiGraph {
    let n = rng.gen_range(n_min..=n_max);
    let mut edges: Vec<(Vertex, Vertex, u64)> = Vec::new();
    for v in 2..=n {
        let u = rng.gen_range(1..v);
        edges.push((u, v, 1));
    }
    let mut instances = n - 1;
    let extra = rng.gen_range(0..=(max_instances.saturating_sub(instances)).min(n + 2));
    for _ in 0..extra {
        let u = rng.gen_range(1..=n);
        let v = rng.gen_range(1..=n);
        if u != v && instances < max_instances {
            edges.push((u.min(v), u.max(v), 1));
            instances += 1;
        }
    }
    MultiGraph::build(n, &edges).expect("random edges are valid")
}

/// Seeded random corpus, reproducible across runs.
pub fn random_corpus(seed: u64, count: usize, n_min: usize, n_max: usize) -> Vec<MultiGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_connected_graph(&mut rng, n_min, n_max, DEFAULT_ENUM_CAP))
        .collect()
}
