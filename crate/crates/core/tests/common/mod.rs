#![allow(dead_code)]

use mucca_core::graph::{PartialLabeling, WeightedGraph};
use mucca_core::spanning::{max_similarity_spanning_tree, SpanningTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Weight uniform in (0, 1].
pub fn unit_weight(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Random recursive tree: node i > 0 hangs from a uniform earlier node.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> (WeightedGraph, SpanningTree) {
    let edges: Vec<_> = (1..n)
        .map(|i| (rng.gen_range(0..i), i, unit_weight(rng)))
        .collect();
    let g = WeightedGraph::with_node_count(n, edges).unwrap();
    let t = max_similarity_spanning_tree(&g);
    assert_eq!(t.edge_count(), n - 1);
    (g, t)
}

/// Same, but with weights from a small set so ties are common.
pub fn random_tree_with_ties(rng: &mut ChaCha8Rng, n: usize) -> (WeightedGraph, SpanningTree) {
    let edges: Vec<_> = (1..n)
        .map(|i| (rng.gen_range(0..i), i, rng.gen_range(1..=3) as f64))
        .collect();
    let g = WeightedGraph::with_node_count(n, edges).unwrap();
    let t = max_similarity_spanning_tree(&g);
    (g, t)
}

/// Reveals each node with probability `p`, forcing at least one.
pub fn random_reveal(rng: &mut ChaCha8Rng, n: usize, classes: usize, p: f64) -> PartialLabeling {
    let mut labels: Vec<Option<usize>> = (0..n)
        .map(|_| rng.gen_bool(p).then(|| rng.gen_range(0..classes)))
        .collect();
    if labels.iter().all(Option::is_none) {
        let i = rng.gen_range(0..n);
        labels[i] = Some(rng.gen_range(0..classes));
    }
    PartialLabeling::new(labels, classes).unwrap()
}

/// Connected random graph: a random tree plus `extra` random chords.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> WeightedGraph {
    let mut seen = std::collections::BTreeSet::new();
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        seen.insert((j, i));
        edges.push((j, i, unit_weight(rng)));
    }
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && seen.insert((a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b), unit_weight(rng)));
        }
    }
    WeightedGraph::with_node_count(n, edges).unwrap()
}

/// Quadratic oracle for black-line flags: the edge above `v` is black iff
/// some pair of revealed nodes has its tree path through it.
pub fn black_line_oracle(t: &SpanningTree, y: &PartialLabeling) -> Vec<bool> {
    let n = t.node_count();
    let path_edges = |a: usize, b: usize| -> Vec<usize> {
        // Climb from both ends to the common ancestor.
        let depth = |mut v: usize| {
            let mut d = 0;
            while let Some(p) = t.parent(v) {
                v = p;
                d += 1;
            }
            d
        };
        let (mut a, mut b) = (a, b);
        let (mut da, mut db) = (depth(a), depth(b));
        let mut keys = Vec::new();
        while da > db {
            keys.push(a);
            a = t.parent(a).unwrap();
            da -= 1;
        }
        while db > da {
            keys.push(b);
            b = t.parent(b).unwrap();
            db -= 1;
        }
        while a != b {
            keys.push(a);
            keys.push(b);
            a = t.parent(a).unwrap();
            b = t.parent(b).unwrap();
        }
        keys
    };
    let root_of = |mut v: usize| {
        while let Some(p) = t.parent(v) {
            v = p;
        }
        v
    };
    let revealed: Vec<usize> = y.revealed().map(|(i, _)| i).collect();
    let mut flags = vec![false; n];
    for (x, &a) in revealed.iter().enumerate() {
        for &b in &revealed[x + 1..] {
            if root_of(a) == root_of(b) {
                for k in path_edges(a, b) {
                    flags[k] = true;
                }
            }
        }
    }
    flags
}
