use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SpanningTree;
use crate::graph::{component_ids, WeightedGraph};

/// Samples a spanning forest with probability proportional to the product
/// of its edge weights (Wilson's algorithm).
///
/// Each component gets a uniformly chosen root. Walks step from `u` to a
/// neighbor `v` with probability `w_uv / strength(u)`; loops are erased by
/// overwriting the successor pointer. The generator is ChaCha8 seeded with
/// `seed`, so the result is reproducible across platforms.
pub fn wilson_random_spanning_tree(g: &WeightedGraph, seed: u64) -> SpanningTree {
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Cumulative neighbor weights, one run per node.
    let mut start = Vec::with_capacity(n + 1);
    let mut cumulative = Vec::with_capacity(2 * g.edge_count());
    for u in 0..n {
        start.push(cumulative.len());
        let mut acc = 0.0;
        for nb in g.neighbors(u) {
            acc += nb.weight;
            cumulative.push(acc);
        }
    }
    start.push(cumulative.len());

    let (comp, count) = component_ids(g);
    let mut members = vec![Vec::new(); count];
    for (v, &c) in comp.iter().enumerate() {
        members[c].push(v);
    }

    let mut in_tree = vec![false; n];
    for m in &members {
        in_tree[m[rng.gen_range(0..m.len())]] = true;
    }

    // next[u] is the adjacency index of the step taken from u.
    let mut next = vec![usize::MAX; n];
    for s in 0..n {
        let mut u = s;
        while !in_tree[u] {
            let run = &cumulative[start[u]..start[u + 1]];
            let total = run[run.len() - 1];
            let r = rng.gen::<f64>() * total;
            let k = run.partition_point(|&c| c <= r).min(run.len() - 1);
            next[u] = k;
            u = g.neighbors(u)[k].node;
        }
        u = s;
        while !in_tree[u] {
            in_tree[u] = true;
            u = g.neighbors(u)[next[u]].node;
        }
    }

    let mut parent = vec![None; n];
    let mut parent_weight = vec![0.0; n];
    let mut parent_edge = vec![None; n];
    for u in 0..n {
        if next[u] != usize::MAX {
            let nb = g.neighbors(u)[next[u]];
            parent[u] = Some(nb.node);
            parent_weight[u] = nb.weight;
            parent_edge[u] = Some(nb.edge);
        }
    }
    SpanningTree::from_parents(parent, parent_weight, parent_edge)
        .expect("loop-erased walks produce a forest")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;

    fn frequencies(g: &WeightedGraph, samples: u64) -> BTreeMap<Vec<usize>, f64> {
        let mut counts = BTreeMap::new();
        for seed in 0..samples {
            let t = wilson_random_spanning_tree(g, seed);
            t.validate(g).unwrap();
            *counts.entry(t.edge_ids()).or_insert(0.0) += 1.0;
        }
        counts.values_mut().for_each(|c| *c /= samples as f64);
        counts
    }

    #[test]
    fn path_has_a_single_tree() {
        let g = WeightedGraph::from_edges([(0, 1, 1.0), (1, 2, 3.0), (2, 3, 0.5)]).unwrap();
        for seed in 0..50 {
            assert_eq!(
                wilson_random_spanning_tree(&g, seed).edge_ids(),
                vec![0, 1, 2]
            );
        }
    }

    #[test]
    fn reproducible_by_seed() {
        let g = WeightedGraph::from_edges([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (2, 3, 1.0)])
            .unwrap();
        assert_eq!(
            wilson_random_spanning_tree(&g, 7),
            wilson_random_spanning_tree(&g, 7)
        );
        let distinct: alloc::collections::BTreeSet<_> = (0..20)
            .map(|s| wilson_random_spanning_tree(&g, s).edge_ids())
            .collect();
        assert!(distinct.len() > 1);
    }

    #[test]
    fn weighted_triangle_distribution() {
        // Trees {e0,e1} and {e0,e2} have weight product 2, {e1,e2} has 1.
        let g = WeightedGraph::from_edges([(0, 1, 2.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let f = frequencies(&g, 10_000);
        assert!((f[&vec![0, 1]] - 0.4).abs() < 0.03, "{f:?}");
        assert!((f[&vec![0, 2]] - 0.4).abs() < 0.03, "{f:?}");
        assert!((f[&vec![1, 2]] - 0.2).abs() < 0.03, "{f:?}");
    }

    #[test]
    fn isolated_nodes_become_roots() {
        let g = WeightedGraph::with_node_count(4, [(0, 1, 1.0)]).unwrap();
        let t = wilson_random_spanning_tree(&g, 3);
        t.validate(&g).unwrap();
        assert_eq!(t.roots().len(), 3);
    }
}
