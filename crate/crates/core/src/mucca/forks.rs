use alloc::vec;
use alloc::vec::Vec;

use super::hinge::HingeDecomposition;
use crate::graph::{argmax_score, PartialLabeling};
use crate::spanning::SpanningTree;

/// Minimum-weight edge of a path, named by its child node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonEdge {
    pub key: usize,
    pub weight: f64,
    /// Number of edges between the path's start and this edge.
    pub position: usize,
}

/// ε-edges of the paths from `fork` to every revealed node bordering its
/// native hinge tree, as `(class, edge)` pairs.
///
/// The native hinge tree is what remains connected to the fork once every
/// edge touching a revealed node is removed; its connection nodes are those
/// revealed nodes. Only black-line edges are followed, since the nodes off
/// the black-line subtree cannot reach a revealed node. Within one path the
/// ε-edge closest to the fork wins ties.
pub fn fork_paths(
    t: &SpanningTree,
    y: &PartialLabeling,
    d: &HingeDecomposition,
    fork: usize,
) -> Vec<(usize, EpsilonEdge)> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for nb in t.neighbors(fork).filter(|nb| d.black.is_black(nb.key)) {
        stack.push((
            nb.node,
            fork,
            EpsilonEdge {
                key: nb.key,
                weight: nb.weight,
                position: 0,
            },
            1,
        ));
    }
    while let Some((v, prev, eps, depth)) = stack.pop() {
        if let Some(class) = y.get(v) {
            out.push((class, eps));
            continue;
        }
        for nb in t.neighbors(v) {
            if nb.node == prev || !d.black.is_black(nb.key) {
                continue;
            }
            let next = if nb.weight < eps.weight {
                EpsilonEdge {
                    key: nb.key,
                    weight: nb.weight,
                    position: depth,
                }
            } else {
                eps
            };
            stack.push((nb.node, v, next, depth + 1));
        }
    }
    out
}

/// Per-class score of `fork`: the summed weight of the distinct ε-edges on
/// its paths to connection nodes of that class. An ε-edge shared by several
/// paths is counted once.
pub fn fork_scores(
    t: &SpanningTree,
    y: &PartialLabeling,
    d: &HingeDecomposition,
    fork: usize,
) -> Vec<f64> {
    let mut paths = fork_paths(t, y, d, fork);
    paths.sort_unstable_by_key(|&(class, eps)| (class, eps.key));
    paths.dedup_by_key(|&mut (class, eps)| (class, eps.key));
    let mut scores = vec![0.0; y.classes()];
    for (class, eps) in paths {
        scores[class] += eps.weight;
    }
    scores
}

/// Phase 2: labels each fork with its best-scoring class, ties to the
/// smallest class id. Forks are scored independently of one another.
/// Returns `(fork, class)` pairs in fork order.
pub fn label_forks(
    t: &SpanningTree,
    y: &PartialLabeling,
    d: &HingeDecomposition,
) -> Vec<(usize, usize)> {
    d.forks()
        .iter()
        .map(|&f| (f, argmax_score(&fork_scores(t, y, d, f))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::spanning::max_similarity_spanning_tree;

    fn setup(
        edges: &[(usize, usize, f64)],
        labels: &[Option<usize>],
        c: usize,
    ) -> (SpanningTree, PartialLabeling, HingeDecomposition) {
        let t = max_similarity_spanning_tree(
            &WeightedGraph::from_edges(edges.iter().copied()).unwrap(),
        );
        let y = PartialLabeling::new(labels.to_vec(), c).unwrap();
        let d = HingeDecomposition::new(&t, &y).unwrap();
        (t, y, d)
    }

    #[test]
    fn two_light_paths_beat_one_heavy() {
        // F=0; A=4 (class 0) behind edge weight 3; B=5, C=6 (class 1) behind
        // edges of weight 2. Heavy edges next to the fork keep the minima
        // away from it. Path minima: 3, 2, 2 => score(0)=3, score(1)=4.
        let (t, y, d) = setup(
            &[
                (0, 1, 10.0),
                (1, 4, 3.0),
                (0, 2, 10.0),
                (2, 5, 2.0),
                (0, 3, 10.0),
                (3, 6, 2.0),
            ],
            &[None, None, None, None, Some(0), Some(1), Some(1)],
            2,
        );
        assert_eq!(d.forks(), &[0]);
        assert_eq!(fork_scores(&t, &y, &d, 0), vec![3.0, 4.0]);
        assert_eq!(label_forks(&t, &y, &d), vec![(0, 1)]);
    }

    #[test]
    fn single_category_wins_regardless_of_weight() {
        let (t, y, d) = setup(
            &[(0, 1, 0.1), (0, 2, 0.2), (0, 3, 9.0)],
            &[None, Some(0), Some(0), Some(0)],
            3,
        );
        assert_eq!(label_forks(&t, &y, &d), vec![(0, 0)]);
    }

    #[test]
    fn shared_epsilon_edge_counts_once() {
        //   2(1)   3(1)
        //  w=9 \  / w=9
        //        1
        //        | w=5
        //   4 -- 0 -- 5
        //  (0)  w=4  w=1 (2)
        //
        // Both class-1 paths leave the fork through ε-edge (0,1). Node 1 is
        // a fork as well; only fork 0 is checked here.
        let (t, y, d) = setup(
            &[
                (0, 1, 5.0),
                (1, 2, 9.0),
                (1, 3, 9.0),
                (0, 4, 4.0),
                (0, 5, 1.0),
            ],
            &[None, None, Some(1), Some(1), Some(0), Some(2)],
            3,
        );
        assert_eq!(d.forks(), &[0, 1]);
        assert_eq!(fork_scores(&t, &y, &d, 0), vec![4.0, 5.0, 1.0]);
        assert_eq!(label_forks(&t, &y, &d)[0], (0, 1));
    }

    #[test]
    fn ties_within_a_path_keep_the_edge_nearest_the_fork() {
        let (t, y, d) = setup(
            &[(0, 1, 1.0), (1, 2, 1.0), (0, 3, 5.0), (0, 4, 5.0)],
            &[None, None, Some(0), Some(1), Some(1)],
            2,
        );
        let paths = fork_paths(&t, &y, &d, 0);
        let to_two = paths.iter().find(|(c, _)| *c == 0).unwrap().1;
        assert_eq!(to_two.position, 0);
        assert_eq!(to_two.weight, 1.0);
        assert_eq!(to_two.key, 1);
    }

    #[test]
    fn score_ties_go_to_the_smaller_class() {
        let (t, y, d) = setup(
            &[(0, 1, 2.0), (0, 2, 2.0), (0, 3, 1.0), (0, 4, 1.0)],
            &[None, Some(1), Some(2), Some(2), Some(1)],
            3,
        );
        assert_eq!(fork_scores(&t, &y, &d, 0), vec![0.0, 3.0, 3.0]);
        assert_eq!(label_forks(&t, &y, &d), vec![(0, 1)]);
    }
}
