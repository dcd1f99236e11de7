//! Four-phase tree predictor.
//!
//! 1. [`mark_black_lines`]: flag the tree edges lying between revealed nodes
//!    and find the forks (unrevealed nodes with three or more such edges).
//! 2. [`label_forks`]: give each fork the class whose connection nodes have
//!    the largest total ε-edge weight.
//! 3. [`cut_hinge_lines`]: label every hinge line, cutting it at its ε-edge
//!    when the two ends disagree.
//! 4. [`label_grafted`]: copy labels into the subtrees hanging off the
//!    black-line subtree.
//!
//! Phase 2 scores a fork by paths that may run through other forks, so the
//! label it picks is not always a best response to the fork's neighbors
//! once the lines are cut. [`predict`] therefore finishes with a fork
//! best-response pass: a fork that can strictly gain by switching class is
//! switched and its incident lines are cut again. Each switch strictly
//! raises the total weight of agreeing edges, so the pass terminates, and
//! afterwards every unrevealed node is at a best response: the labeling is
//! a pure Nash equilibrium of the transduction game on the tree.
//!
//! All passes are linear in the tree size apart from the fork scoring of
//! Phase 2, which walks the black-line part of a fork's native hinge tree
//! once per fork.

mod forks;
mod hinge;
mod lines;

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::game::NASH_RELATIVE_TOLERANCE;
use crate::graph::{argmax_score, FullLabeling, PartialLabeling};
use crate::spanning::SpanningTree;
use crate::{Error, Result};

pub use forks::{fork_paths, fork_scores, label_forks, EpsilonEdge};
pub use hinge::{mark_black_lines, BlackLines, HingeDecomposition, HingeLine, NodeKind};
pub use lines::{cut_hinge_lines, cut_position, label_grafted};

/// Prediction together with the intermediate results of each phase.
#[derive(Debug, Clone)]
pub struct Prediction {
    pub labels: FullLabeling,
    pub decomposition: HingeDecomposition,
    /// Phase-2 label of every fork.
    pub fork_labels: Vec<(usize, usize)>,
    /// Forks whose label the best-response pass changed, in switch order.
    pub switched_forks: Vec<usize>,
}

/// Labels every node of `t`, keeping the revealed labels of `y`.
///
/// Tree components without a revealed node get the most frequent training
/// class.
pub fn predict(t: &SpanningTree, y: &PartialLabeling) -> Result<FullLabeling> {
    predict_detailed(t, y).map(|p| p.labels)
}

/// [`predict`], also returning the decomposition and per-phase results.
pub fn predict_detailed(t: &SpanningTree, y: &PartialLabeling) -> Result<Prediction> {
    let d = HingeDecomposition::new(t, y)?;
    let fork_labels = label_forks(t, y, &d);
    let fallback = y.plurality().ok_or(Error::NoRevealedNodes)?;
    let mut labels = lines::dense(y);
    lines::cut_lines_in_place(&d, &fork_labels, &mut labels)?;
    lines::graft_in_place(&d, fallback, &mut labels)?;
    let switched_forks = settle_forks(t, &d, fallback, &mut labels)?;
    Ok(Prediction {
        labels: FullLabeling::new(labels, y.classes())?,
        decomposition: d,
        fork_labels,
        switched_forks,
    })
}

/// Moves forks to best responses until none can strictly gain, re-cutting
/// their lines after every switch, then relabels the grafted trees.
///
/// The only grafted neighbors of a fork hang from the fork itself, so they
/// are counted at the fork's current label while the pass runs.
fn settle_forks(
    t: &SpanningTree,
    d: &HingeDecomposition,
    fallback: usize,
    labels: &mut [usize],
) -> Result<Vec<usize>> {
    let classes = labels.iter().copied().max().map_or(1, |m| m + 1);
    let mut queue: VecDeque<usize> = d.forks().iter().copied().collect();
    let mut queued: BTreeSet<usize> = d.forks().iter().copied().collect();
    let mut pay = vec![0.0; classes];
    let mut switched = Vec::new();

    while let Some(f) = queue.pop_front() {
        queued.remove(&f);
        // Classes beyond the current maximum cannot attract a fork: no
        // neighbor holds them.
        pay.fill(0.0);
        let mut strength = 0.0;
        for nb in t.neighbors(f) {
            let class = if d.kind[nb.node] == NodeKind::Grafted {
                labels[f]
            } else {
                labels[nb.node]
            };
            pay[class] += nb.weight;
            strength += nb.weight;
        }
        let best = argmax_score(&pay);
        if pay[best] - pay[labels[f]] <= NASH_RELATIVE_TOLERANCE * strength {
            continue;
        }
        labels[f] = best;
        switched.push(f);
        for &li in d.lines_at(f) {
            let line = d.line(li);
            lines::label_line(line, labels);
            let other = if line.start() == f {
                line.end()
            } else {
                line.start()
            };
            if d.kind[other] == NodeKind::Fork && queued.insert(other) {
                queue.push_back(other);
            }
        }
        if queued.insert(f) {
            queue.push_back(f);
        }
    }
    if !switched.is_empty() {
        lines::graft_in_place(d, fallback, labels)?;
    }
    Ok(switched)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameInstance;
    use crate::graph::WeightedGraph;
    use crate::spanning::max_similarity_spanning_tree;
    use alloc::vec;

    fn tree(edges: &[(usize, usize, f64)]) -> (WeightedGraph, SpanningTree) {
        let g = WeightedGraph::from_edges(edges.iter().copied()).unwrap();
        let t = max_similarity_spanning_tree(&g);
        (g, t)
    }

    fn is_nash(g: &WeightedGraph, y: &PartialLabeling, s: &FullLabeling) -> bool {
        GameInstance::new(g, y)
            .unwrap()
            .is_pure_nash(s)
            .unwrap()
            .is_equilibrium()
    }

    #[test]
    fn single_revealed_node_gives_constant_labeling() {
        let (_, t) = tree(&[(0, 1, 1.0), (1, 2, 0.5), (1, 3, 2.0)]);
        let y = PartialLabeling::new(vec![None, None, Some(2), None], 3).unwrap();
        assert_eq!(predict(&t, &y).unwrap().as_slice(), &[2, 2, 2, 2]);
    }

    #[test]
    fn unit_path_split_is_an_equilibrium() {
        let (g, t) = tree(&[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]);
        let y = PartialLabeling::new(vec![Some(0), None, None, Some(1)], 2).unwrap();
        let s = predict(&t, &y).unwrap();
        assert_eq!(s.as_slice(), &[0, 0, 1, 1]);
        let all = GameInstance::new(&g, &y)
            .unwrap()
            .enumerate_pure_nash()
            .unwrap();
        assert!(all.contains(&s));
    }

    #[test]
    fn subtree_hanging_off_a_line_follows_its_anchor() {
        // Line 0 -- 1 -- 2 -- 3 with the cut at (2,3); a 5-node subtree
        // hangs from node 2.
        let (_, t) = tree(&[
            (0, 1, 4.0),
            (1, 2, 4.0),
            (2, 3, 0.5),
            (2, 4, 1.0),
            (4, 5, 1.0),
            (4, 6, 1.0),
            (6, 7, 1.0),
            (6, 8, 1.0),
        ]);
        let mut labels = vec![None; 9];
        labels[0] = Some(2);
        labels[3] = Some(0);
        let y = PartialLabeling::new(labels, 3).unwrap();
        let s = predict(&t, &y).unwrap();
        assert_eq!(s.as_slice(), &[2, 2, 2, 0, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn phase_two_fork_label_gets_corrected() {
        // Fork 0 has class-0 leaves 1, 2 at weight 7 and an edge of weight
        // 6 to fork 3, behind which sit three class-1 paths with ε-edges of
        // weight 5. Phase 2 scores fork 0 as 0:14 vs 1:15 and picks class
        // 1, but its neighbors then pay 14 for class 0 against 6 for 1.
        let (g, t) = tree(&[
            (0, 1, 7.0),
            (0, 2, 7.0),
            (0, 3, 6.0),
            (3, 4, 5.0),
            (3, 5, 5.0),
            (3, 6, 5.0),
            (4, 7, 100.0),
            (5, 8, 100.0),
            (6, 9, 100.0),
        ]);
        let mut labels = vec![None; 10];
        labels[1] = Some(0);
        labels[2] = Some(0);
        labels[7] = Some(1);
        labels[8] = Some(1);
        labels[9] = Some(1);
        let y = PartialLabeling::new(labels, 2).unwrap();
        let p = predict_detailed(&t, &y).unwrap();
        assert_eq!(p.decomposition.forks(), &[0, 3]);
        assert_eq!(fork_scores(&t, &y, &p.decomposition, 0), vec![14.0, 15.0]);
        assert_eq!(p.fork_labels, vec![(0, 1), (3, 1)]);
        assert_eq!(p.switched_forks, vec![0]);
        assert_eq!(p.labels.get(0), 0);
        assert!(is_nash(&g, &y, &p.labels));
    }

    #[test]
    fn revealed_labels_are_kept() {
        let (_, t) = tree(&[
            (0, 1, 0.1),
            (1, 2, 5.0),
            (2, 3, 0.1),
            (1, 4, 5.0),
            (4, 5, 5.0),
        ]);
        let y =
            PartialLabeling::new(vec![Some(1), Some(0), None, Some(1), None, Some(1)], 2).unwrap();
        let s = predict(&t, &y).unwrap();
        assert!(s.agrees_with(&y));
    }

    #[test]
    fn unlabeled_components_use_the_plurality() {
        let g = WeightedGraph::from_edges([(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0)]).unwrap();
        let t = max_similarity_spanning_tree(&g);
        let y = PartialLabeling::new(vec![Some(1), None, Some(1), None, None], 2).unwrap();
        assert_eq!(predict(&t, &y).unwrap().as_slice(), &[1, 1, 1, 1, 1]);
        let none = PartialLabeling::unrevealed(5, 2);
        assert_eq!(predict(&t, &none).unwrap_err(), Error::NoRevealedNodes);
    }
}
