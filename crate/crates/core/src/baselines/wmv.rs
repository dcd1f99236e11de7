use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{argmax_score, FullLabeling, PartialLabeling, WeightedGraph};
use crate::{Error, Result};

/// Weighted majority vote over revealed neighbors.
///
/// Each unrevealed node takes the class with the largest total edge weight
/// to revealed neighbors of that class, ties to the smallest class. Nodes
/// with no revealed neighbor take the most frequent training class. One pass
/// over the adjacency lists.
pub fn wmv_predict(g: &WeightedGraph, y: &PartialLabeling) -> Result<FullLabeling> {
    y.check_len(g.node_count())?;
    let fallback = y.plurality().ok_or(Error::NoRevealedNodes)?;
    let mut votes = vec![0.0; y.classes()];
    let labels: Vec<usize> = (0..g.node_count())
        .map(|i| {
            if let Some(k) = y.get(i) {
                return k;
            }
            votes.fill(0.0);
            let mut any = false;
            for nb in g.neighbors(i) {
                if let Some(k) = y.get(nb.node) {
                    votes[k] += nb.weight;
                    any = true;
                }
            }
            if any {
                argmax_score(&votes)
            } else {
                fallback
            }
        })
        .collect();
    FullLabeling::new(labels, y.classes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn heavier_total_wins() {
        let g = WeightedGraph::from_edges([(0, 1, 2.0), (0, 2, 1.5), (0, 3, 1.0)]).unwrap();
        let y = PartialLabeling::new(vec![None, Some(1), Some(2), Some(2)], 3).unwrap();
        assert_eq!(wmv_predict(&g, &y).unwrap().get(0), 2);
    }

    #[test]
    fn unanimous_neighbors() {
        let g = WeightedGraph::from_edges([(0, 1, 0.2), (0, 2, 9.0)]).unwrap();
        let y = PartialLabeling::new(vec![None, Some(1), Some(1)], 2).unwrap();
        assert_eq!(wmv_predict(&g, &y).unwrap().as_slice(), &[1, 1, 1]);
    }

    #[test]
    fn no_revealed_neighbor_falls_back() {
        // Node 3 only touches unrevealed node 2; plurality of {0, 0, 1} is 0.
        let g = WeightedGraph::from_edges([(0, 1, 1.0), (2, 3, 1.0), (4, 5, 1.0)]).unwrap();
        let y = PartialLabeling::new(vec![Some(0), Some(0), None, None, Some(1), None], 2).unwrap();
        let s = wmv_predict(&g, &y).unwrap();
        assert_eq!(s.get(3), 0);
        assert_eq!(s.get(5), 1);
        assert_eq!(
            wmv_predict(&g, &PartialLabeling::unrevealed(6, 2)),
            Err(Error::NoRevealedNodes)
        );
    }
}
