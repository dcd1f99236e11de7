//! Training splits, spanning-tree committees and error rates.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{argmax_count, FullLabeling, PartialLabeling, WeightedGraph};
use crate::spanning::{max_similarity_spanning_tree, wilson_random_spanning_tree, SpanningTree};
use crate::{mucca, Error, Result};

/// Which spanning tree a tree predictor runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeMode {
    /// Maximum-similarity (minimum-resistance) spanning tree.
    Mst,
    /// Wilson random spanning tree.
    Rst,
}

impl TreeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TreeMode::Mst => "mst",
            TreeMode::Rst => "rst",
        }
    }
}

impl core::str::FromStr for TreeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mst" => Ok(TreeMode::Mst),
            "rst" => Ok(TreeMode::Rst),
            _ => Err(Error::InvalidParameter("tree mode must be `mst` or `rst`")),
        }
    }
}

pub fn build_tree(g: &WeightedGraph, mode: TreeMode, seed: u64) -> SpanningTree {
    match mode {
        TreeMode::Mst => max_similarity_spanning_tree(g),
        TreeMode::Rst => wilson_random_spanning_tree(g, seed),
    }
}

/// Number of training nodes drawn from `labeled` labeled nodes:
/// `ceil(fraction * labeled)`, at least one.
pub fn training_size(labeled: usize, fraction: f64) -> usize {
    // Shave off representation error so e.g. 0.01 * 2000 stays 20.
    let raw = libm::ceil(fraction * labeled as f64 - 1e-9);
    (raw as usize).clamp(1, labeled)
}

/// Reveals a uniform sample, without replacement, of
/// [`training_size`] labeled nodes of `truth`. Reproducible by `seed`.
pub fn sample_split(
    truth: &[Option<usize>],
    classes: usize,
    fraction: f64,
    seed: u64,
) -> Result<PartialLabeling> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParameter(
            "training fraction must lie in (0, 1]",
        ));
    }
    let labeled: Vec<usize> = (0..truth.len()).filter(|&i| truth[i].is_some()).collect();
    if labeled.is_empty() {
        return Err(Error::NoLabels);
    }
    let size = training_size(labeled.len(), fraction);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = vec![None; truth.len()];
    for pick in rand::seq::index::sample(&mut rng, labeled.len(), size) {
        let node = labeled[pick];
        labels[node] = truth[node];
    }
    PartialLabeling::new(labels, classes)
}

/// Nodes with a ground-truth label that are not revealed in `training`.
pub fn test_nodes(truth: &[Option<usize>], training: &PartialLabeling) -> Vec<usize> {
    (0..truth.len())
        .filter(|&i| truth[i].is_some() && !training.is_revealed(i))
        .collect()
}

/// Fraction of `test` nodes whose prediction differs from the truth.
pub fn error_rate(pred: &FullLabeling, truth: &[Option<usize>], test: &[usize]) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let wrong = test
        .iter()
        .filter(|&&i| truth[i] != Some(pred.get(i)))
        .count();
    Ok(wrong as f64 / test.len() as f64)
}

/// Per-node plurality over the members' labels, ties to the smallest class.
pub fn majority_vote(members: &[FullLabeling]) -> Result<FullLabeling> {
    let first = members
        .first()
        .ok_or(Error::InvalidParameter("a committee needs a member"))?;
    let (n, c) = (first.len(), first.classes());
    if let Some(m) = members.iter().find(|m| m.len() != n) {
        return Err(Error::SizeMismatch {
            expected: n,
            got: m.len(),
        });
    }
    let mut counts = vec![0usize; c];
    let labels = (0..n)
        .map(|i| {
            counts.fill(0);
            members.iter().for_each(|m| counts[m.get(i)] += 1);
            argmax_count(&counts).expect("every member votes")
        })
        .collect();
    FullLabeling::new(labels, c)
}

/// Runs the tree predictor once per seed, each on its own spanning tree,
/// and aggregates by majority vote. With [`TreeMode::Mst`] every member sees
/// the same tree.
pub fn committee_predict(
    g: &WeightedGraph,
    y: &PartialLabeling,
    mode: TreeMode,
    seeds: &[u64],
) -> Result<FullLabeling> {
    let members = seeds
        .iter()
        .map(|&seed| mucca::predict(&build_tree(g, mode, seed), y))
        .collect::<Result<Vec<_>>>()?;
    if members.len() == 1 {
        return Ok(members.into_iter().next().expect("one member"));
    }
    majority_vote(&members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn split_sizes() {
        assert_eq!(training_size(9298, 0.005), 47);
        assert_eq!(training_size(2000, 0.01), 20);
        assert_eq!(training_size(10, 1.0), 10);
        assert_eq!(training_size(10, 0.0001), 1);
    }

    #[test]
    fn full_fraction_reveals_everything() {
        let truth = vec![Some(0), None, Some(1), Some(1)];
        let y = sample_split(&truth, 2, 1.0, 3).unwrap();
        assert_eq!(y.as_slice(), truth.as_slice());
        assert!(test_nodes(&truth, &y).is_empty());
    }

    #[test]
    fn split_is_deterministic_and_sized() {
        let truth: Vec<Option<usize>> = (0..9298).map(|i| Some(i % 10)).collect();
        let a = sample_split(&truth, 10, 0.005, 11).unwrap();
        let b = sample_split(&truth, 10, 0.005, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.revealed_count(), 47);
        assert_ne!(a, sample_split(&truth, 10, 0.005, 12).unwrap());
        assert!(a.revealed().all(|(i, c)| truth[i] == Some(c)));
    }

    #[test]
    fn split_errors() {
        assert_eq!(sample_split(&[None, None], 2, 0.5, 0), Err(Error::NoLabels));
        assert!(sample_split(&[Some(0)], 2, 0.0, 0).is_err());
    }

    #[test]
    fn error_rates() {
        let truth = [Some(0), Some(1), Some(1), Some(0)];
        let pred = FullLabeling::new(vec![0, 1, 0, 1], 2).unwrap();
        assert_eq!(error_rate(&pred, &truth, &[0, 1]), Ok(0.0));
        assert_eq!(error_rate(&pred, &truth, &[0, 1, 2, 3]), Ok(0.5));
        assert_eq!(error_rate(&pred, &truth, &[3]), Ok(1.0));
        assert_eq!(error_rate(&pred, &truth, &[]), Err(Error::EmptyTestSet));
    }

    #[test]
    fn votes() {
        let m = |v: &[usize]| FullLabeling::new(v.to_vec(), 3).unwrap();
        let out = majority_vote(&[m(&[0, 2, 1]), m(&[0, 1, 2]), m(&[1, 1, 0])]).unwrap();
        assert_eq!(out.as_slice(), &[0, 1, 0]);
        assert_eq!(majority_vote(&[m(&[2, 2])]).unwrap().as_slice(), &[2, 2]);
    }

    #[test]
    fn committee_of_one_is_the_predictor() {
        let g = WeightedGraph::from_edges([
            (0, 1, 1.0),
            (1, 2, 0.5),
            (2, 0, 0.8),
            (2, 3, 1.0),
            (3, 4, 0.2),
        ])
        .unwrap();
        let y = PartialLabeling::new(vec![Some(0), None, None, None, Some(1)], 2).unwrap();
        for seed in 0..10 {
            let single = mucca::predict(&build_tree(&g, TreeMode::Rst, seed), &y).unwrap();
            assert_eq!(
                committee_predict(&g, &y, TreeMode::Rst, &[seed]).unwrap(),
                single
            );
        }
    }
}
