//! k-nearest-neighbour similarity graphs from feature vectors.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::WeightedGraph;
use crate::{Error, Result};

/// Dense `rows x cols` feature matrix with optional per-row classes.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
    labels: Option<Vec<Option<usize>>>,
}

impl FeatureMatrix {
    /// Row-major data; every entry must be finite.
    pub fn new(data: Vec<f64>, cols: usize) -> Result<Self> {
        if cols == 0 || !data.len().is_multiple_of(cols) {
            return Err(Error::InvalidParameter(
                "feature data is not a whole number of rows",
            ));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::DegenerateFeatures { row: pos / cols });
        }
        Ok(Self {
            rows: data.len() / cols,
            data,
            cols,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<Option<usize>>) -> Result<Self> {
        if labels.len() != self.rows {
            return Err(Error::SizeMismatch {
                expected: self.rows,
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn labels(&self) -> Option<&[Option<usize>]> {
        self.labels.as_deref()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let sq: f64 = self
            .row(i)
            .iter()
            .zip(self.row(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        libm::sqrt(sq)
    }
}

/// Edge similarity `exp(-distance / sigma^2)`. A zero `sigma` only occurs
/// together with a zero distance and gives similarity 1. Results are
/// clamped away from zero so they stay valid edge weights.
pub fn similarity(distance: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return 1.0;
    }
    libm::exp(-distance / (sigma * sigma)).max(f64::MIN_POSITIVE)
}

/// The `k` nearest rows of every row by Euclidean distance (ties to the
/// smaller row id), symmetrized by union.
///
/// An edge `(i, j)` is weighted by [`similarity`] with `sigma` the mean
/// distance over all symmetrized neighbor edges touching `i` or `j`.
pub fn knn_graph(features: &FeatureMatrix, k: usize) -> Result<WeightedGraph> {
    let m = features.rows();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1"));
    }
    if m < 2 {
        return Err(Error::InvalidParameter(
            "at least two feature rows are needed",
        ));
    }
    let k = k.min(m - 1);

    let mut edges: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut candidates: Vec<(f64, usize)> = Vec::with_capacity(m - 1);
    for i in 0..m {
        candidates.clear();
        for j in (0..m).filter(|&j| j != i) {
            let d = features.distance(i, j);
            if d.is_nan() {
                return Err(Error::DegenerateFeatures { row: i });
            }
            candidates.push((d, j));
        }
        let by_distance =
            |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < candidates.len() {
            candidates.select_nth_unstable_by(k - 1, by_distance);
        }
        for &(d, j) in &candidates[..k] {
            edges.insert((i.min(j), i.max(j)), d);
        }
    }

    let mut sum = vec![0.0; m];
    let mut count = vec![0usize; m];
    for (&(u, v), &d) in &edges {
        sum[u] += d;
        sum[v] += d;
        count[u] += 1;
        count[v] += 1;
    }
    let weighted = edges.iter().map(|(&(u, v), &d)| {
        let sigma = (sum[u] + sum[v] - d) / (count[u] + count[v] - 1) as f64;
        (u, v, similarity(d, sigma))
    });
    WeightedGraph::with_node_count(m, weighted)
}
