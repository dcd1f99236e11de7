//! Synthetic homophilous graphs.

use mucca_core::graph::{largest_component, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Parameters of a planted-partition stochastic block model with Gaussian
/// edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockModel {
    pub nodes: usize,
    pub classes: usize,
    pub p_in: f64,
    pub p_out: f64,
    /// Mean and standard deviation of intra-class weights.
    pub weight_in: (f64, f64),
    /// Mean and standard deviation of inter-class weights.
    pub weight_out: (f64, f64),
    /// Sampled weights are clamped up to this floor.
    pub min_weight: f64,
}

impl Default for BlockModel {
    /// 2000 nodes in 4 classes, intra-class edges five times as likely as
    /// inter-class ones (expected degree 20), intra-class weights twice as
    /// heavy on average.
    fn default() -> Self {
        BlockModel {
            nodes: 2000,
            classes: 4,
            p_in: 0.025,
            p_out: 0.005,
            weight_in: (1.0, 0.25),
            weight_out: (0.5, 0.25),
            min_weight: 0.01,
        }
    }
}

/// A generated graph with the class of every node.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: WeightedGraph,
    pub labels: Vec<Option<usize>>,
    pub classes: usize,
}

impl BlockModel {
    /// Samples the model. Node `i` belongs to class `i % classes`. Only the
    /// largest connected component is kept, renumbered densely.
    pub fn sample(&self, seed: u64) -> LabeledGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w_in =
            Normal::new(self.weight_in.0, self.weight_in.1).expect("finite weight parameters");
        let w_out =
            Normal::new(self.weight_out.0, self.weight_out.1).expect("finite weight parameters");
        let class = |i: usize| i % self.classes;
        let mut edges = Vec::new();
        for u in 0..self.nodes {
            for v in u + 1..self.nodes {
                let same = class(u) == class(v);
                if rng.gen_bool(if same { self.p_in } else { self.p_out }) {
                    let w = if same {
                        w_in.sample(&mut rng)
                    } else {
                        w_out.sample(&mut rng)
                    };
                    edges.push((u, v, w.max(self.min_weight)));
                }
            }
        }
        let full =
            WeightedGraph::with_node_count(self.nodes, edges).expect("sampled edges are simple");
        let (graph, original) = largest_component(&full);
        let labels = original.iter().map(|&v| Some(class(v))).collect();
        LabeledGraph {
            graph,
            labels,
            classes: self.classes,
        }
    }
}
