use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{argmax_score, component_ids, FullLabeling, PartialLabeling, WeightedGraph};
use crate::{Error, Result};

pub const DEFAULT_LABPROP_TOL: f64 = 1e-6;
pub const DEFAULT_LABPROP_MAX_ITERS: usize = 10_000;

/// Per-node, per-class real scores, stored node-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    data: Vec<f64>,
    classes: usize,
}

impl ScoreTable {
    pub fn zeros(n: usize, classes: usize) -> Self {
        Self {
            data: vec![0.0; n * classes],
            classes,
        }
    }

    #[inline]
    pub fn classes(&self) -> usize {
        self.classes
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len() / self.classes
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, node: usize, class: usize) -> f64 {
        self.data[node * self.classes + class]
    }

    #[inline]
    pub fn row(&self, node: usize) -> &[f64] {
        &self.data[node * self.classes..(node + 1) * self.classes]
    }

    pub fn column(&self, class: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.get(i, class)).collect()
    }
}

/// `E(f) = 1/2 sum_{i~j} w_ij (f(i) - f(j))^2` for the scores of `class`;
/// every edge contributes once.
pub fn dirichlet_energy(g: &WeightedGraph, scores: &ScoreTable, class: usize) -> f64 {
    g.edges()
        .iter()
        .map(|e| {
            let d = scores.get(e.u, class) - scores.get(e.v, class);
            e.weight * d * d
        })
        .sum()
}

/// In-place Gauss–Seidel iteration of the one-vs-rest harmonic problems.
///
/// Revealed nodes are clamped to the indicator of their class. Free nodes
/// (unrevealed, in a component holding at least one revealed node) are
/// repeatedly replaced by the weighted average of their neighbors, in node
/// order, for all classes at once.
#[derive(Debug, Clone)]
pub struct HarmonicSolver<'a> {
    graph: &'a WeightedGraph,
    scores: ScoreTable,
    free: Vec<usize>,
    strength: Vec<f64>,
}

impl<'a> HarmonicSolver<'a> {
    pub fn new(graph: &'a WeightedGraph, y: &PartialLabeling) -> Result<Self> {
        y.check_len(graph.node_count())?;
        if y.revealed_count() == 0 {
            return Err(Error::NoRevealedNodes);
        }
        let (comp, count) = component_ids(graph);
        let mut anchored = vec![false; count];
        for (i, _) in y.revealed() {
            anchored[comp[i]] = true;
        }
        let mut scores = ScoreTable::zeros(graph.node_count(), y.classes());
        for (i, k) in y.revealed() {
            scores.data[i * y.classes() + k] = 1.0;
        }
        let free: Vec<usize> = (0..graph.node_count())
            .filter(|&i| !y.is_revealed(i) && anchored[comp[i]])
            .collect();
        let strength = free.iter().map(|&i| graph.strength(i)).collect();
        Ok(Self {
            graph,
            scores,
            free,
            strength,
        })
    }

    /// One sweep over the free nodes; returns the largest score change.
    pub fn sweep(&mut self) -> f64 {
        let c = self.scores.classes;
        let mut avg = vec![0.0; c];
        let mut change: f64 = 0.0;
        for (&i, &s) in self.free.iter().zip(&self.strength) {
            avg.fill(0.0);
            for nb in self.graph.neighbors(i) {
                for (a, &f) in avg.iter_mut().zip(self.scores.row(nb.node)) {
                    *a += nb.weight * f;
                }
            }
            let row = &mut self.scores.data[i * c..(i + 1) * c];
            for (f, a) in row.iter_mut().zip(&avg) {
                let next = a / s;
                change = change.max(libm::fabs(next - *f));
                *f = next;
            }
        }
        change
    }

    /// Largest `|f(i) - weighted neighbor average|` over free nodes and
    /// classes.
    pub fn residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (&i, &s) in self.free.iter().zip(&self.strength) {
            for k in 0..self.scores.classes {
                let avg: f64 = self
                    .graph
                    .neighbors(i)
                    .iter()
                    .map(|nb| nb.weight * self.scores.get(nb.node, k))
                    .sum::<f64>()
                    / s;
                worst = worst.max(libm::fabs(self.scores.get(i, k) - avg));
            }
        }
        worst
    }

    pub fn scores(&self) -> &ScoreTable {
        &self.scores
    }

    pub fn is_free(&self, node: usize) -> bool {
        self.free.binary_search(&node).is_ok()
    }

    pub fn into_scores(self) -> ScoreTable {
        self.scores
    }
}

/// Scores and decoded labels of a label-propagation run.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub scores: ScoreTable,
    pub labels: FullLabeling,
    pub sweeps: usize,
}

/// Multiclass label propagation: per class, the minimizer of the Dirichlet
/// energy with revealed nodes clamped to the class indicator, found by
/// sweeping until no score moves by `tol` or more. Each node takes its
/// highest-scoring class, ties to the smallest; components without revealed
/// nodes take the most frequent training class.
pub fn label_propagation(
    g: &WeightedGraph,
    y: &PartialLabeling,
    tol: f64,
    max_iters: usize,
) -> Result<Propagation> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    let mut solver = HarmonicSolver::new(g, y)?;
    let mut sweeps = 0;
    loop {
        if sweeps == max_iters {
            return Err(Error::NotConverged {
                iterations: sweeps,
                residual: solver.residual(),
            });
        }
        sweeps += 1;
        if solver.sweep() < tol {
            break;
        }
    }
    let fallback = y.plurality().ok_or(Error::NoRevealedNodes)?;
    let labels = (0..g.node_count())
        .map(|i| match y.get(i) {
            Some(k) => k,
            None if solver.is_free(i) => argmax_score(solver.scores().row(i)),
            None => fallback,
        })
        .collect();
    Ok(Propagation {
        labels: FullLabeling::new(labels, y.classes())?,
        scores: solver.into_scores(),
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn path(n: usize) -> WeightedGraph {
        WeightedGraph::from_edges((0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    #[test]
    fn midpoint_of_three_path() {
        let y = PartialLabeling::new(vec![Some(0), None, Some(1)], 2).unwrap();
        let p = label_propagation(&path(3), &y, 1e-9, 100).unwrap();
        assert_eq!(p.scores.get(1, 0), 0.5);
        assert_eq!(p.scores.get(1, 1), 0.5);
        assert_eq!(p.labels.get(1), 0);
    }

    #[test]
    fn four_path_closed_form() {
        // f(1) = (1 + f(2)) / 2, f(2) = f(1) / 2  =>  f(1) = 2/3, f(2) = 1/3.
        let y = PartialLabeling::new(vec![Some(0), None, None, Some(1)], 2).unwrap();
        let p = label_propagation(&path(4), &y, DEFAULT_LABPROP_TOL, DEFAULT_LABPROP_MAX_ITERS)
            .unwrap();
        let expected = [1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0];
        for (i, e) in expected.iter().enumerate() {
            assert!((p.scores.get(i, 0) - e).abs() < 1e-6);
        }
        assert_eq!(p.labels.as_slice(), &[0, 0, 1, 1]);
    }

    #[test]
    fn single_class_spreads_everywhere() {
        let g = WeightedGraph::from_edges([(0, 1, 1.0), (1, 2, 3.0), (2, 3, 0.5), (1, 3, 2.0)])
            .unwrap();
        let y = PartialLabeling::new(vec![None, Some(2), None, None], 3).unwrap();
        let p = label_propagation(&g, &y, 1e-8, 1000).unwrap();
        assert_eq!(p.labels.as_slice(), &[2, 2, 2, 2]);
    }

    #[test]
    fn reports_non_convergence() {
        let y = PartialLabeling::new(
            vec![Some(0), None, None, None, None, None, None, Some(1)],
            2,
        )
        .unwrap();
        let err = label_propagation(&path(8), &y, 1e-12, 2).unwrap_err();
        assert!(matches!(err, Error::NotConverged { iterations: 2, .. }));
    }

    #[test]
    fn energy_never_increases() {
        let g = WeightedGraph::from_edges([
            (0, 1, 1.0),
            (1, 2, 2.0),
            (2, 3, 0.5),
            (3, 0, 1.5),
            (1, 3, 0.7),
            (3, 4, 1.0),
        ])
        .unwrap();
        let y = PartialLabeling::new(vec![Some(0), None, Some(1), None, Some(2)], 3).unwrap();
        let mut solver = HarmonicSolver::new(&g, &y).unwrap();
        let mut prev: Vec<f64> = (0..3)
            .map(|k| dirichlet_energy(&g, solver.scores(), k))
            .collect();
        for _ in 0..20 {
            solver.sweep();
            for k in 0..3 {
                let e = dirichlet_energy(&g, solver.scores(), k);
                assert!(e <= prev[k] + 1e-9);
                prev[k] = e;
            }
        }
    }

    #[test]
    fn unanchored_component_uses_plurality() {
        let g = WeightedGraph::from_edges([(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let y = PartialLabeling::new(vec![Some(1), None, None, None], 2).unwrap();
        let p = label_propagation(&g, &y, 1e-6, 100).unwrap();
        assert_eq!(p.labels.as_slice(), &[1, 1, 1, 1]);
    }
}
