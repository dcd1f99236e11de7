//! Weighted undirected graphs and node labelings.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// An undirected edge with a strictly positive similarity weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    /// The endpoint of this edge that is not `node`.
    #[inline]
    pub fn other(&self, node: usize) -> usize {
        if self.u == node {
            self.v
        } else {
            self.u
        }
    }
}

/// One entry of a node's adjacency list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub node: usize,
    pub weight: f64,
    pub edge: usize,
}

/// Undirected graph over dense node ids `0..n` with positive edge weights.
///
/// Adjacency is stored in compressed form, so `neighbors(u)` is a slice
/// lookup. Graphs are immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    adjacency: Vec<Neighbor>,
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, w)` records; errors name the 1-based
    /// record position. The node count is one more than the largest id.
    pub fn from_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        Self::from_numbered_edges(
            edges
                .into_iter()
                .enumerate()
                .map(|(i, (u, v, w))| (i + 1, u, v, w)),
            0,
        )
    }

    /// Like [`from_edges`](Self::from_edges) but with an explicit node
    /// count, so trailing isolated nodes can exist.
    pub fn with_node_count<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let g = Self::from_numbered_edges(
            edges
                .into_iter()
                .enumerate()
                .map(|(i, (u, v, w))| (i + 1, u, v, w)),
            n,
        )?;
        if g.n > n {
            return Err(Error::NodeOutOfRange { node: g.n - 1, n });
        }
        Ok(g)
    }

    /// Builds a graph from `(line, u, v, w)` records, where `line` is the
    /// position reported in errors. The node count is
    /// `max(min_nodes, 1 + largest id)`.
    pub fn from_numbered_edges<I>(records: I, min_nodes: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, f64)>,
    {
        let mut seen = BTreeSet::new();
        let mut edges = Vec::new();
        let mut n = min_nodes;
        for (line, u, v, weight) in records {
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::NonPositiveWeight { line, weight });
            }
            if u == v {
                return Err(Error::SelfLoop { line, node: u });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge { line, u, v });
            }
            n = n.max(u + 1).max(v + 1);
            edges.push(Edge { u, v, weight });
        }
        Ok(Self::assemble(n, edges))
    }

    fn assemble(n: usize, edges: Vec<Edge>) -> Self {
        let mut degree = vec![0usize; n + 1];
        for e in &edges {
            degree[e.u + 1] += 1;
            degree[e.v + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut cursor = offsets.clone();
        let mut adjacency = vec![
            Neighbor {
                node: 0,
                weight: 0.0,
                edge: 0
            };
            2 * edges.len()
        ];
        for (id, e) in edges.iter().enumerate() {
            adjacency[cursor[e.u]] = Neighbor {
                node: e.v,
                weight: e.weight,
                edge: id,
            };
            cursor[e.u] += 1;
            adjacency[cursor[e.v]] = Neighbor {
                node: e.u,
                weight: e.weight,
                edge: id,
            };
            cursor[e.v] += 1;
        }
        Self {
            n,
            edges,
            offsets,
            adjacency,
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in insertion order; the index of an edge is its id.
    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    #[inline]
    pub fn neighbors(&self, node: usize) -> &[Neighbor] {
        &self.adjacency[self.offsets[node]..self.offsets[node + 1]]
    }

    #[inline]
    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    /// Sum of the weights of the edges incident to `node`.
    pub fn strength(&self, node: usize) -> f64 {
        self.neighbors(node).iter().map(|nb| nb.weight).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }
}

/// Training labels: some nodes carry a class in `0..classes`, the rest are
/// unrevealed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialLabeling {
    labels: Vec<Option<usize>>,
    classes: usize,
}

impl PartialLabeling {
    pub fn new(labels: Vec<Option<usize>>, classes: usize) -> Result<Self> {
        if let Some(&class) = labels.iter().flatten().find(|&&c| c >= classes) {
            return Err(Error::ClassOutOfRange { class, classes });
        }
        Ok(Self { labels, classes })
    }

    /// A labeling of `n` nodes with nothing revealed.
    pub fn unrevealed(n: usize, classes: usize) -> Self {
        Self {
            labels: vec![None; n],
            classes,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn classes(&self) -> usize {
        self.classes
    }

    #[inline]
    pub fn get(&self, node: usize) -> Option<usize> {
        self.labels[node]
    }

    #[inline]
    pub fn is_revealed(&self, node: usize) -> bool {
        self.labels[node].is_some()
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.labels
    }

    /// `(node, class)` pairs of the revealed nodes in node order.
    pub fn revealed(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.map(|c| (i, c)))
    }

    pub fn revealed_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    /// Most frequent revealed class, ties to the smallest id.
    pub fn plurality(&self) -> Option<usize> {
        let mut counts = vec![0usize; self.classes];
        for (_, c) in self.revealed() {
            counts[c] += 1;
        }
        argmax_count(&counts)
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.labels.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: self.labels.len(),
            });
        }
        Ok(())
    }
}

/// A class for every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullLabeling {
    labels: Vec<usize>,
    classes: usize,
}

impl FullLabeling {
    pub fn new(labels: Vec<usize>, classes: usize) -> Result<Self> {
        if let Some(&class) = labels.iter().find(|&&c| c >= classes) {
            return Err(Error::ClassOutOfRange { class, classes });
        }
        Ok(Self { labels, classes })
    }

    pub fn constant(n: usize, class: usize, classes: usize) -> Self {
        assert!(class < classes);
        Self {
            labels: vec![class; n],
            classes,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn classes(&self) -> usize {
        self.classes
    }

    #[inline]
    pub fn get(&self, node: usize) -> usize {
        self.labels[node]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.labels
    }

    /// True when every revealed node of `y` keeps its training class.
    pub fn agrees_with(&self, y: &PartialLabeling) -> bool {
        y.revealed().all(|(i, c)| self.labels[i] == c)
    }
}

/// Index of the largest count, ties to the smallest index; `None` if all
/// counts are zero.
pub(crate) fn argmax_count(counts: &[usize]) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (i, &c) in counts.iter().enumerate() {
        if c > 0 && best.is_none_or(|(_, b)| c > b) {
            best = Some((i, c));
        }
    }
    best.map(|(i, _)| i)
}

/// Index of the largest score, ties to the smallest index.
pub(crate) fn argmax_score(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Share of the total edge weight carried by edges whose endpoints have
/// different labels.
pub fn weighted_cut_fraction(g: &WeightedGraph, y: &FullLabeling) -> Result<f64> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if y.len() != g.node_count() {
        return Err(Error::SizeMismatch {
            expected: g.node_count(),
            got: y.len(),
        });
    }
    let mut cut = 0.0;
    let mut total = 0.0;
    for e in g.edges() {
        total += e.weight;
        if y.get(e.u) != y.get(e.v) {
            cut += e.weight;
        }
    }
    Ok(cut / total)
}

/// Component id of every node, numbered in order of each component's
/// smallest node, together with the component count.
pub fn component_ids(g: &WeightedGraph) -> (Vec<usize>, usize) {
    let n = g.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for nb in g.neighbors(u) {
                if comp[nb.node] == usize::MAX {
                    comp[nb.node] = count;
                    queue.push_back(nb.node);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

/// Partition of the nodes by reachability. Each component is sorted and the
/// components are ordered by their smallest node.
pub fn connected_components(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let (comp, count) = component_ids(g);
    let mut out = vec![Vec::new(); count];
    for (node, &c) in comp.iter().enumerate() {
        out[c].push(node);
    }
    out
}

/// Subgraph induced by `nodes`, renumbered densely in the given order.
/// Returns the subgraph and, per new id, the original node id.
pub fn induced_subgraph(g: &WeightedGraph, nodes: &[usize]) -> (WeightedGraph, Vec<usize>) {
    let mut new_id = vec![usize::MAX; g.node_count()];
    for (i, &v) in nodes.iter().enumerate() {
        new_id[v] = i;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| new_id[e.u] != usize::MAX && new_id[e.v] != usize::MAX)
        .map(|e| (new_id[e.u], new_id[e.v], e.weight));
    let sub =
        WeightedGraph::with_node_count(nodes.len(), edges).expect("subgraph of a simple graph");
    (sub, nodes.to_vec())
}

/// Largest connected component (smallest-node component on ties) as an
/// induced subgraph, with the original id of every kept node.
pub fn largest_component(g: &WeightedGraph) -> (WeightedGraph, Vec<usize>) {
    let components = connected_components(g);
    let biggest = components
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.len().cmp(&b.len()).then(j.cmp(i)))
        .map(|(_, c)| c.as_slice())
        .unwrap_or(&[]);
    induced_subgraph(g, biggest)
}
