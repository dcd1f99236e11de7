//! Spanning trees (forests, on disconnected input) of a weighted graph.
//!
//! Two constructions are provided: the maximum-similarity tree, i.e. the
//! tree of minimum total resistance `sum(1 / w)`, built with Kruskal, and
//! random trees drawn by Wilson's loop-erased random walks.

mod union_find;
mod wilson;

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{component_ids, WeightedGraph};
use crate::{Error, Result};

pub use union_find::UnionFind;
pub use wilson::wilson_random_spanning_tree;

const NO_PARENT: usize = usize::MAX;

/// A rooted spanning forest over the nodes of a source graph.
///
/// Every tree edge is identified by its child node: the edge between `v`
/// and `parent(v)`. Nodes are also kept in a top-down order (every parent
/// precedes its children), which the tree algorithms use for linear-time
/// passes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    roots: Vec<usize>,
    /// Parent of each node, [`NO_PARENT`] for roots.
    parent: Vec<usize>,
    parent_weight: Vec<f64>,
    parent_edge: Vec<Option<usize>>,
    order: Vec<usize>,
    child_offsets: Vec<usize>,
    children: Vec<usize>,
}

/// A neighbor in the tree, with the child node naming the connecting edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeNeighbor {
    pub node: usize,
    pub weight: f64,
    pub key: usize,
}

impl SpanningTree {
    /// Assembles a forest from parent links. `parent_edge` holds the id of
    /// each parent edge in the source graph (`None` for roots).
    pub fn from_parents(
        parent: Vec<Option<usize>>,
        parent_weight: Vec<f64>,
        parent_edge: Vec<Option<usize>>,
    ) -> Result<Self> {
        let n = parent.len();
        if parent_weight.len() != n || parent_edge.len() != n {
            return Err(Error::InvalidTree("parent arrays differ in length"));
        }
        let mut count = vec![0usize; n + 1];
        let mut roots = Vec::new();
        for (v, p) in parent.iter().enumerate() {
            match *p {
                Some(p) if p >= n => return Err(Error::InvalidTree("parent out of range")),
                Some(p) => count[p + 1] += 1,
                None => roots.push(v),
            }
        }
        for i in 0..n {
            count[i + 1] += count[i];
        }
        let child_offsets = count;
        let mut cursor = child_offsets.clone();
        let mut children = vec![0; n - roots.len()];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                children[cursor[p]] = v;
                cursor[p] += 1;
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut queue: VecDeque<usize> = roots.iter().copied().collect();
        while let Some(u) = queue.pop_front() {
            order.push(u);
            queue.extend(&children[child_offsets[u]..child_offsets[u + 1]]);
        }
        if order.len() != n {
            return Err(Error::InvalidTree("parent links contain a cycle"));
        }
        let parent = parent.into_iter().map(|p| p.unwrap_or(NO_PARENT)).collect();
        Ok(Self {
            roots,
            parent,
            parent_weight,
            parent_edge,
            order,
            child_offsets,
            children,
        })
    }

    /// Orients the edges `edge_ids` of `g` away from the smallest node of
    /// each component.
    pub fn from_edge_ids(g: &WeightedGraph, edge_ids: &[usize]) -> Result<Self> {
        let n = g.node_count();
        let mut sub = Vec::with_capacity(edge_ids.len());
        for &id in edge_ids {
            let e = g.edge(id);
            sub.push((e.u, e.v, e.weight));
        }
        let forest = WeightedGraph::with_node_count(n, sub)?;
        let mut parent = vec![None; n];
        let mut parent_weight = vec![0.0; n];
        let mut parent_edge = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for nb in forest.neighbors(u) {
                    if seen[nb.node] {
                        if parent[u] != Some(nb.node) {
                            return Err(Error::InvalidTree("edge set contains a cycle"));
                        }
                        continue;
                    }
                    seen[nb.node] = true;
                    parent[nb.node] = Some(u);
                    parent_weight[nb.node] = nb.weight;
                    parent_edge[nb.node] = Some(edge_ids[nb.edge]);
                    queue.push_back(nb.node);
                }
            }
        }
        Self::from_parents(parent, parent_weight, parent_edge)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Root of the first component.
    pub fn root(&self) -> Option<usize> {
        self.roots.first().copied()
    }

    /// One root per component.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    #[inline]
    pub fn parent(&self, v: usize) -> Option<usize> {
        Some(self.parent[v]).filter(|&p| p != NO_PARENT)
    }

    #[inline]
    pub fn parent_weight(&self, v: usize) -> f64 {
        self.parent_weight[v]
    }

    /// Id, in the source graph, of the edge from `v` to its parent.
    #[inline]
    pub fn parent_edge(&self, v: usize) -> Option<usize> {
        self.parent_edge[v]
    }

    #[inline]
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[self.child_offsets[v]..self.child_offsets[v + 1]]
    }

    /// Nodes ordered so that every parent precedes its children.
    pub fn top_down(&self) -> &[usize] {
        &self.order
    }

    pub fn degree(&self, v: usize) -> usize {
        self.children(v).len() + usize::from(self.parent[v] != NO_PARENT)
    }

    /// Parent (if any) followed by the children of `v`.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = TreeNeighbor> + '_ {
        let up = self.parent(v).map(|p| TreeNeighbor {
            node: p,
            weight: self.parent_weight[v],
            key: v,
        });
        up.into_iter()
            .chain(self.children(v).iter().map(move |&c| TreeNeighbor {
                node: c,
                weight: self.parent_weight[c],
                key: c,
            }))
    }

    /// Tree edges as `(child, parent, weight)`, in node order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.node_count()).filter_map(|v| self.parent(v).map(|p| (v, p, self.parent_weight[v])))
    }

    pub fn edge_count(&self) -> usize {
        self.node_count() - self.roots.len()
    }

    /// Source-graph ids of the tree edges, sorted.
    pub fn edge_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.parent_edge.iter().flatten().copied().collect();
        ids.sort_unstable();
        ids
    }

    pub fn total_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).sum()
    }

    /// The tree as a standalone graph over the same node ids.
    pub fn to_graph(&self) -> WeightedGraph {
        WeightedGraph::with_node_count(self.node_count(), self.edges())
            .expect("tree edges form a simple graph")
    }

    /// Checks that this is a spanning forest of `g`: one root per component
    /// of `g`, and every tree edge present in `g` with the same weight.
    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        let n = g.node_count();
        if self.node_count() != n {
            return Err(Error::InvalidTree("node count differs from the graph"));
        }
        if self.order.len() != n {
            return Err(Error::InvalidTree("parent links do not reach every node"));
        }
        for v in 0..n {
            let Some(p) = self.parent(v) else { continue };
            let id = self.parent_edge[v].ok_or(Error::InvalidTree("missing parent edge id"))?;
            if id >= g.edge_count() {
                return Err(Error::InvalidTree("parent edge id out of range"));
            }
            let e = g.edge(id);
            if !((e.u == v && e.v == p) || (e.u == p && e.v == v)) {
                return Err(Error::InvalidTree(
                    "parent edge does not join child and parent",
                ));
            }
            if e.weight != self.parent_weight[v] {
                return Err(Error::InvalidTree(
                    "parent edge weight differs from the graph",
                ));
            }
        }
        let (comp, count) = component_ids(g);
        if self.roots.len() != count {
            return Err(Error::InvalidTree(
                "root count differs from component count",
            ));
        }
        let mut rooted = vec![false; count];
        for &r in &self.roots {
            if core::mem::replace(&mut rooted[comp[r]], true) {
                return Err(Error::InvalidTree("two roots in one component"));
            }
        }
        Ok(())
    }
}

/// Spanning forest maximizing total similarity, equivalently minimizing
/// total resistance `sum(1 / w)` over tree edges.
///
/// Kruskal over edges sorted by decreasing weight; equal weights keep the
/// smaller edge id. Each component is rooted at its smallest node.
pub fn max_similarity_spanning_tree(g: &WeightedGraph) -> SpanningTree {
    let mut ids: Vec<usize> = (0..g.edge_count()).collect();
    ids.sort_by(|&a, &b| {
        g.edge(b)
            .weight
            .total_cmp(&g.edge(a).weight)
            .then(a.cmp(&b))
    });
    let mut uf = UnionFind::new(g.node_count());
    let mut keep = Vec::with_capacity(g.node_count().saturating_sub(1));
    for id in ids {
        let e = g.edge(id);
        if uf.union(e.u, e.v) {
            keep.push(id);
        }
    }
    SpanningTree::from_edge_ids(g, &keep).expect("kruskal output is a forest")
}
