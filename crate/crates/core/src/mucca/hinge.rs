use alloc::vec;
use alloc::vec::Vec;

use crate::graph::PartialLabeling;
use crate::spanning::SpanningTree;
use crate::{Error, Result};

/// Role of a node in the hinge decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Revealed,
    Fork,
    /// Interior node of a hinge line.
    LineInterior,
    /// Member of a grafted tree hanging off a single black-line node.
    Grafted,
    /// Member of a tree component that holds no revealed node.
    Orphan,
}

/// Edges on paths between revealed nodes, plus the forks they create.
///
/// Tree edges are named by their child node, so `flags[v]` refers to the
/// edge `(v, parent(v))`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlackLines {
    pub flags: Vec<bool>,
    pub black_degree: Vec<usize>,
    pub forks: Vec<usize>,
}

impl BlackLines {
    #[inline]
    pub fn is_black(&self, key: usize) -> bool {
        self.flags[key]
    }
}

/// Path between two hinge nodes whose interior holds no hinge node.
/// `weights[i]` is the weight of the edge between `nodes[i]` and
/// `nodes[i + 1]`; the first node is smaller than the last.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HingeLine<'a> {
    pub nodes: &'a [usize],
    pub weights: &'a [f64],
}

impl<'a> HingeLine<'a> {
    #[inline]
    pub fn start(&self) -> usize {
        self.nodes[0]
    }

    #[inline]
    pub fn end(&self) -> usize {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn interior(&self) -> &'a [usize] {
        &self.nodes[1..self.nodes.len() - 1]
    }
}

const NO_ANCHOR: usize = usize::MAX;

/// Full annotation of a tree with respect to a set of revealed nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct HingeDecomposition {
    pub black: BlackLines,
    pub kind: Vec<NodeKind>,
    anchor: Vec<usize>,
    // Line i is line_nodes[line_starts[i] + i..line_starts[i + 1] + i + 1]
    // with weights line_weights[line_starts[i]..line_starts[i + 1]].
    line_nodes: Vec<usize>,
    line_weights: Vec<f64>,
    line_starts: Vec<usize>,
    /// Hinge nodes in increasing order, and the lines at each as CSR.
    hinges: Vec<usize>,
    line_offsets: Vec<usize>,
    line_index: Vec<usize>,
}

/// Phase 1: flags every tree edge that lies on a path between two revealed
/// nodes, and finds the forks.
///
/// An edge is on such a path exactly when both sides of it contain a
/// revealed node, so one bottom-up count of revealed nodes per subtree
/// settles every edge in linear time. A fork is an unrevealed node with at
/// least three incident black-line edges.
pub fn mark_black_lines(t: &SpanningTree, y: &PartialLabeling) -> Result<BlackLines> {
    let n = t.node_count();
    y.check_len(n)?;
    if y.revealed_count() == 0 {
        return Err(Error::NoRevealedNodes);
    }
    let mut below = vec![0u32; n];
    for &v in t.top_down().iter().rev() {
        below[v] += u32::from(y.is_revealed(v));
        if let Some(p) = t.parent(v) {
            below[p] += below[v];
        }
    }
    // outside[v]: some revealed node lies outside the subtree of v. The edge
    // above v is black iff it has revealed nodes on both sides.
    let mut outside = vec![false; n];
    let mut flags = vec![false; n];
    let mut black_degree = vec![0usize; n];
    for &v in t.top_down() {
        let Some(p) = t.parent(v) else { continue };
        outside[v] = outside[p] || below[p] > below[v];
        if below[v] > 0 && outside[v] {
            flags[v] = true;
            black_degree[v] += 1;
            black_degree[p] += 1;
        }
    }
    let forks = (0..n)
        .filter(|&v| !y.is_revealed(v) && black_degree[v] >= 3)
        .collect();
    Ok(BlackLines {
        flags,
        black_degree,
        forks,
    })
}

impl HingeDecomposition {
    /// Phase 1 plus the hinge lines and grafted trees derived from it.
    pub fn new(t: &SpanningTree, y: &PartialLabeling) -> Result<Self> {
        let black = mark_black_lines(t, y)?;
        let n = t.node_count();

        let mut kind: Vec<NodeKind> = (0..n)
            .map(|v| {
                if y.is_revealed(v) {
                    NodeKind::Revealed
                } else if black.black_degree[v] >= 3 {
                    NodeKind::Fork
                } else if black.black_degree[v] > 0 {
                    NodeKind::LineInterior
                } else {
                    NodeKind::Orphan
                }
            })
            .collect();
        let is_hinge = |v: usize| matches!(kind[v], NodeKind::Revealed | NodeKind::Fork);

        // Hinge nodes are visited in id order and a line is walked only from
        // the first of its ends reached, so every line starts at its smaller
        // end. `walked` marks the last edge of each finished walk.
        let mut walked = vec![false; n];
        let (mut line_nodes, mut line_weights, mut line_starts) = (Vec::new(), Vec::new(), vec![0]);
        let mut hinges = Vec::new();
        for h in 0..n {
            if !is_hinge(h) {
                continue;
            }
            hinges.push(h);
            for first in t.neighbors(h) {
                if !black.is_black(first.key) || walked[first.key] {
                    continue;
                }
                line_nodes.extend([h, first.node]);
                line_weights.push(first.weight);
                let (mut prev, mut cur, mut last) = (h, first.node, first.key);
                while !is_hinge(cur) {
                    let key = match t.parent(cur) {
                        Some(p) if p != prev && black.is_black(cur) => cur,
                        _ => *t
                            .children(cur)
                            .iter()
                            .find(|&&c| c != prev && black.is_black(c))
                            .expect("interior line nodes have two black edges"),
                    };
                    let next = if key == cur {
                        t.parent(cur).expect("checked above")
                    } else {
                        key
                    };
                    line_nodes.push(next);
                    line_weights.push(t.parent_weight(key));
                    (prev, cur, last) = (cur, next, key);
                }
                walked[last] = true;
                line_starts.push(line_weights.len());
            }
        }
        drop(walked);

        // Everything off the black-line subtree hangs from it: below it, from
        // the nearest black-line ancestor; elsewhere, from its topmost node.
        // The ancestors of that top node get it first, then the rest of the
        // component inherits anchors top-down.
        let mut anchor = vec![NO_ANCHOR; n];
        for top in 0..n {
            if kind[top] == NodeKind::Orphan
                || t.parent(top).is_some_and(|p| kind[p] != NodeKind::Orphan)
            {
                continue;
            }
            let mut a = t.parent(top);
            while let Some(v) = a {
                anchor[v] = top;
                a = t.parent(v);
            }
        }
        for &v in t.top_down() {
            if kind[v] != NodeKind::Orphan {
                continue;
            }
            if anchor[v] == NO_ANCHOR {
                if let Some(p) = t.parent(v) {
                    anchor[v] = match kind[p] {
                        NodeKind::Grafted | NodeKind::Orphan => anchor[p],
                        _ => p,
                    };
                }
            }
            if anchor[v] != NO_ANCHOR {
                kind[v] = NodeKind::Grafted;
            }
        }

        let mut d = Self {
            black,
            kind,
            anchor,
            line_nodes,
            line_weights,
            line_starts,
            hinges,
            line_offsets: Vec::new(),
            line_index: Vec::new(),
        };
        let rank = |v: usize| {
            d.hinges
                .binary_search(&v)
                .expect("lines end at hinge nodes")
        };
        let ends: Vec<(usize, usize)> = d
            .lines()
            .enumerate()
            .flat_map(|(i, l)| [(rank(l.start()), i), (rank(l.end()), i)])
            .collect();
        (d.line_offsets, d.line_index) = group(d.hinges.len(), ends);
        Ok(d)
    }

    /// For a grafted node, the black-line node its subtree hangs from.
    #[inline]
    pub fn attachment(&self, v: usize) -> Option<usize> {
        Some(self.anchor[v]).filter(|&a| a != NO_ANCHOR)
    }

    pub fn line_count(&self) -> usize {
        self.line_starts.len() - 1
    }

    pub fn line(&self, i: usize) -> HingeLine<'_> {
        let (a, b) = (self.line_starts[i], self.line_starts[i + 1]);
        HingeLine {
            nodes: &self.line_nodes[a + i..b + i + 1],
            weights: &self.line_weights[a..b],
        }
    }

    pub fn lines(&self) -> impl ExactSizeIterator<Item = HingeLine<'_>> + '_ {
        (0..self.line_count()).map(|i| self.line(i))
    }

    #[inline]
    pub fn forks(&self) -> &[usize] {
        &self.black.forks
    }

    #[inline]
    pub fn is_hinge(&self, v: usize) -> bool {
        matches!(self.kind[v], NodeKind::Revealed | NodeKind::Fork)
    }

    /// Indices of the hinge lines ending at `v`; empty unless `v` is a
    /// hinge node.
    pub fn lines_at(&self, v: usize) -> &[usize] {
        match self.hinges.binary_search(&v) {
            Ok(r) => &self.line_index[self.line_offsets[r]..self.line_offsets[r + 1]],
            Err(_) => &[],
        }
    }
}

/// Buckets `(key, value)` pairs by key into compressed rows.
fn group(n: usize, pairs: Vec<(usize, usize)>) -> (Vec<usize>, Vec<usize>) {
    let mut offsets = vec![0usize; n + 1];
    for &(k, _) in &pairs {
        offsets[k + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    // offsets[k] serves as the write cursor of row k; afterwards it points
    // at the start of row k + 1, so shifting by one restores the starts.
    let mut index = vec![0; pairs.len()];
    for (k, v) in pairs {
        index[offsets[k]] = v;
        offsets[k] += 1;
    }
    offsets.copy_within(0..n, 1);
    offsets[0] = 0;
    (offsets, index)
}
