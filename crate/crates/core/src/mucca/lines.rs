use alloc::vec::Vec;

use super::hinge::{HingeDecomposition, HingeLine, NodeKind};
use crate::graph::{FullLabeling, PartialLabeling};
use crate::{Error, Result};

/// Index of the edge at which a line whose endpoints disagree is cut.
///
/// The cut is always a minimum-weight edge. When several edges share the
/// minimum, the one whose midpoint lies nearest, in resistance distance
/// (`sum(1 / w)`), to the middle of the line is taken, so the interior is
/// split between the two endpoints by proximity. Remaining ties go toward
/// the start of the line.
pub fn cut_position(weights: &[f64]) -> usize {
    let min = weights.iter().copied().fold(f64::INFINITY, f64::min);
    let mut candidates = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w == min)
        .map(|(i, _)| i);
    let first = candidates
        .next()
        .expect("a hinge line has at least one edge");
    let Some(second) = candidates.next() else {
        return first;
    };

    let mut position = Vec::with_capacity(weights.len() + 1);
    let mut acc = 0.0;
    position.push(acc);
    for &w in weights {
        acc += 1.0 / w;
        position.push(acc);
    }
    let middle = acc / 2.0;
    let offset = |i: usize| libm::fabs((position[i] + position[i + 1]) / 2.0 - middle);
    let mut best = first;
    for i in core::iter::once(second).chain(candidates) {
        if offset(i) < offset(best) {
            best = i;
        }
    }
    best
}

/// Labels the interior of one line given its endpoint labels.
pub(crate) fn label_line(line: HingeLine<'_>, labels: &mut [usize]) {
    let (a, b) = (labels[line.start()], labels[line.end()]);
    let interior = line.interior();
    if a == b {
        interior.iter().for_each(|&v| labels[v] = a);
        return;
    }
    // Edge `cut` joins nodes[cut] and nodes[cut + 1]; interior node at
    // line position p (1-based) sits before the cut when p <= cut.
    let cut = cut_position(line.weights);
    for (i, &v) in interior.iter().enumerate() {
        labels[v] = if i < cut { a } else { b };
    }
}

/// Marks a node not labeled yet in the dense label vectors below.
pub(crate) const UNSET: usize = usize::MAX;

/// Phase 3 on a dense label vector: `labels` holds the revealed labels and
/// [`UNSET`] elsewhere; forks and line interiors get labeled in place.
pub(crate) fn cut_lines_in_place(
    d: &HingeDecomposition,
    fork_labels: &[(usize, usize)],
    labels: &mut [usize],
) -> Result<()> {
    for &(f, k) in fork_labels {
        labels[f] = k;
    }
    for line in d.lines() {
        for end in [line.start(), line.end()] {
            if labels[end] == UNSET {
                return Err(Error::UnlabeledHingeNode(end));
            }
        }
        label_line(line, labels);
    }
    match d.forks().iter().find(|&&f| labels[f] == UNSET) {
        Some(&f) => Err(Error::UnlabeledHingeNode(f)),
        None => Ok(()),
    }
}

/// Phase 4 in place: grafted nodes copy their anchor, orphans take
/// `fallback`.
pub(crate) fn graft_in_place(
    d: &HingeDecomposition,
    fallback: usize,
    labels: &mut [usize],
) -> Result<()> {
    for v in 0..labels.len() {
        match d.kind[v] {
            NodeKind::Grafted => {
                let anchor = d.attachment(v).expect("grafted nodes have an attachment");
                if labels[anchor] == UNSET {
                    return Err(Error::UnlabeledHingeNode(anchor));
                }
                labels[v] = labels[anchor];
            }
            NodeKind::Orphan => labels[v] = fallback,
            _ if labels[v] == UNSET => return Err(Error::UnlabeledHingeNode(v)),
            _ => {}
        }
    }
    Ok(())
}

pub(crate) fn dense(y: &PartialLabeling) -> Vec<usize> {
    y.as_slice().iter().map(|l| l.unwrap_or(UNSET)).collect()
}

/// Phase 3: labels hinge nodes (revealed or forks) and the interiors of all
/// hinge lines. Lines whose endpoints agree are labeled uniformly; the
/// others are split at their ε-edge (see [`cut_position`]).
pub fn cut_hinge_lines(
    y: &PartialLabeling,
    d: &HingeDecomposition,
    fork_labels: &[(usize, usize)],
) -> Result<Vec<Option<usize>>> {
    let mut labels = dense(y);
    cut_lines_in_place(d, fork_labels, &mut labels)?;
    Ok(labels
        .into_iter()
        .map(|k| (k != UNSET).then_some(k))
        .collect())
}

/// Phase 4: every grafted node takes the label of the black-line node its
/// subtree hangs from. Components without any revealed node take
/// `fallback`.
pub fn label_grafted(
    d: &HingeDecomposition,
    partial: &[Option<usize>],
    classes: usize,
    fallback: usize,
) -> Result<FullLabeling> {
    let mut labels: Vec<usize> = partial.iter().map(|l| l.unwrap_or(UNSET)).collect();
    graft_in_place(d, fallback, &mut labels)?;
    FullLabeling::new(labels, classes)
}
