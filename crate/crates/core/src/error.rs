use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong inside the core algorithms.
///
/// Edge-list errors carry the 1-based line (or record) number of the input
/// that triggered them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: edge weight {weight} is not a positive finite number")]
    NonPositiveWeight { line: usize, weight: f64 },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: &'static str },
    #[error("node {node} is out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("no node carries a training label")]
    NoRevealedNodes,
    #[error("class {class} is out of range for {classes} classes")]
    ClassOutOfRange { class: usize, classes: usize },
    #[error("labeling covers {got} nodes but the graph has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("at least two classes are required, got {0}")]
    TooFewClasses(usize),
    #[error("tree does not match its source graph: {0}")]
    InvalidTree(&'static str),
    #[error("hinge node {0} has no label")]
    UnlabeledHingeNode(usize),
    #[error("node {node} is a training node with label {expected} but was given {got}")]
    InconsistentWithTraining {
        node: usize,
        expected: usize,
        got: usize,
    },
    #[error("search space of {classes}^{players} profiles exceeds the limit of {limit}")]
    TooLarge {
        classes: usize,
        players: usize,
        limit: u64,
    },
    #[error("undetermined player {0} has zero utility")]
    ZeroUtility(usize),
    #[error("strategy profile is invalid: {0}")]
    InvalidProfile(&'static str),
    #[error("did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("feature row {row} contains a non-finite value")]
    DegenerateFeatures { row: usize },
    #[error("no labeled nodes to sample from")]
    NoLabels,
    #[error("test set is empty")]
    EmptyTestSet,
}
