//! Multiclass transductive node classification on weighted graphs.
//!
//! The centerpiece is [`mucca::predict`], a linear-time predictor that labels
//! every node of a spanning tree so that the result is a pure Nash equilibrium
//! of the graph transduction game: each unlabeled node agrees, by total edge
//! weight, with its neighbors at least as much as under any other class.
//!
//! Around it sit the pieces needed to use and evaluate it:
//!
//! * [`graph`]: weighted graphs and (partial) labelings,
//! * [`spanning`]: maximum-similarity and Wilson random spanning trees,
//! * [`game`]: payoffs, equilibrium checks and the replicator-dynamics solver,
//! * [`baselines`]: weighted majority vote and label propagation,
//! * [`knn`]: k-nearest-neighbour similarity graphs from feature vectors,
//! * [`eval`]: training splits, committees and error rates.
//!
//! The crate is `no_std` and only needs `alloc`; file formats and the
//! experiment driver live in the `mucca` companion crate.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod error;
pub mod eval;
pub mod game;
pub mod graph;
pub mod knn;
pub mod mucca;
pub mod spanning;

pub use error::{Error, Result};
pub use graph::{FullLabeling, PartialLabeling, WeightedGraph};
pub use spanning::SpanningTree;
