//! Comparison predictors working on the full graph.

mod labprop;
mod wmv;

pub use labprop::{
    dirichlet_energy, label_propagation, HarmonicSolver, Propagation, ScoreTable,
    DEFAULT_LABPROP_MAX_ITERS, DEFAULT_LABPROP_TOL,
};
pub use wmv::wmv_predict;
