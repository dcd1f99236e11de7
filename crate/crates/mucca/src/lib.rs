//! File formats, synthetic data and the experiment harness around
//! [`mucca_core`].

pub mod experiment;
pub mod io;
pub mod synth;
