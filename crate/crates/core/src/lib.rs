//! Minimal spanning trees on direct product graphs with i.i.d. uniform edge
//! labels, certified free minimal spanning forest verdicts on finite windows,
//! and Monte Carlo experiments built on them.

pub mod cli;
pub mod cluster;
pub mod dsu;
pub mod edgelist;
pub mod error;
pub mod experiments;
pub mod forest;
pub mod graph;
pub mod labeling;
pub mod manifest;
pub mod stats;
pub mod window;

pub use error::{Error, Result};
