//! Friendly cut sparsifiers, single-source minimum cuts for unfriendly
//! pairs, isolating cuts and Gomory-Hu trees, with a brute-force oracle
//! for checking all of them on small graphs.
//!
//! A cut is *unfriendly* when some node sends more than 0.6 of its degree
//! across it, and *friendly* otherwise. Friendly sparsifiers contract a
//! graph while keeping every friendly cut up to a given value intact.

pub mod bench;
pub mod cag;
pub mod error;
pub mod expander;
pub mod generators;
pub mod gomory_hu;
pub mod graph;
pub mod io;
pub mod isolating;
pub mod maxflow;
pub mod oracle;
pub mod sparsifier;
pub mod unfriendly;
pub mod unionfind;

pub use error::{Error, Result};
pub use graph::{ContractionMap, Cut, Graph, NodeId, Sparsifier, Weight};
