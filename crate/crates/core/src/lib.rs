//! Local max-cut algorithms on high-girth regular graphs.
//!
//! The crate bundles five pieces that are meant to be used together:
//!
//! * [`graph`]: simple undirected graphs, instance generators (configuration
//!   model, girth repair, lattices, unions) and cut/girth/ball queries.
//! * [`local_gaussian`]: the k-local Gaussian wave algorithm, its tree
//!   Monte Carlo oracle and the closed-form limiting cut fraction.
//! * [`spectral`]: the minimum-eigenvector (ALR) cut and its truncated
//!   power-method cousin.
//! * [`qaoa`]: exact statevector QAOA for max-cut with parameter search and
//!   shot sampling.
//! * [`audit`]: empirical checks of locality, centeredness and the one-local
//!   correlation bound on batches of sampled cuts.
//!
//! Everything is deterministic given explicit seeds.

pub mod audit;
pub mod graph;
pub mod local_gaussian;
pub mod qaoa;
pub mod rng;
pub mod spectral;
pub mod stats;

pub use graph::{Cut, Girth, Graph, GraphError};
