//! Betweenness centrality for weighted undirected graphs with a module structure.
//!
//! - [`exact`]: Brandes betweenness and a brute-force oracle.
//! - [`modular`]: local + external decomposition, exact when intra-module shortest
//!   paths never leave their module.
//! - [`coarse`]: module-graph approximation crediting connector vertices.
//! - [`synth`]: seeded modular graph generator.
//! - [`bench`]: timing harness.

pub mod bench;
pub mod centrality;
pub mod coarse;
pub mod exact;
pub mod graph;
pub mod io;
pub mod modular;
pub mod synth;

pub use centrality::{argmax, CentralityVector, Measure};
pub use graph::{classify_edges, quotient_graph, Edge, Graph, GraphError, ModulePartition, NodeId};
