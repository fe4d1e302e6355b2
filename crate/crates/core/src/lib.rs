//! Sublinear s-t path search on expander graphs.
//!
//! Algorithms read graphs only through the metered [`Oracle`] interface;
//! spectral estimates, bound evaluators and the query-game harness sit
//! alongside them.

pub mod bounds;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod pathfind;
pub mod querygame;
pub mod rng;
pub mod spectral;

pub use graph::{Adjacency, Edge, Graph, GraphError, Multigraph, NodeId, Oracle, QueryCounters, QueryOracle};
pub use pathfind::{PathResult, PathStatus, WalkParams};
pub use rng::Seed;
pub use spectral::SpectralReport;
