//! Ring-terminated random walks on undirected graphs.
//!
//! A walk that stops the first time it steps onto a node already on its trail
//! is cheap to simulate and its length is sensitive to community structure.
//! [`walk::random_walk_modularity`] compares the mean ring length of a graph
//! against its configuration-model null. [`local::find_community`] ranks nodes
//! by walk visits from a seed and sweeps the ranking for low conductance.
//! [`quality`] has Newman and conductance modularity, similarity against
//! ground truth, and a per-graph report.

pub mod error;
pub mod graph;
pub mod local;
pub mod quality;
pub mod seed;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{Adjacency, Graph, MultiGraph, NodeId, Partition, PlantedSpec};
pub use local::{find_community, Community, ScoreTable, SupportVector, SweepProfile};
pub use quality::{ModularityReport, ReportConfig};
pub use walk::{RingWalker, RwlEstimate, RwmEstimate, StartPolicy, WalkOutcome};
