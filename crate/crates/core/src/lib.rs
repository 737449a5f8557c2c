//! Exact minimum out-degree orientations of fully dynamic graphs.
//!
//! [`dynsolvers`] holds the three maintainers, all driven through the
//! [`Maintainer`] trait. [`static_solver`] computes an optimal orientation
//! from scratch, [`oracle`] provides brute-force ground truth for small
//! graphs, and [`io`] / [`bench`] cover instance files, the benchmark runner
//! and performance profiles.

pub mod bench;
pub mod dynsolvers;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pathfind;
pub mod static_solver;

pub use dynsolvers::{Algorithm, ImprovedDynOpt, Maintainer, NaiveDynOpt, StrongDynOpt};
pub use graph::{DynOrientedGraph, EdgeRef, GraphError, VertexId};
pub use pathfind::{PathBackend, PathSearcher, SearchStats};
