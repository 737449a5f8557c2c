//! Exact fully dynamic Δ-orientation maintainers.
//!
//! All three keep the maximum out-degree optimal after every update. They
//! differ in how much work an update triggers:
//!
//! * [`NaiveDynOpt`] repeats peak-to-sink searches until one fails.
//! * [`StrongDynOpt`] keeps the orientation free of improving paths and runs
//!   exactly one search per update.
//! * [`ImprovedDynOpt`] only keeps peaks free of improving paths and skips
//!   searches whenever the update cannot touch a peak.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{DynOrientedGraph, GraphError, VertexId};
use crate::pathfind::{PathBackend, SearchStats};

mod improved;
mod naive;
mod strong;

pub use improved::ImprovedDynOpt;
pub use naive::NaiveDynOpt;
pub use strong::StrongDynOpt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invariant violated: {0}")]
pub struct InvariantViolation(pub String);

/// Shared update interface of the dynamic algorithms.
pub trait Maintainer: Send {
    fn insert(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError>;
    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError>;
    /// Current maximum out-degree; optimal after every completed update.
    fn delta(&self) -> usize;
    fn stats(&self) -> SearchStats;
    fn orientation(&self) -> &DynOrientedGraph;
    fn algorithm(&self) -> Algorithm;
    fn backend(&self) -> PathBackend;
    /// Full recount plus the improving-path scan this algorithm promises to
    /// keep empty.
    fn audit(&self) -> Result<(), InvariantViolation>;
    /// Searches issued from the peak-tightening sweeps (zero for algorithms
    /// without them).
    fn tighten_searches(&self) -> u64 {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Naive,
    Strong,
    Improved,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Naive, Algorithm::Strong, Algorithm::Improved];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::Strong => "strong",
            Algorithm::Improved => "improved",
        }
    }

    pub fn build(self, backend: PathBackend, n_hint: usize) -> Box<dyn Maintainer> {
        match self {
            Algorithm::Naive => Box::new(NaiveDynOpt::new(backend, n_hint)),
            Algorithm::Strong => Box::new(StrongDynOpt::new(backend, n_hint)),
            Algorithm::Improved => Box::new(ImprovedDynOpt::new(backend, n_hint)),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

impl fmt::Display for PathBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for PathBackend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PathBackend::ALL
            .into_iter()
            .find(|b| b.id() == s)
            .ok_or_else(|| format!("unknown backend `{s}`"))
    }
}

/// Tail and head for a new edge: the endpoint with smaller out-degree keeps
/// it, ties go to the smaller id.
pub(crate) fn orient_new_edge(g: &DynOrientedGraph, u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    let (du, dv) = (g.out_degree(u), g.out_degree(v));
    if du < dv || (du == dv && u < v) {
        (u, v)
    } else {
        (v, u)
    }
}

fn check_graph(g: &DynOrientedGraph) -> Result<(), InvariantViolation> {
    g.check_consistency().map_err(InvariantViolation)
}

fn check_no_improving_path(g: &DynOrientedGraph, from_peaks_only: bool) -> Result<(), InvariantViolation> {
    match crate::oracle::scan_improving_paths(g, from_peaks_only) {
        None => Ok(()),
        Some(p) => Err(InvariantViolation(format!("improving path {p:?}"))),
    }
}
