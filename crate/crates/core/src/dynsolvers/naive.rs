use crate::graph::{DynOrientedGraph, GraphError, VertexId};
use crate::pathfind::{Exploration, PathBackend, PathSearcher, SearchStats};

use super::{check_graph, check_no_improving_path, orient_new_edge, Algorithm, InvariantViolation, Maintainer};

/// Re-runs the static peak-to-sink search from the current orientation after
/// every update, flipping paths until a search comes back empty.
pub struct NaiveDynOpt {
    g: DynOrientedGraph,
    searcher: PathSearcher,
    backend: PathBackend,
    peaks: Vec<VertexId>,
}

impl NaiveDynOpt {
    pub fn new(backend: PathBackend, n_hint: usize) -> Self {
        NaiveDynOpt {
            g: DynOrientedGraph::with_degree_buckets(n_hint),
            searcher: PathSearcher::new(),
            backend,
            peaks: Vec::new(),
        }
    }

    fn improve_once(&mut self) -> bool {
        let delta = self.g.max_out_degree();
        if delta < 2 {
            return false;
        }
        self.peaks.clear();
        self.peaks
            .extend_from_slice(self.g.vertices_with_out_degree(delta).expect("bucketed graph"));
        match self.backend {
            PathBackend::BreadthFirst => self
                .searcher
                .bfs_find_and_flip(&mut self.g, &self.peaks, Exploration::DegreeRestricted)
                .expect("peaks share one out-degree"),
            PathBackend::DepthFirst => {
                // one depth-first search per peak; failed searches share marks
                self.peaks.sort_unstable();
                self.searcher.set_shared_visited(true);
                let mut found = false;
                for &p in &self.peaks {
                    if self.searcher.find_and_flip_path(&mut self.g, p) {
                        found = true;
                        break;
                    }
                }
                self.searcher.set_shared_visited(false);
                found
            }
        }
    }

    fn settle(&mut self) {
        while self.improve_once() {}
    }
}

impl Maintainer for NaiveDynOpt {
    fn insert(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let (tail, head) = orient_new_edge(&self.g, u, v);
        self.g.insert_oriented(tail, head)?;
        self.settle();
        Ok(())
    }

    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let e = self.g.orientation_of(u, v).ok_or(GraphError::EdgeNotFound(u, v))?;
        self.g.remove_oriented(e.from, e.to)?;
        self.settle();
        Ok(())
    }

    fn delta(&self) -> usize {
        self.g.max_out_degree()
    }

    fn stats(&self) -> SearchStats {
        *self.searcher.stats()
    }

    fn orientation(&self) -> &DynOrientedGraph {
        &self.g
    }

    fn algorithm(&self) -> Algorithm {
        Algorithm::Naive
    }

    fn backend(&self) -> PathBackend {
        self.backend
    }

    fn audit(&self) -> Result<(), InvariantViolation> {
        check_graph(&self.g)?;
        check_no_improving_path(&self.g, true)
    }
}
