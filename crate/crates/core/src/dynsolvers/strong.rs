use crate::graph::{DynOrientedGraph, GraphError, VertexId};
use crate::pathfind::{PathBackend, PathSearcher, SearchStats};

use super::{check_graph, check_no_improving_path, orient_new_edge, Algorithm, InvariantViolation, Maintainer};

/// Keeps the orientation free of improving paths between any two vertices
/// with one search per update.
pub struct StrongDynOpt {
    g: DynOrientedGraph,
    searcher: PathSearcher,
    backend: PathBackend,
}

impl StrongDynOpt {
    pub fn new(backend: PathBackend, n_hint: usize) -> Self {
        StrongDynOpt {
            g: DynOrientedGraph::new(n_hint),
            searcher: PathSearcher::remembering_dead_ends(),
            backend,
        }
    }
}

impl Maintainer for StrongDynOpt {
    fn insert(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let (tail, head) = orient_new_edge(&self.g, u, v);
        self.g.insert_oriented(tail, head)?;
        self.searcher.forward(&mut self.g, tail, self.backend);
        Ok(())
    }

    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let e = self.g.orientation_of(u, v).ok_or(GraphError::EdgeNotFound(u, v))?;
        self.g.remove_oriented(e.from, e.to)?;
        self.searcher.reverse(&mut self.g, e.from, self.backend);
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
        Algorithm::Strong
    }

    fn backend(&self) -> PathBackend {
        self.backend
    }

    fn audit(&self) -> Result<(), InvariantViolation> {
        check_graph(&self.g)?;
        check_no_improving_path(&self.g, false)
    }
}
