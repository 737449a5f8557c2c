use crate::graph::{DynOrientedGraph, GraphError, VertexId};
use crate::pathfind::{PathBackend, PathSearcher, SearchStats};

use super::{check_graph, check_no_improving_path, orient_new_edge, Algorithm, InvariantViolation, Maintainer};

/// Keeps only the peak vertices free of improving paths, tracking Δ and the
/// number of peaks explicitly.
pub struct ImprovedDynOpt {
    g: DynOrientedGraph,
    searcher: PathSearcher,
    backend: PathBackend,
    delta: usize,
    peak_count: usize,
    tighten_searches: u64,
    sweep: Vec<VertexId>,
}

impl ImprovedDynOpt {
    pub fn new(backend: PathBackend, n_hint: usize) -> Self {
        ImprovedDynOpt {
            g: DynOrientedGraph::with_degree_buckets(n_hint),
            searcher: PathSearcher::remembering_dead_ends(),
            backend,
            delta: 0,
            peak_count: 0,
            tighten_searches: 0,
            sweep: Vec::new(),
        }
    }

    /// Number of vertices at Δ, as maintained by the update rules.
    pub fn peak_count(&self) -> usize {
        self.peak_count
    }

    // A vertex of out-degree below 2 cannot start an improving path, so no
    // search is issued for it.
    fn search_forward(&mut self, u: VertexId) -> bool {
        self.g.out_degree(u) >= 2 && self.searcher.forward(&mut self.g, u, self.backend)
    }

    /// Sweeps the peaks until a sweep improves nothing, lowering Δ whenever
    /// every peak of a sweep could be relieved.
    pub fn tighten_outdegree(&mut self) {
        if self.delta == 0 {
            self.peak_count = 0;
            return;
        }
        self.searcher.set_shared_visited(true);
        loop {
            let mut one = false;
            let mut all = true;
            self.peak_count = 0;
            self.sweep.clear();
            self.sweep
                .extend_from_slice(self.g.vertices_with_out_degree(self.delta).expect("bucketed graph"));
            self.sweep.sort_unstable();
            let sweep = std::mem::take(&mut self.sweep);
            for &v in &sweep {
                if self.g.out_degree(v) != self.delta {
                    continue;
                }
                let before = self.searcher.stats().searches_started;
                let improved = self.search_forward(v);
                self.tighten_searches += self.searcher.stats().searches_started - before;
                if improved {
                    one = true;
                } else {
                    all = false;
                    self.peak_count += 1;
                }
            }
            let empty = sweep.is_empty();
            self.sweep = sweep;
            if all && !empty {
                self.delta -= 1;
            }
            if !one {
                break;
            }
        }
        self.searcher.set_shared_visited(false);
    }
}

impl Maintainer for ImprovedDynOpt {
    fn insert(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let (tail, head) = orient_new_edge(&self.g, u, v);
        self.g.insert_oriented(tail, head)?;
        let d = self.g.out_degree(tail);
        if d == self.delta {
            if !self.search_forward(tail) {
                self.peak_count += 1;
            }
        } else if d == self.delta + 1 {
            if self.search_forward(tail) {
                // the path ended at a vertex one below the old maximum
                self.peak_count += 1;
            } else {
                self.delta += 1;
                self.peak_count = 1;
            }
        }
        Ok(())
    }

    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let e = self.g.orientation_of(u, v).ok_or(GraphError::EdgeNotFound(u, v))?;
        self.g.remove_oriented(e.from, e.to)?;
        let d = self.g.out_degree(e.from);
        // Either the tail was a peak itself, or it dropped two below Δ and a
        // reverse path hands it an edge from some peak.
        let relieved =
            d + 1 == self.delta || (d + 2 == self.delta && self.searcher.reverse(&mut self.g, e.from, self.backend));
        if relieved {
            self.peak_count -= 1;
        }
        if self.peak_count == 0 && self.delta > 0 {
            self.delta -= 1;
            self.tighten_outdegree();
        }
        Ok(())
    }

    fn delta(&self) -> usize {
        self.delta
    }

    fn stats(&self) -> SearchStats {
        *self.searcher.stats()
    }

    fn orientation(&self) -> &DynOrientedGraph {
        &self.g
    }

    fn algorithm(&self) -> Algorithm {
        Algorithm::Improved
    }

    fn backend(&self) -> PathBackend {
        self.backend
    }

    fn tighten_searches(&self) -> u64 {
        self.tighten_searches
    }

    fn audit(&self) -> Result<(), InvariantViolation> {
        check_graph(&self.g)?;
        if self.delta != self.g.max_out_degree() {
            return Err(InvariantViolation(format!(
                "tracked delta {} but recount gives {}",
                self.delta,
                self.g.max_out_degree()
            )));
        }
        if self.delta > 0 && self.peak_count != self.g.peak_count() {
            return Err(InvariantViolation(format!(
                "tracked peak count {} but recount gives {}",
                self.peak_count,
                self.g.peak_count()
            )));
        }
        check_no_improving_path(&self.g, true)
    }
}
