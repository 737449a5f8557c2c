//! Static exact solver: start from an arbitrary orientation and flip
//! paths from maximum-degree vertices to vertices at least two below the
//! maximum until none remain.

use thiserror::Error;

use crate::graph::{DynOrientedGraph, GraphError, VertexId};
use crate::pathfind::{Exploration, PathSearcher, SearchStats};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("malformed input: {0}")]
    MalformedInput(#[from] GraphError),
}

#[derive(Debug)]
pub struct StaticSolution {
    pub graph: DynOrientedGraph,
    /// Optimal maximum out-degree.
    pub k: usize,
    pub stats: SearchStats,
}

/// Orients every edge away from its smaller endpoint.
pub fn initial_orientation(edges: &[(VertexId, VertexId)]) -> Result<DynOrientedGraph, GraphError> {
    initial_orientation_in(DynOrientedGraph::new(0), edges)
}

fn initial_orientation_in(
    mut g: DynOrientedGraph,
    edges: &[(VertexId, VertexId)],
) -> Result<DynOrientedGraph, GraphError> {
    for &(u, v) in edges {
        g.insert_oriented(u.min(v), u.max(v))?;
    }
    Ok(g)
}

pub fn venkateswaran_solve(edges: &[(VertexId, VertexId)]) -> Result<StaticSolution, SolveError> {
    venkateswaran_solve_n(edges, 0)
}

/// As [`venkateswaran_solve`], with at least `n` vertices in the result.
pub fn venkateswaran_solve_n(edges: &[(VertexId, VertexId)], n: usize) -> Result<StaticSolution, SolveError> {
    let g = initial_orientation_in(DynOrientedGraph::with_degree_buckets(n), edges)?;
    let mut g = g;
    let mut searcher = PathSearcher::new();
    let mut k = g.max_out_degree();
    let mut sources = Vec::new();
    // S is every vertex of out-degree k, T every vertex of out-degree <= k - 2.
    // A flip drops its source to k - 1 and raises its target by one, so both
    // sets are read straight off the degree buckets.
    while k >= 2 {
        sources.clear();
        sources.extend_from_slice(g.vertices_with_out_degree(k).expect("bucketed graph"));
        let flipped = searcher
            .bfs_find_and_flip(&mut g, &sources, Exploration::Unrestricted)
            .expect("sources share out-degree k");
        if !flipped {
            break;
        }
        if g.count_with_out_degree(k) == 0 {
            k -= 1;
        }
    }
    debug_assert_eq!(k, g.max_out_degree());
    Ok(StaticSolution {
        stats: *searcher.stats(),
        graph: g,
        k,
    })
}

/// Vertices reachable from the maximum-degree vertices and the number of
/// edges they induce. For an optimal orientation with maximum `k` the set
/// has more than `k - 1` induced edges per vertex.
pub fn termination_witness(g: &DynOrientedGraph) -> (Vec<VertexId>, usize) {
    let k = g.max_out_degree();
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut stack: Vec<VertexId> = (0..n).filter(|&v| g.out_degree(v) == k).collect();
    for &v in &stack {
        seen[v] = true;
    }
    let mut reached = Vec::new();
    while let Some(x) = stack.pop() {
        reached.push(x);
        for w in g.out_neighbors(x) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    reached.sort_unstable();
    let induced = g.arcs().filter(|&(u, v)| seen[u] && seen[v]).count();
    (reached, induced)
}
