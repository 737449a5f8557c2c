//! Ground truth for small graphs.
//!
//! Nothing here shares code with the solvers: optimal Δ comes either from
//! densest-subgraph enumeration or from a search over all orientations, and
//! improving paths are found by plain BFS without degree pruning.

use std::collections::{HashMap, HashSet, VecDeque};

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::graph::{DynOrientedGraph, VertexId};

/// Largest vertex count accepted by [`pseudoarboricity_bruteforce`].
pub const MAX_SUBSET_VERTICES: usize = 24;
/// Largest edge count accepted by [`exhaustive_orientation_delta`].
pub const MAX_ORIENTATION_EDGES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n} vertices exceed the enumeration limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("{m} edges exceed the enumeration limit of {limit}")]
    TooManyEdges { m: usize, limit: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
}

/// Optimal Δ together with a vertex set that forces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoarboricityCertificate {
    pub optimal_delta: usize,
    /// Sorted vertex ids; empty for an edgeless graph.
    pub witness: Vec<VertexId>,
    /// `|E(witness)|`
    pub witness_edges: usize,
}

impl PseudoarboricityCertificate {
    /// Density `|E(S)| / |S|` as a (numerator, denominator) pair.
    pub fn witness_density(&self) -> (usize, usize) {
        (self.witness_edges, self.witness.len().max(1))
    }
}

fn check_simple(edges: &[(VertexId, VertexId)], n: usize) -> Result<(), OracleError> {
    let mut seen = HashSet::with_capacity(edges.len());
    for &(u, v) in edges {
        if u == v {
            return Err(OracleError::Malformed(format!("self-loop at {u}")));
        }
        if u >= n || v >= n {
            return Err(OracleError::Malformed(format!("edge {{{u}, {v}}} outside 0..{n}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(OracleError::Malformed(format!("parallel edge {{{u}, {v}}}")));
        }
    }
    Ok(())
}

/// Exact pseudoarboricity as `max ⌈|E(S)|/|S|⌉` over all non-empty vertex
/// subsets, enumerated per connected component in Gray-code order.
///
/// Among subsets attaining the maximum the witness is the one with the
/// smallest bitmask over global vertex ids.
pub fn pseudoarboricity_bruteforce(
    edges: &[(VertexId, VertexId)],
    n: usize,
) -> Result<PseudoarboricityCertificate, OracleError> {
    if n > MAX_SUBSET_VERTICES {
        return Err(OracleError::TooLarge {
            n,
            limit: MAX_SUBSET_VERTICES,
        });
    }
    check_simple(edges, n)?;

    let mut uf = UnionFind::<usize>::new(n);
    for &(u, v) in edges {
        uf.union(u, v);
    }
    let mut components: HashMap<usize, Vec<VertexId>> = HashMap::new();
    for v in 0..n {
        components.entry(uf.find(v)).or_default().push(v);
    }

    // (ceil, global mask, edges)
    let mut best: Option<(usize, u32, usize)> = None;
    for verts in components.values().filter(|c| c.len() > 1) {
        let local: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![0u32; verts.len()];
        for &(u, v) in edges {
            if let (Some(&a), Some(&b)) = (local.get(&u), local.get(&v)) {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
        // `verts` is ascending, so local mask order matches global mask order.
        let mut comp_best: Option<(usize, u32, usize)> = None;
        let (mut mask, mut e, mut s) = (0u32, 0usize, 0usize);
        for i in 1u64..(1u64 << verts.len()) {
            let bit = i.trailing_zeros() as usize;
            mask ^= 1 << bit;
            let touching = (adj[bit] & mask).count_ones() as usize;
            if mask & (1 << bit) != 0 {
                e += touching;
                s += 1;
            } else {
                e -= touching;
                s -= 1;
            }
            let c = e.div_ceil(s);
            let better = match comp_best {
                None => true,
                Some((bc, bm, _)) => c > bc || (c == bc && mask < bm),
            };
            if better {
                comp_best = Some((c, mask, e));
            }
        }
        let (c, lmask, e) = comp_best.expect("component has at least two vertices");
        let gmask = (0..verts.len())
            .filter(|&i| lmask & (1 << i) != 0)
            .fold(0u32, |acc, i| acc | 1 << verts[i]);
        let better = match best {
            None => true,
            Some((bc, bm, _)) => c > bc || (c == bc && gmask < bm),
        };
        if better {
            best = Some((c, gmask, e));
        }
    }

    Ok(match best {
        None => PseudoarboricityCertificate {
            optimal_delta: 0,
            witness: Vec::new(),
            witness_edges: 0,
        },
        Some((c, mask, e)) => PseudoarboricityCertificate {
            optimal_delta: c,
            witness: (0..n).filter(|&v| mask & (1 << v) != 0).collect(),
            witness_edges: e,
        },
    })
}

/// Minimum over all `2^m` orientations of the maximum out-degree, by
/// branch-and-bound over edge directions.
pub fn exhaustive_orientation_delta(edges: &[(VertexId, VertexId)], n: usize) -> Result<usize, OracleError> {
    if edges.len() > MAX_ORIENTATION_EDGES {
        return Err(OracleError::TooManyEdges {
            m: edges.len(),
            limit: MAX_ORIENTATION_EDGES,
        });
    }
    check_simple(edges, n)?;

    fn descend(edges: &[(VertexId, VertexId)], i: usize, deg: &mut [usize], cur: usize, best: &mut usize) {
        if cur >= *best {
            return;
        }
        let Some(&(u, v)) = edges.get(i) else {
            *best = cur;
            return;
        };
        for tail in [u, v] {
            deg[tail] += 1;
            descend(edges, i + 1, deg, cur.max(deg[tail]), best);
            deg[tail] -= 1;
        }
    }

    let mut deg = vec![0; n];
    let mut best = edges.len() + 1;
    descend(edges, 0, &mut deg, 0, &mut best);
    Ok(best.min(edges.len()))
}

fn bfs_path(
    g: &DynOrientedGraph,
    start: VertexId,
    reverse: bool,
    is_target: impl Fn(usize) -> bool,
) -> Option<Vec<VertexId>> {
    let n = g.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(x) = queue.pop_front() {
        let next: Vec<VertexId> = if reverse {
            g.in_edges(x).map(|e| e.from).collect()
        } else {
            g.out_neighbors(x).collect()
        };
        for w in next {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            parent[w] = x;
            if is_target(g.out_degree(w)) {
                let mut path = vec![w];
                let mut cur = w;
                while cur != start {
                    cur = parent[cur];
                    path.push(cur);
                }
                if !reverse {
                    path.reverse();
                }
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

/// Some improving path `<s, .., w>` with `odeg(s) > odeg(w) + 1`, if any.
pub fn find_improving_path_from(g: &DynOrientedGraph, s: VertexId) -> Option<Vec<VertexId>> {
    let d = g.out_degree(s);
    bfs_path(g, s, false, |x| x + 1 < d)
}

/// Some improving path `<w, .., t>` with `odeg(w) > odeg(t) + 1`, if any.
pub fn find_improving_path_to(g: &DynOrientedGraph, t: VertexId) -> Option<Vec<VertexId>> {
    let d = g.out_degree(t);
    bfs_path(g, t, true, |x| x > d + 1)
}

/// Looks for any improving path, starting either from every vertex or only
/// from the vertices of maximum out-degree.
pub fn scan_improving_paths(g: &DynOrientedGraph, from_peaks_only: bool) -> Option<Vec<VertexId>> {
    let delta = g.max_out_degree();
    (0..g.vertex_count())
        .filter(|&v| !from_peaks_only || (delta > 0 && g.out_degree(v) == delta))
        .find_map(|v| find_improving_path_from(g, v))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrientationReport {
    /// Undirected edges with no arc.
    pub missing: Vec<(VertexId, VertexId)>,
    /// Arcs whose edge is not in the input.
    pub unexpected: Vec<(VertexId, VertexId)>,
    /// Arcs covering an edge that an earlier arc already covered.
    pub duplicated: Vec<(VertexId, VertexId)>,
}

impl OrientationReport {
    pub fn is_valid(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty() && self.duplicated.is_empty()
    }
}

/// Checks that `arcs` orient every edge of `edges` exactly once.
pub fn validate_orientation(
    arcs: impl IntoIterator<Item = (VertexId, VertexId)>,
    edges: &[(VertexId, VertexId)],
) -> OrientationReport {
    let key = |u: usize, v: usize| (u.min(v), u.max(v));
    let expected: HashSet<_> = edges.iter().map(|&(u, v)| key(u, v)).collect();
    let mut covered = HashSet::new();
    let mut report = OrientationReport::default();
    for (u, v) in arcs {
        let k = key(u, v);
        if !expected.contains(&k) {
            report.unexpected.push((u, v));
        } else if !covered.insert(k) {
            report.duplicated.push((u, v));
        }
    }
    let mut missing: Vec<_> = expected.difference(&covered).copied().collect();
    missing.sort_unstable();
    report.missing = missing;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Vec<(usize, usize)> {
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
    }

    #[test]
    fn k4_certificate() {
        let c = pseudoarboricity_bruteforce(&complete(4), 4).unwrap();
        assert_eq!(c.optimal_delta, 2);
        // only the full vertex set has more edges than vertices
        assert_eq!(c.witness, vec![0, 1, 2, 3]);
        assert_eq!(c.witness_density(), (6, 4));
        assert_eq!(exhaustive_orientation_delta(&complete(4), 4), Ok(2));
    }

    #[test]
    fn k5_and_k3() {
        let c = pseudoarboricity_bruteforce(&complete(5), 5).unwrap();
        assert_eq!(c.optimal_delta, 2);
        assert_eq!(exhaustive_orientation_delta(&complete(5), 5), Ok(2));
        assert_eq!(exhaustive_orientation_delta(&complete(3), 3), Ok(1));
        assert_eq!(exhaustive_orientation_delta(&[(0, 1)], 2), Ok(1));
        assert_eq!(exhaustive_orientation_delta(&[], 3), Ok(0));
    }

    #[test]
    fn tree_and_empty() {
        let tree = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (5, 6)];
        let c = pseudoarboricity_bruteforce(&tree, 7).unwrap();
        assert_eq!(c.optimal_delta, 1);
        let (e, s) = c.witness_density();
        assert!(e < s);
        assert_eq!(c.witness, vec![0, 1]);
        let c = pseudoarboricity_bruteforce(&[], 3).unwrap();
        assert_eq!(c.optimal_delta, 0);
        assert!(c.witness.is_empty());
    }

    #[test]
    fn guards() {
        assert_eq!(
            pseudoarboricity_bruteforce(&[], 25),
            Err(OracleError::TooLarge { n: 25, limit: 24 })
        );
        assert!(matches!(
            exhaustive_orientation_delta(&complete(7), 7),
            Err(OracleError::TooManyEdges { m: 21, .. })
        ));
        assert!(matches!(
            pseudoarboricity_bruteforce(&[(0, 1), (1, 0)], 2),
            Err(OracleError::Malformed(_))
        ));
    }

    #[test]
    fn picks_densest_component() {
        // a path plus a disjoint K4 on 4..8
        let mut edges = vec![(0, 1), (1, 2), (2, 3)];
        edges.extend(complete(4).into_iter().map(|(u, v)| (u + 4, v + 4)));
        let c = pseudoarboricity_bruteforce(&edges, 8).unwrap();
        assert_eq!(c.optimal_delta, 2);
        assert_eq!(c.witness, vec![4, 5, 6, 7]);
    }

    #[test]
    fn improving_path_scans() {
        let mut g = DynOrientedGraph::new(0);
        g.insert_oriented(0, 1).unwrap();
        g.insert_oriented(0, 2).unwrap();
        assert_eq!(scan_improving_paths(&g, false), Some(vec![0, 1]));
        assert_eq!(scan_improving_paths(&g, true), Some(vec![0, 1]));
        let mut c = DynOrientedGraph::new(0);
        c.insert_oriented(0, 1).unwrap();
        c.insert_oriented(1, 2).unwrap();
        c.insert_oriented(2, 0).unwrap();
        assert_eq!(scan_improving_paths(&c, false), None);
    }

    #[test]
    fn orientation_reports() {
        let edges = [(0, 1), (1, 2)];
        assert!(validate_orientation([(1, 0), (1, 2)], &edges).is_valid());
        let r = validate_orientation([(0, 1), (1, 0), (1, 2)], &edges);
        assert_eq!(r.duplicated, vec![(1, 0)]);
        let r = validate_orientation([(0, 1)], &edges);
        assert_eq!(r.missing, vec![(1, 2)]);
        let r = validate_orientation([(0, 1), (1, 2), (0, 2)], &edges);
        assert_eq!(r.unexpected, vec![(0, 2)]);
    }
}
