//! Oriented adjacency structure shared by every solver.
//!
//! Each undirected edge `{u, v}` is stored once, in the out-list of the
//! endpoint it is oriented away from. A mirror record in the in-list of the
//! head keeps reverse traversal at `O(degree)`. Both records carry the slot of
//! their partner so that removal and flips are `O(1)`.

use thiserror::Error;

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {{{0}, {1}}} already present")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge ({0}, {1}) not found")]
    EdgeNotFound(VertexId, VertexId),
    #[error("stale edge reference ({from}, {to}) at slot {slot}")]
    StaleEdgeRef { from: VertexId, to: VertexId, slot: usize },
}

/// Handle to a directed edge: `out_neighbors(from)[slot] == to`.
///
/// Valid until the next mutation of `from`'s out-list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeRef {
    pub from: VertexId,
    pub to: VertexId,
    pub slot: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct OutEntry {
    to: u32,
    in_slot: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct InEntry {
    from: u32,
    out_slot: u32,
}

/// Vertices bucketed by out-degree with `O(1)` moves.
#[derive(Debug, Clone, Default)]
struct DegreeBuckets {
    buckets: Vec<Vec<VertexId>>,
    pos: Vec<usize>,
}

impl DegreeBuckets {
    fn add_vertex(&mut self, v: VertexId) {
        debug_assert_eq!(v, self.pos.len());
        if self.buckets.is_empty() {
            self.buckets.push(Vec::new());
        }
        self.pos.push(self.buckets[0].len());
        self.buckets[0].push(v);
    }

    fn relocate(&mut self, v: VertexId, old: usize, new: usize) {
        let p = self.pos[v];
        let bucket = &mut self.buckets[old];
        bucket.swap_remove(p);
        if let Some(&moved) = bucket.get(p) {
            self.pos[moved] = p;
        }
        if self.buckets.len() <= new {
            self.buckets.resize_with(new + 1, Vec::new);
        }
        self.pos[v] = self.buckets[new].len();
        self.buckets[new].push(v);
    }

    fn get(&self, d: usize) -> &[VertexId] {
        self.buckets.get(d).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Mutable orientation of a simple undirected graph.
#[derive(Debug, Clone, Default)]
pub struct DynOrientedGraph {
    out_adj: Vec<Vec<OutEntry>>,
    in_adj: Vec<Vec<InEntry>>,
    // out_adj[v].len(), kept dense because searches read it for every neighbor
    odeg: Vec<u32>,
    // deg_count[d] = number of vertices with out-degree d
    deg_count: Vec<usize>,
    delta: usize,
    edges: usize,
    // arcs removed so far, flips included; insertions leave it alone
    removals: u64,
    buckets: Option<DegreeBuckets>,
}

impl DynOrientedGraph {
    pub fn new(n_hint: usize) -> Self {
        let mut g = DynOrientedGraph {
            deg_count: vec![0],
            ..Default::default()
        };
        g.ensure_vertex_count(n_hint);
        g
    }

    /// Like [`new`](Self::new), but also keeps vertices bucketed by
    /// out-degree so [`vertices_with_out_degree`](Self::vertices_with_out_degree)
    /// is available.
    pub fn with_degree_buckets(n_hint: usize) -> Self {
        let mut g = Self::new(0);
        g.buckets = Some(DegreeBuckets::default());
        g.ensure_vertex_count(n_hint);
        g
    }

    pub fn has_degree_buckets(&self) -> bool {
        self.buckets.is_some()
    }

    pub fn vertex_count(&self) -> usize {
        self.out_adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Number of arcs removed so far, counting each flip once. Stays put
    /// while the graph only gains edges.
    pub fn removal_count(&self) -> u64 {
        self.removals
    }

    /// Adjacency entries are stored as 32-bit ids.
    pub fn ensure_vertex_count(&mut self, n: usize) {
        assert!(n <= u32::MAX as usize, "vertex ids must fit in 32 bits");
        while self.out_adj.len() < n {
            let v = self.out_adj.len();
            self.out_adj.push(Vec::new());
            self.in_adj.push(Vec::new());
            self.odeg.push(0);
            self.deg_count[0] += 1;
            if let Some(b) = self.buckets.as_mut() {
                b.add_vertex(v);
            }
        }
    }

    #[inline]
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.odeg.get(v).map_or(0, |&d| d as usize)
    }

    #[inline]
    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj.get(v).map_or(0, Vec::len)
    }

    /// Maximum out-degree Δ (0 when edgeless).
    #[inline]
    pub fn max_out_degree(&self) -> usize {
        self.delta
    }

    /// Number of vertices attaining Δ.
    #[inline]
    pub fn peak_count(&self) -> usize {
        self.count_with_out_degree(self.delta)
    }

    #[inline]
    pub fn count_with_out_degree(&self, d: usize) -> usize {
        self.deg_count.get(d).copied().unwrap_or(0)
    }

    /// Vertices whose out-degree is exactly `d`, in bucket order.
    /// `None` unless the graph was built with degree buckets.
    pub fn vertices_with_out_degree(&self, d: usize) -> Option<&[VertexId]> {
        self.buckets.as_ref().map(|b| b.get(d))
    }

    /// Out-neighbors of `v`; index `i` of the iterator is the slot of that edge.
    pub fn out_neighbors(&self, v: VertexId) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        self.out_adj[v].iter().map(|e| e.to as VertexId)
    }

    #[inline]
    pub fn out_neighbor(&self, v: VertexId, slot: usize) -> VertexId {
        self.out_adj[v][slot].to as VertexId
    }

    /// In-neighbors of `v` as edge references into their out-lists.
    pub fn in_edges(&self, v: VertexId) -> impl ExactSizeIterator<Item = EdgeRef> + '_ {
        self.in_adj[v].iter().map(move |e| EdgeRef {
            from: e.from as VertexId,
            to: v,
            slot: e.out_slot as usize,
        })
    }

    #[inline]
    pub fn in_edge(&self, v: VertexId, idx: usize) -> EdgeRef {
        let e = self.in_adj[v][idx];
        EdgeRef {
            from: e.from as VertexId,
            to: v,
            slot: e.out_slot as usize,
        }
    }

    /// All directed edges, grouped by tail.
    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |e| (u, e.to as VertexId)))
    }

    fn find_slot(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.out_adj.get(u)?.iter().position(|e| e.to as VertexId == v)
    }

    /// Where `{u, v}` is stored, if present.
    pub fn orientation_of(&self, u: VertexId, v: VertexId) -> Option<EdgeRef> {
        if let Some(slot) = self.find_slot(u, v) {
            return Some(EdgeRef { from: u, to: v, slot });
        }
        self.find_slot(v, u).map(|slot| EdgeRef { from: v, to: u, slot })
    }

    /// Scans both out-lists, so the cost is `O(odeg(u) + odeg(v))`.
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        u != v && self.orientation_of(u, v).is_some()
    }

    fn set_degree(&mut self, v: VertexId, old: usize, new: usize) {
        self.odeg[v] = new as u32;
        self.deg_count[old] -= 1;
        if self.deg_count.len() <= new {
            self.deg_count.resize(new + 1, 0);
        }
        self.deg_count[new] += 1;
        if new > self.delta {
            self.delta = new;
        } else {
            while self.delta > 0 && self.deg_count[self.delta] == 0 {
                self.delta -= 1;
            }
        }
        if let Some(b) = self.buckets.as_mut() {
            b.relocate(v, old, new);
        }
    }

    fn push_arc(&mut self, u: VertexId, v: VertexId) -> EdgeRef {
        let slot = self.out_adj[u].len();
        let in_slot = self.in_adj[v].len();
        self.out_adj[u].push(OutEntry {
            to: v as u32,
            in_slot: in_slot as u32,
        });
        self.in_adj[v].push(InEntry {
            from: u as u32,
            out_slot: slot as u32,
        });
        self.set_degree(u, slot, slot + 1);
        EdgeRef { from: u, to: v, slot }
    }

    fn remove_arc(&mut self, e: EdgeRef) {
        let EdgeRef { from: u, to: v, slot } = e;
        self.removals += 1;
        let removed = self.out_adj[u].swap_remove(slot);
        if let Some(moved) = self.out_adj[u].get(slot).copied() {
            self.in_adj[moved.to as usize][moved.in_slot as usize].out_slot = slot as u32;
        }
        let in_slot = removed.in_slot as usize;
        self.in_adj[v].swap_remove(in_slot);
        if let Some(moved) = self.in_adj[v].get(in_slot).copied() {
            self.out_adj[moved.from as usize][moved.out_slot as usize].in_slot = in_slot as u32;
        }
        let d = self.out_adj[u].len();
        self.set_degree(u, d + 1, d);
    }

    /// Inserts `{u, v}` oriented `u -> v`, growing the vertex set if needed.
    pub fn insert_oriented(&mut self, u: VertexId, v: VertexId) -> Result<EdgeRef, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.ensure_vertex_count(u.max(v) + 1);
        if self.adjacent(u, v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.edges += 1;
        Ok(self.push_arc(u, v))
    }

    /// Removes the edge stored as `u -> v`. An edge stored as `v -> u` is
    /// reported as missing.
    pub fn remove_oriented(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let slot = self.find_slot(u, v).ok_or(GraphError::EdgeNotFound(u, v))?;
        self.remove_arc(EdgeRef { from: u, to: v, slot });
        self.edges -= 1;
        Ok(())
    }

    /// Reverses `e` in `O(1)` and returns the reference to the new arc.
    pub fn flip(&mut self, e: EdgeRef) -> Result<EdgeRef, GraphError> {
        let valid = self
            .out_adj
            .get(e.from)
            .and_then(|l| l.get(e.slot))
            .is_some_and(|x| x.to as VertexId == e.to);
        if !valid {
            return Err(GraphError::StaleEdgeRef {
                from: e.from,
                to: e.to,
                slot: e.slot,
            });
        }
        self.remove_arc(e);
        Ok(self.push_arc(e.to, e.from))
    }

    /// Recomputes every derived quantity from the adjacency arrays and
    /// compares against the maintained values.
    pub fn check_consistency(&self) -> Result<(), String> {
        let n = self.vertex_count();
        if self.in_adj.len() != n {
            return Err("in/out vertex counts differ".into());
        }
        let mut total = 0;
        let mut counts = vec![0usize; self.deg_count.len().max(1)];
        let mut seen = std::collections::HashSet::new();
        for u in 0..n {
            for (slot, e) in self.out_adj[u].iter().enumerate() {
                let to = e.to as usize;
                if to == u {
                    return Err(format!("self-loop at {u}"));
                }
                if !seen.insert((u.min(to), u.max(to))) {
                    return Err(format!("parallel edge {{{u}, {to}}}"));
                }
                match self.in_adj[to].get(e.in_slot as usize) {
                    Some(m) if m.from as usize == u && m.out_slot as usize == slot => {}
                    _ => return Err(format!("broken mirror for ({u}, {to})")),
                }
            }
            total += self.out_adj[u].len();
            let d = self.out_adj[u].len();
            if d >= counts.len() {
                return Err(format!("degree {d} of vertex {u} beyond histogram"));
            }
            counts[d] += 1;
        }
        let in_total: usize = self.in_adj.iter().map(Vec::len).sum();
        if in_total != total {
            return Err(format!("{in_total} in-records for {total} arcs"));
        }
        if total != self.edges {
            return Err(format!("edge counter {} but {total} arcs", self.edges));
        }
        if counts[..] != self.deg_count[..] {
            return Err("degree histogram out of date".into());
        }
        let delta = (0..n).map(|v| self.out_adj[v].len()).max().unwrap_or(0);
        if delta != self.delta {
            return Err(format!("delta {} but recount gives {delta}", self.delta));
        }
        if let Some(b) = &self.buckets {
            for v in 0..n {
                let d = self.out_adj[v].len();
                if b.get(d).get(b.pos[v]) != Some(&v) {
                    return Err(format!("vertex {v} not in bucket {d}"));
                }
            }
            let bucketed: usize = b.buckets.iter().map(Vec::len).sum();
            if bucketed != n {
                return Err("bucket sizes do not sum to n".into());
            }
        }
        Ok(())
    }
}
