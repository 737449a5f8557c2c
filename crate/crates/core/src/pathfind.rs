//! Improving-path search and flip.
//!
//! A forward search from `u` with out-degree `d` looks for a vertex of
//! out-degree below `d - 1` and only walks through vertices of out-degree
//! exactly `d - 1`. The reverse search from `u` looks for a vertex of
//! out-degree above `d + 1` along in-edges, walking through vertices of
//! out-degree exactly `d + 1`. Every node first checks all its neighbors for
//! a target before descending.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{DynOrientedGraph, EdgeRef, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("source set is empty")]
    EmptySources,
    #[error("sources disagree on out-degree ({0} vs {1})")]
    MixedSourceDegrees(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathBackend {
    DepthFirst,
    BreadthFirst,
}

impl PathBackend {
    pub const ALL: [PathBackend; 2] = [PathBackend::DepthFirst, PathBackend::BreadthFirst];

    pub fn id(self) -> &'static str {
        match self {
            PathBackend::DepthFirst => "dfs",
            PathBackend::BreadthFirst => "bfs",
        }
    }
}

/// Which vertices a breadth-first search may pass through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exploration {
    /// Only vertices of out-degree `d - 1`.
    DegreeRestricted,
    /// Any vertex.
    Unrestricted,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub searches_started: u64,
    pub searches_succeeded: u64,
    pub vertices_scanned: u64,
    pub edges_flipped: u64,
}

impl SearchStats {
    pub fn since(&self, earlier: &SearchStats) -> SearchStats {
        SearchStats {
            searches_started: self.searches_started - earlier.searches_started,
            searches_succeeded: self.searches_succeeded - earlier.searches_succeeded,
            vertices_scanned: self.vertices_scanned - earlier.vertices_scanned,
            edges_flipped: self.edges_flipped - earlier.edges_flipped,
        }
    }
}

/// Epoch-stamped visited flags: bumping the epoch clears every mark.
#[derive(Debug, Clone)]
pub struct VisitMarker {
    stamp: Vec<u32>,
    epoch: u32,
}

impl Default for VisitMarker {
    fn default() -> Self {
        VisitMarker {
            stamp: Vec::new(),
            epoch: 1,
        }
    }
}

impl VisitMarker {
    pub fn ensure(&mut self, n: usize) {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
        }
    }

    pub fn bump(&mut self) {
        if self.epoch == u32::MAX {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        } else {
            self.epoch += 1;
        }
    }

    pub fn epoch(&self) -> u32 {
        self.epoch
    }

    #[inline]
    pub fn is_marked(&self, v: VertexId) -> bool {
        self.stamp.get(v) == Some(&self.epoch)
    }

    #[inline]
    pub fn mark(&mut self, v: VertexId) {
        self.stamp[v] = self.epoch;
    }
}

/// Vertices that a failed forward search proved unable to reach a target,
/// each remembered together with its out-degree at the time.
///
/// While the graph only gains edges no such vertex can acquire a route: its
/// own out-arcs are unchanged as long as its out-degree is, and out-degrees
/// only grow, so no new targets appear behind it. Any removal or flip drops
/// the whole set.
#[derive(Debug, Default)]
struct DeadEnds {
    enabled: bool,
    stamp: Vec<u32>,
    level: Vec<u32>,
    epoch: u32,
    removals: u64,
    entered: Vec<VertexId>,
}

impl DeadEnds {
    fn sync(&mut self, g: &DynOrientedGraph) {
        let n = g.vertex_count();
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
            self.level.resize(n, 0);
        }
        if self.epoch == 0 || g.removal_count() != self.removals {
            self.removals = g.removal_count();
            if self.epoch == u32::MAX {
                self.stamp.iter_mut().for_each(|s| *s = 0);
                self.epoch = 0;
            }
            self.epoch += 1;
        }
        self.entered.clear();
    }

    #[inline]
    fn is_dead(&self, v: VertexId, via: usize) -> bool {
        self.stamp[v] == self.epoch && self.level[v] as usize == via
    }

    fn bury(&mut self, via: usize) {
        for &v in &self.entered {
            self.stamp[v] = self.epoch;
            self.level[v] = via as u32;
        }
    }
}

struct Frame {
    v: VertexId,
    next: usize,
}

/// Reusable search workspace: visit marks, scratch buffers and counters.
#[derive(Default)]
pub struct PathSearcher {
    marker: VisitMarker,
    shared_visited: bool,
    stats: SearchStats,
    stack: Vec<Frame>,
    path: Vec<EdgeRef>,
    queue: VecDeque<VertexId>,
    parent: Vec<Option<EdgeRef>>,
    dead: DeadEnds,
    // set for the duration of a forward search that may use `dead`
    pruning: bool,
}

impl PathSearcher {
    pub fn new() -> Self {
        Self::default()
    }

    /// A searcher for one dynamic graph; see
    /// [`set_remember_dead_ends`](Self::set_remember_dead_ends).
    pub fn remembering_dead_ends() -> Self {
        let mut s = Self::default();
        s.set_remember_dead_ends(true);
        s
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    pub fn marker(&self) -> &VisitMarker {
        &self.marker
    }

    /// In shared mode consecutive searches keep each other's marks; the
    /// epoch only advances after a successful flip.
    pub fn set_shared_visited(&mut self, shared: bool) {
        self.shared_visited = shared;
        self.marker.bump();
    }

    pub fn shared_visited(&self) -> bool {
        self.shared_visited
    }

    /// Lets [`forward`](Self::forward) skip vertices that an earlier failed
    /// search from the same level already exhausted. Only sound when the
    /// searcher is always used with the same graph. The flipped paths are
    /// exactly those found without it.
    pub fn set_remember_dead_ends(&mut self, on: bool) {
        self.dead = DeadEnds {
            enabled: on,
            ..DeadEnds::default()
        };
    }

    fn begin(&mut self, g: &DynOrientedGraph) {
        self.stats.searches_started += 1;
        self.marker.ensure(g.vertex_count());
        if !self.shared_visited {
            self.marker.bump();
        }
    }

    fn commit_path(&mut self, g: &mut DynOrientedGraph) {
        // Each vertex owns at most one path arc, so recorded slots stay valid:
        // a flip only swap-removes inside its own tail's list and appends elsewhere.
        for e in self.path.drain(..) {
            g.flip(e).expect("path arc slot is current");
            self.stats.edges_flipped += 1;
        }
        self.stats.searches_succeeded += 1;
        if self.shared_visited {
            self.marker.bump();
        }
    }

    pub fn forward(&mut self, g: &mut DynOrientedGraph, u: VertexId, backend: PathBackend) -> bool {
        self.pruning = self.dead.enabled && !self.shared_visited;
        if self.pruning {
            self.dead.sync(g);
        }
        let found = match backend {
            PathBackend::DepthFirst => self.find_and_flip_path(g, u),
            PathBackend::BreadthFirst => self
                .bfs_find_and_flip(g, &[u], Exploration::DegreeRestricted)
                .expect("single source"),
        };
        if self.pruning && !found {
            self.dead.bury(g.out_degree(u).saturating_sub(1));
        }
        self.pruning = false;
        found
    }

    pub fn reverse(&mut self, g: &mut DynOrientedGraph, u: VertexId, backend: PathBackend) -> bool {
        match backend {
            PathBackend::DepthFirst => self.find_and_flip_path_rev(g, u),
            PathBackend::BreadthFirst => self.bfs_find_and_flip_rev(g, u),
        }
    }

    /// Depth-first forward search from `u`; flips the first improving path
    /// found and reports whether one was flipped.
    pub fn find_and_flip_path(&mut self, g: &mut DynOrientedGraph, u: VertexId) -> bool {
        self.begin(g);
        let d = g.out_degree(u);
        if d < 2 || self.marker.is_marked(u) {
            return false;
        }
        let via = d - 1;
        self.stack.clear();
        self.path.clear();
        let mut entering = Some(u);
        loop {
            if let Some(v) = entering.take() {
                self.stats.vertices_scanned += 1;
                let hit = g.out_neighbors(v).position(|w| g.out_degree(w) < via);
                if let Some(slot) = hit {
                    let to = g.out_neighbor(v, slot);
                    self.path.push(EdgeRef { from: v, to, slot });
                    self.commit_path(g);
                    return true;
                }
                self.marker.mark(v);
                self.stack.push(Frame { v, next: 0 });
            }
            let Some(top) = self.stack.last_mut() else {
                return false;
            };
            let v = top.v;
            let odeg = g.out_degree(v);
            let mut slot = top.next;
            while slot < odeg {
                let w = g.out_neighbor(v, slot);
                if g.out_degree(w) == via && !self.marker.is_marked(w) && !(self.pruning && self.dead.is_dead(w, via)) {
                    break;
                }
                slot += 1;
            }
            if slot < odeg {
                top.next = slot + 1;
                let to = g.out_neighbor(v, slot);
                self.path.push(EdgeRef { from: v, to, slot });
                if self.pruning {
                    self.dead.entered.push(to);
                }
                entering = Some(to);
            } else {
                self.stack.pop();
                self.path.pop();
            }
        }
    }

    /// Depth-first search over in-edges for a path ending in `u`.
    pub fn find_and_flip_path_rev(&mut self, g: &mut DynOrientedGraph, u: VertexId) -> bool {
        self.begin(g);
        let d = g.out_degree(u);
        if g.max_out_degree() <= d + 1 || self.marker.is_marked(u) {
            return false;
        }
        let via = d + 1;
        self.stack.clear();
        self.path.clear();
        let mut entering = Some(u);
        loop {
            if let Some(v) = entering.take() {
                self.stats.vertices_scanned += 1;
                let hit = g.in_edges(v).find(|e| g.out_degree(e.from) > via);
                if let Some(e) = hit {
                    self.path.push(e);
                    self.commit_path(g);
                    return true;
                }
                self.marker.mark(v);
                self.stack.push(Frame { v, next: 0 });
            }
            let Some(top) = self.stack.last_mut() else {
                return false;
            };
            let v = top.v;
            let ideg = g.in_degree(v);
            let mut idx = top.next;
            while idx < ideg {
                let w = g.in_edge(v, idx).from;
                if g.out_degree(w) == via && !self.marker.is_marked(w) {
                    break;
                }
                idx += 1;
            }
            if idx < ideg {
                top.next = idx + 1;
                let e = g.in_edge(v, idx);
                self.path.push(e);
                entering = Some(e.from);
            } else {
                self.stack.pop();
                self.path.pop();
            }
        }
    }

    /// Breadth-first forward search started from all `sources` at once.
    ///
    /// All sources must share one out-degree `d`; the search stops at the
    /// first vertex of out-degree below `d - 1` and flips the path leading to
    /// it, so exactly one source loses one out-edge.
    pub fn bfs_find_and_flip(
        &mut self,
        g: &mut DynOrientedGraph,
        sources: &[VertexId],
        exploration: Exploration,
    ) -> Result<bool, PathError> {
        let &first = sources.first().ok_or(PathError::EmptySources)?;
        let d = g.out_degree(first);
        if let Some(&s) = sources.iter().find(|&&s| g.out_degree(s) != d) {
            return Err(PathError::MixedSourceDegrees(d, g.out_degree(s)));
        }
        self.begin(g);
        if d < 2 {
            return Ok(false);
        }
        let via = d - 1;
        if self.parent.len() < g.vertex_count() {
            self.parent.resize(g.vertex_count(), None);
        }
        self.queue.clear();
        for &s in sources {
            if !self.marker.is_marked(s) {
                self.marker.mark(s);
                self.parent[s] = None;
                self.queue.push_back(s);
            }
        }
        while let Some(x) = self.queue.pop_front() {
            self.stats.vertices_scanned += 1;
            let hit = g.out_neighbors(x).position(|w| g.out_degree(w) < via);
            if let Some(slot) = hit {
                let to = g.out_neighbor(x, slot);
                self.path.clear();
                self.path.push(EdgeRef { from: x, to, slot });
                let mut cur = x;
                while let Some(e) = self.parent[cur] {
                    self.path.push(e);
                    cur = e.from;
                }
                self.commit_path(g);
                return Ok(true);
            }
            for (slot, w) in g.out_neighbors(x).enumerate() {
                let admissible = match exploration {
                    Exploration::DegreeRestricted => {
                        g.out_degree(w) == via && !(self.pruning && self.dead.is_dead(w, via))
                    }
                    Exploration::Unrestricted => true,
                };
                if admissible && !self.marker.is_marked(w) {
                    if self.pruning {
                        self.dead.entered.push(w);
                    }
                    self.marker.mark(w);
                    self.parent[w] = Some(EdgeRef { from: x, to: w, slot });
                    self.queue.push_back(w);
                }
            }
        }
        Ok(false)
    }

    /// Breadth-first search over in-edges for a path ending in `u`.
    pub fn bfs_find_and_flip_rev(&mut self, g: &mut DynOrientedGraph, u: VertexId) -> bool {
        self.begin(g);
        let d = g.out_degree(u);
        if g.max_out_degree() <= d + 1 || self.marker.is_marked(u) {
            return false;
        }
        let via = d + 1;
        if self.parent.len() < g.vertex_count() {
            self.parent.resize(g.vertex_count(), None);
        }
        self.queue.clear();
        self.marker.mark(u);
        self.parent[u] = None;
        self.queue.push_back(u);
        while let Some(x) = self.queue.pop_front() {
            self.stats.vertices_scanned += 1;
            let hit = g.in_edges(x).find(|e| g.out_degree(e.from) > via);
            if let Some(e) = hit {
                self.path.clear();
                self.path.push(e);
                let mut cur = x;
                while let Some(p) = self.parent[cur] {
                    self.path.push(p);
                    cur = p.to;
                }
                self.commit_path(g);
                return true;
            }
            for idx in 0..g.in_degree(x) {
                let e = g.in_edge(x, idx);
                if g.out_degree(e.from) == via && !self.marker.is_marked(e.from) {
                    self.marker.mark(e.from);
                    self.parent[e.from] = Some(e);
                    self.queue.push_back(e.from);
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    fn graph(arcs: &[(usize, usize)]) -> DynOrientedGraph {
        let mut g = DynOrientedGraph::new(0);
        for &(u, v) in arcs {
            g.insert_oriented(u, v).unwrap();
        }
        g
    }

    fn degrees(g: &DynOrientedGraph) -> Vec<usize> {
        (0..g.vertex_count()).map(|v| g.out_degree(v)).collect()
    }

    fn arcs(g: &DynOrientedGraph) -> Vec<(usize, usize)> {
        let mut a: Vec<_> = g.arcs().collect();
        a.sort();
        a
    }

    #[test]
    fn one_hop_forward() {
        for backend in PathBackend::ALL {
            let mut g = graph(&[(0, 1), (0, 2)]);
            g.ensure_vertex_count(4);
            let mut s = PathSearcher::new();
            assert!(s.forward(&mut g, 0, backend));
            assert_eq!(g.out_degree(0), 1);
            assert_eq!(g.out_degree(1) + g.out_degree(2), 1);
            assert_eq!(s.stats().edges_flipped, 1);
        }
    }

    #[test]
    fn cycle_has_no_improving_path() {
        for backend in PathBackend::ALL {
            let mut g = graph(&[(0, 1), (1, 2), (2, 0)]);
            let mut s = PathSearcher::new();
            for v in 0..3 {
                assert!(!s.forward(&mut g, v, backend));
                assert!(!s.reverse(&mut g, v, backend));
            }
            assert_eq!(arcs(&g), vec![(0, 1), (1, 2), (2, 0)]);
        }
    }

    #[test]
    fn early_check_prefers_direct_sink() {
        // odeg = (2, 1, 0, 0); a brute-force scan also sees <0, 3> and <0, 1, 2>.
        let mut g = graph(&[(0, 1), (1, 2), (0, 3)]);
        let found = oracle::find_improving_path_from(&g, 0).unwrap();
        assert!(found.len() >= 2);
        let mut s = PathSearcher::new();
        assert!(s.find_and_flip_path(&mut g, 0));
        assert_eq!(arcs(&g), vec![(0, 1), (1, 2), (3, 0)]);
        assert_eq!(degrees(&g), vec![1, 1, 0, 1]);
    }

    #[test]
    fn reverse_one_hop() {
        for backend in PathBackend::ALL {
            let mut g = graph(&[(0, 1), (0, 2)]);
            let mut s = PathSearcher::new();
            assert!(s.reverse(&mut g, 1, backend));
            assert_eq!(g.orientation_of(0, 1).unwrap().from, 1);
            assert_eq!(degrees(&g), vec![1, 1, 0]);
        }
    }

    #[test]
    fn reverse_on_edgeless_graph() {
        for backend in PathBackend::ALL {
            let mut g = DynOrientedGraph::new(3);
            let mut s = PathSearcher::new();
            assert!(!s.reverse(&mut g, 0, backend));
        }
    }

    #[test]
    fn reverse_two_hops() {
        for backend in PathBackend::ALL {
            let mut g = graph(&[(2, 1), (1, 0), (2, 3)]);
            assert_eq!(oracle::find_improving_path_to(&g, 0), Some(vec![2, 1, 0]));
            let mut s = PathSearcher::new();
            assert!(s.reverse(&mut g, 0, backend));
            assert_eq!(degrees(&g), vec![1, 1, 1, 0]);
            assert_eq!(arcs(&g), vec![(0, 1), (1, 2), (2, 3)]);
            assert_eq!(s.stats().edges_flipped, 2);
        }
    }

    #[test]
    fn multi_source_bfs_picks_the_reachable_source() {
        // Peaks 0 and 4 (odeg 3). Only 4 reaches the sink 7, through 5 (odeg 2).
        let mut g = graph(&[
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (2, 3),
            (3, 1),
            (1, 4),
            (2, 4),
            (3, 4),
            (4, 5),
            (4, 6),
            (4, 0),
            (5, 7),
            (5, 6),
            (6, 7),
            (6, 1),
        ]);
        let before = degrees(&g);
        assert_eq!((before[0], before[4]), (3, 3));
        assert_eq!(before[7], 0);
        let mut s = PathSearcher::new();
        assert!(s
            .bfs_find_and_flip(&mut g, &[0, 4], Exploration::DegreeRestricted)
            .unwrap());
        let after = degrees(&g);
        assert_eq!(after[0], 3);
        assert_eq!(after[4], 2);
        assert_eq!(after[7], 1);
        let changed = (0..8).filter(|&v| before[v] != after[v]).count();
        assert_eq!(changed, 2);
        g.check_consistency().unwrap();
    }

    #[test]
    fn bfs_rejects_bad_sources() {
        let mut g = graph(&[(0, 1), (0, 2)]);
        let mut s = PathSearcher::new();
        assert_eq!(
            s.bfs_find_and_flip(&mut g, &[], Exploration::DegreeRestricted),
            Err(PathError::EmptySources)
        );
        assert_eq!(
            s.bfs_find_and_flip(&mut g, &[0, 1], Exploration::DegreeRestricted),
            Err(PathError::MixedSourceDegrees(2, 0))
        );
    }

    #[test]
    fn bfs_without_sink_is_pure() {
        let mut g = graph(&[(0, 1), (1, 2), (2, 0), (0, 3), (3, 1)]);
        let before = arcs(&g);
        let mut s = PathSearcher::new();
        assert!(!s
            .bfs_find_and_flip(&mut g, &[0], Exploration::DegreeRestricted)
            .unwrap());
        assert_eq!(arcs(&g), before);
    }

    #[test]
    fn shared_marks_persist_until_success() {
        let mut g = graph(&[(0, 1), (1, 2), (2, 0)]);
        let mut s = PathSearcher::new();
        s.set_shared_visited(true);
        let epoch = s.marker().epoch();
        assert!(!s.find_and_flip_path(&mut g, 0));
        assert!(!s.find_and_flip_path(&mut g, 1));
        assert_eq!(s.marker().epoch(), epoch);
        s.set_shared_visited(false);
        let e = s.marker().epoch();
        s.find_and_flip_path(&mut g, 0);
        assert_ne!(s.marker().epoch(), e);
    }

    fn random_orientation() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (3usize..10).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let k = pairs.len();
            (Just(n), Just(pairs), prop::collection::vec(0u8..3, k)).prop_map(|(n, pairs, pick)| {
                let arcs = pairs
                    .into_iter()
                    .zip(pick)
                    .filter_map(|((u, v), p)| match p {
                        0 => None,
                        1 => Some((u, v)),
                        _ => Some((v, u)),
                    })
                    .collect();
                (n, arcs)
            })
        })
    }

    fn build(n: usize, arcs: &[(usize, usize)]) -> DynOrientedGraph {
        let mut g = graph(arcs);
        g.ensure_vertex_count(n);
        g
    }

    proptest! {
        #[test]
        fn forward_search_contract((n, a) in random_orientation(), start in 0usize..10, backend in prop_oneof![Just(PathBackend::DepthFirst), Just(PathBackend::BreadthFirst)]) {
            let u = start % n;
            let mut g = build(n, &a);
            let before = degrees(&g);
            let arcs_before = arcs(&g);
            let mut s = PathSearcher::new();
            let ok = s.forward(&mut g, u, backend);
            let after = degrees(&g);
            if ok {
                prop_assert_eq!(after[u] + 1, before[u]);
                let risen: Vec<_> = (0..n).filter(|&v| after[v] == before[v] + 1).collect();
                prop_assert_eq!(risen.len(), 1);
                prop_assert!(before[risen[0]] + 1 < before[u]);
                prop_assert_eq!((0..n).filter(|&v| after[v] != before[v]).count(), 2);
                prop_assert_eq!(s.stats().searches_succeeded, 1);
            } else {
                prop_assert_eq!(arcs(&g), arcs_before);
            }
            g.check_consistency().unwrap();
        }

        #[test]
        fn reverse_search_contract((n, a) in random_orientation(), start in 0usize..10, backend in prop_oneof![Just(PathBackend::DepthFirst), Just(PathBackend::BreadthFirst)]) {
            let u = start % n;
            let mut g = build(n, &a);
            let before = degrees(&g);
            let arcs_before = arcs(&g);
            let mut s = PathSearcher::new();
            let ok = s.reverse(&mut g, u, backend);
            let after = degrees(&g);
            if ok {
                prop_assert_eq!(after[u], before[u] + 1);
                let dropped: Vec<_> = (0..n).filter(|&v| after[v] + 1 == before[v]).collect();
                prop_assert_eq!(dropped.len(), 1);
                prop_assert!(before[dropped[0]] > before[u] + 1);
                prop_assert_eq!((0..n).filter(|&v| after[v] != before[v]).count(), 2);
            } else {
                prop_assert_eq!(arcs(&g), arcs_before);
            }
            g.check_consistency().unwrap();
        }

        #[test]
        fn backends_agree_on_success((n, a) in random_orientation(), start in 0usize..10) {
            let u = start % n;
            let base = build(n, &a);
            let mut s = PathSearcher::new();
            let (mut g1, mut g2) = (base.clone(), base.clone());
            prop_assert_eq!(
                s.find_and_flip_path(&mut g1, u),
                s.bfs_find_and_flip(&mut g2, &[u], Exploration::DegreeRestricted).unwrap()
            );
            let (mut g1, mut g2) = (base.clone(), base);
            prop_assert_eq!(
                s.find_and_flip_path_rev(&mut g1, u),
                s.bfs_find_and_flip_rev(&mut g2, u)
            );
        }
    }

    proptest! {
        #[test]
        fn remembered_dead_ends_flip_the_same_paths(
            n in 4usize..12,
            ops in prop::collection::vec((0usize..12, 0usize..12, 0usize..12, 0u8..8), 1..120),
            backend in prop_oneof![Just(PathBackend::DepthFirst), Just(PathBackend::BreadthFirst)],
        ) {
            let mut plain = (DynOrientedGraph::new(n), PathSearcher::new());
            let mut cached = (DynOrientedGraph::new(n), PathSearcher::remembering_dead_ends());
            for (a, b, probe, kind) in ops {
                let (u, v, probe) = (a % n, b % n, probe % n);
                if u == v {
                    continue;
                }
                let mut results = Vec::new();
                for (g, s) in [&mut plain, &mut cached] {
                    if let Some(e) = g.orientation_of(u, v) {
                        if kind == 0 {
                            g.remove_oriented(e.from, e.to).unwrap();
                            results.push(s.reverse(g, e.from, backend));
                        }
                    } else {
                        let (t, h) = if g.out_degree(u) <= g.out_degree(v) { (u, v) } else { (v, u) };
                        g.insert_oriented(t, h).unwrap();
                        results.push(s.forward(g, t, backend));
                    }
                    results.push(s.forward(g, probe, backend));
                }
                let half = results.len() / 2;
                prop_assert_eq!(&results[..half], &results[half..]);
                prop_assert_eq!(plain.0.arcs().collect::<Vec<_>>(), cached.0.arcs().collect::<Vec<_>>());
            }
            prop_assert!(cached.1.stats().vertices_scanned <= plain.1.stats().vertices_scanned);
        }
    }

    #[test]
    fn removals_are_counted() {
        let mut g = graph(&[(0, 1), (1, 2)]);
        assert_eq!(g.removal_count(), 0);
        let e = g.orientation_of(0, 1).unwrap();
        g.flip(e).unwrap();
        g.remove_oriented(1, 2).unwrap();
        assert_eq!(g.removal_count(), 2);
    }
}
