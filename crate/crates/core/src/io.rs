//! Instance formats and the static-to-dynamic conversion.
//!
//! Edit sequences are plain text, one update per line:
//!
//! ```text
//! # dyn 4        optional header declaring the vertex count
//! % comment
//! + 0 1          insert {0, 1}
//! - 0 1          delete {0, 1}
//! ```
//!
//! External ids may be sparse; they are densified in first-seen order and the
//! mapping is kept in [`EditSequence::external_ids`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    InvalidOp { line: usize, msg: String },
    #[error("vertex {0} lists {1} as a neighbor but not vice versa")]
    AsymmetricAdjacency(usize, usize),
    #[error("header declares {declared} edges but the adjacency lists contain {found}")]
    CountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EditKind {
    Insert,
    Delete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EditOp {
    pub kind: EditKind,
    pub u: VertexId,
    pub v: VertexId,
}

impl EditOp {
    pub fn insert(u: VertexId, v: VertexId) -> Self {
        EditOp {
            kind: EditKind::Insert,
            u,
            v,
        }
    }

    pub fn delete(u: VertexId, v: VertexId) -> Self {
        EditOp {
            kind: EditKind::Delete,
            u,
            v,
        }
    }
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.kind {
            EditKind::Insert => '+',
            EditKind::Delete => '-',
        };
        write!(f, "{sign} {} {}", self.u, self.v)
    }
}

/// A validated update sequence over dense vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EditSequence {
    pub ops: Vec<EditOp>,
    pub declared_n: Option<usize>,
    /// `external_ids[v]` is the id vertex `v` had in the source file.
    pub external_ids: Vec<u64>,
}

fn edge_key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    (u.min(v), u.max(v))
}

fn check_op(present: &mut HashSet<(VertexId, VertexId)>, op: &EditOp) -> Result<(), String> {
    if op.u == op.v {
        return Err(format!("self-loop at {}", op.u));
    }
    let key = edge_key(op.u, op.v);
    match op.kind {
        EditKind::Insert if !present.insert(key) => Err(format!("edge {{{}, {}}} already present", op.u, op.v)),
        EditKind::Delete if !present.remove(&key) => Err(format!("edge {{{}, {}}} not present", op.u, op.v)),
        _ => Ok(()),
    }
}

impl EditSequence {
    /// Builds a sequence over ids `0..n`, rejecting updates that would insert
    /// a present edge or delete an absent one.
    pub fn from_ops(ops: Vec<EditOp>, n: Option<usize>) -> Result<Self, FormatError> {
        let mut present = HashSet::new();
        let mut max_id = 0;
        for (i, op) in ops.iter().enumerate() {
            check_op(&mut present, op).map_err(|msg| FormatError::InvalidOp { line: i + 1, msg })?;
            max_id = max_id.max(op.u + 1).max(op.v + 1);
        }
        let count = n.unwrap_or(0).max(max_id);
        Ok(EditSequence {
            ops,
            declared_n: n,
            external_ids: (0..count as u64).collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.declared_n.unwrap_or(0).max(self.external_ids.len())
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Edges present after replaying the first `prefix` updates.
    pub fn edges_after(&self, prefix: usize) -> Vec<(VertexId, VertexId)> {
        let mut present = HashSet::new();
        let mut order = Vec::new();
        for op in &self.ops[..prefix] {
            let key = edge_key(op.u, op.v);
            match op.kind {
                EditKind::Insert => {
                    present.insert(key);
                    order.push(key);
                }
                EditKind::Delete => {
                    present.remove(&key);
                }
            }
        }
        let mut edges: Vec<_> = order.into_iter().filter(|k| present.remove(k)).collect();
        edges.sort_unstable();
        edges
    }

    pub fn final_edges(&self) -> Vec<(VertexId, VertexId)> {
        self.edges_after(self.ops.len())
    }

    /// Writes the sequence with dense ids and a `# dyn` header.
    pub fn write_to(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "# dyn {}", self.vertex_count())?;
        for op in &self.ops {
            writeln!(w, "{op}")?;
        }
        Ok(())
    }
}

pub fn parse_edit_sequence(reader: impl BufRead) -> Result<EditSequence, FormatError> {
    let mut ops = Vec::new();
    let mut declared_n = None;
    let mut dense: HashMap<u64, VertexId> = HashMap::new();
    let mut external_ids = Vec::new();
    let mut present = HashSet::new();

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let mut tok = line.split_whitespace();
        let Some(first) = tok.next() else { continue };
        if first.starts_with('%') {
            continue;
        }
        if first == "#" {
            if tok.next() != Some("dyn") || !ops.is_empty() || declared_n.is_some() {
                return Err(parse_err(lineno, "expected a single leading `# dyn <n>` header"));
            }
            let n = tok
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| parse_err(lineno, "header needs a vertex count"))?;
            declared_n = Some(n);
            continue;
        }
        let kind = match first {
            "+" => EditKind::Insert,
            "-" => EditKind::Delete,
            other => return Err(parse_err(lineno, format!("unknown update `{other}`"))),
        };
        let mut id = || -> Result<VertexId, FormatError> {
            let raw: u64 = tok
                .next()
                .ok_or_else(|| parse_err(lineno, "missing vertex id"))?
                .parse()
                .map_err(|e| parse_err(lineno, format!("bad vertex id: {e}")))?;
            Ok(*dense.entry(raw).or_insert_with(|| {
                external_ids.push(raw);
                external_ids.len() - 1
            }))
        };
        let u = id()?;
        let v = id()?;
        if tok.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens"));
        }
        let op = EditOp { kind, u, v };
        check_op(&mut present, &op).map_err(|msg| FormatError::InvalidOp { line: lineno, msg })?;
        ops.push(op);
    }

    if let Some(n) = declared_n {
        if external_ids.len() > n {
            return Err(parse_err(
                1,
                format!(
                    "header declares {n} vertices but {} distinct ids occur",
                    external_ids.len()
                ),
            ));
        }
    }
    Ok(EditSequence {
        ops,
        declared_n,
        external_ids,
    })
}

/// Undirected graph read from a METIS file, with 0-based ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticGraph {
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId)>,
}

/// Reads an unweighted METIS graph: a header `n m`, then one line of 1-based
/// neighbors per vertex with every edge listed at both endpoints.
pub fn parse_metis(reader: impl BufRead) -> Result<StaticGraph, FormatError> {
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !matches!(l, Ok(s) if s.trim_start().starts_with('%')));

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let header = header?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let num = |i: usize| -> Result<usize, FormatError> {
        fields
            .get(i)
            .ok_or_else(|| parse_err(hline, "header needs `n m`"))?
            .parse()
            .map_err(|e| parse_err(hline, format!("bad header field: {e}")))
    };
    let n = num(0)?;
    let m = num(1)?;
    if fields.len() > 2 && !fields[2].trim_start_matches('0').is_empty() {
        return Err(parse_err(hline, "weighted METIS graphs are not supported"));
    }

    let mut arcs = HashSet::new();
    for u in 0..n {
        let Some((lineno, line)) = lines.next() else {
            // trailing isolated vertices may be left out
            break;
        };
        for tok in line?.split_whitespace() {
            let x: usize = tok
                .parse()
                .map_err(|e| parse_err(lineno, format!("bad neighbor: {e}")))?;
            if x == 0 || x > n {
                return Err(parse_err(lineno, format!("neighbor {x} outside 1..={n}")));
            }
            if x - 1 == u {
                return Err(parse_err(lineno, format!("self-loop at vertex {x}")));
            }
            arcs.insert((u, x - 1));
        }
    }
    if let Some((lineno, line)) = lines.next() {
        if !line?.trim().is_empty() {
            return Err(parse_err(lineno, format!("more than {n} adjacency lines")));
        }
    }

    let mut edges = Vec::with_capacity(m);
    for &(u, v) in &arcs {
        if !arcs.contains(&(v, u)) {
            return Err(FormatError::AsymmetricAdjacency(u + 1, v + 1));
        }
        if u < v {
            edges.push((u, v));
        }
    }
    if edges.len() != m {
        return Err(FormatError::CountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    edges.sort_unstable();
    Ok(StaticGraph { n, edges })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceMode {
    InsertOnly,
    /// All inserts, then all deletes in an independently shuffled order.
    InsertThenDelete,
}

impl FromStr for SequenceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "insert_only" => Ok(SequenceMode::InsertOnly),
            "insert_then_delete" => Ok(SequenceMode::InsertThenDelete),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

/// Fisher–Yates shuffle driven by SplitMix64.
///
/// For `i` from `len - 1` down to `1` the generator yields `x` and positions
/// `i` and `x mod (i + 1)` are swapped. The generator state starts at `seed`
/// and each output is the standard SplitMix64 finalizer of the state after
/// adding `0x9E3779B97F4A7C15`.
pub fn shuffle<T>(items: &mut [T], rng: &mut SplitMix64) {
    for i in (1..items.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}

pub fn seeded_rng(seed: u64) -> SplitMix64 {
    SplitMix64::from_seed(seed.to_le_bytes())
}

/// Turns a static graph into a dynamic instance by inserting its edges in
/// random order, optionally followed by deleting them all again.
pub fn static_to_sequence(edges: &[(VertexId, VertexId)], n: usize, seed: u64, mode: SequenceMode) -> EditSequence {
    let mut rng = seeded_rng(seed);
    let mut order = edges.to_vec();
    shuffle(&mut order, &mut rng);
    let mut ops: Vec<EditOp> = order.iter().map(|&(u, v)| EditOp::insert(u, v)).collect();
    if mode == SequenceMode::InsertThenDelete {
        shuffle(&mut order, &mut rng);
        ops.extend(order.iter().map(|&(u, v)| EditOp::delete(u, v)));
    }
    let max_id = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    EditSequence {
        ops,
        declared_n: Some(n.max(max_id)),
        external_ids: (0..n.max(max_id) as u64).collect(),
    }
}
