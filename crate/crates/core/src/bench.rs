//! Benchmark runner and the evaluation statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynsolvers::{Algorithm, Maintainer};
use crate::io::{EditKind, EditSequence};
use crate::oracle;
use crate::pathfind::{PathBackend, SearchStats};
use crate::static_solver;

/// Final-state verification consults the subset-enumeration oracle only up to
/// this many vertices.
pub const ORACLE_VERIFY_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Verify {
    #[default]
    None,
    Final,
    Every,
}

impl Verify {
    pub fn id(self) -> &'static str {
        match self {
            Verify::None => "none",
            Verify::Final => "final",
            Verify::Every => "every",
        }
    }
}

impl fmt::Display for Verify {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Verify {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Verify::None),
            "final" => Ok(Verify::Final),
            "every" => Ok(Verify::Every),
            _ => Err(format!("unknown verification level `{s}`")),
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("verification failed after update {index}: {message}\n{repro}")]
    Verification {
        index: usize,
        message: String,
        /// Header describing how to replay the failing prefix.
        repro: String,
    },
    #[error("update {index} rejected: {source}")]
    Update {
        index: usize,
        source: crate::graph::GraphError,
    },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub instance: String,
    pub algorithm: Algorithm,
    pub backend: PathBackend,
    pub seed: Option<u64>,
    pub repetitions: usize,
    pub verify: Verify,
    pub record_trajectory: bool,
}

impl RunConfig {
    pub fn new(instance: impl Into<String>, algorithm: Algorithm, backend: PathBackend) -> Self {
        RunConfig {
            instance: instance.into(),
            algorithm,
            backend,
            seed: None,
            repetitions: 1,
            verify: Verify::None,
            record_trajectory: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub instance: String,
    pub algorithm: Algorithm,
    pub backend: PathBackend,
    pub seed: Option<u64>,
    pub repetition: usize,
    pub ops: usize,
    /// Time spent inside update calls only.
    pub total_ns: u128,
    pub trajectory: Option<Vec<usize>>,
    pub final_delta: usize,
    pub stats: SearchStats,
    pub tighten_searches: u64,
    pub verified: Verify,
}

fn repro_header(cfg: &RunConfig, seq: &EditSequence, index: usize) -> String {
    format!(
        "% reproduce: --alg {} --backend {} on the first {} updates of `{}` (last: {})",
        cfg.algorithm,
        cfg.backend,
        index + 1,
        cfg.instance,
        seq.ops[index]
    )
}

fn verify_final(m: &dyn Maintainer, seq: &EditSequence) -> Result<(), String> {
    let edges = seq.final_edges();
    let report = oracle::validate_orientation(m.orientation().arcs(), &edges);
    if !report.is_valid() {
        return Err(format!("orientation does not match the edge set: {report:?}"));
    }
    if m.delta() != m.orientation().max_out_degree() {
        return Err(format!(
            "reported delta {} but orientation has {}",
            m.delta(),
            m.orientation().max_out_degree()
        ));
    }
    let reference = static_solver::venkateswaran_solve_n(&edges, seq.vertex_count())
        .map_err(|e| e.to_string())?
        .k;
    if reference != m.delta() {
        return Err(format!("delta {} but the static solver gives {reference}", m.delta()));
    }
    if seq.vertex_count() <= ORACLE_VERIFY_LIMIT {
        let opt = oracle::pseudoarboricity_bruteforce(&edges, seq.vertex_count())
            .map_err(|e| e.to_string())?
            .optimal_delta;
        if opt != m.delta() {
            return Err(format!("delta {} but the oracle gives {opt}", m.delta()));
        }
    }
    Ok(())
}

fn run_once(seq: &EditSequence, cfg: &RunConfig, repetition: usize) -> Result<RunRecord, RunError> {
    let mut m = cfg.algorithm.build(cfg.backend, seq.vertex_count());
    let mut trajectory = cfg.record_trajectory.then(|| Vec::with_capacity(seq.len()));
    let apply = |m: &mut Box<dyn Maintainer>, i: usize| {
        let op = seq.ops[i];
        match op.kind {
            EditKind::Insert => m.insert(op.u, op.v),
            EditKind::Delete => m.delete(op.u, op.v),
        }
        .map_err(|source| RunError::Update { index: i, source })
    };

    let mut total = Duration::ZERO;
    if cfg.verify == Verify::Every || trajectory.is_some() {
        for i in 0..seq.len() {
            let start = Instant::now();
            apply(&mut m, i)?;
            total += start.elapsed();
            if let Some(t) = trajectory.as_mut() {
                t.push(m.delta());
            }
            if cfg.verify == Verify::Every {
                m.audit().map_err(|e| RunError::Verification {
                    index: i,
                    message: e.to_string(),
                    repro: repro_header(cfg, seq, i),
                })?;
            }
        }
    } else {
        let start = Instant::now();
        for i in 0..seq.len() {
            apply(&mut m, i)?;
        }
        total = start.elapsed();
    }

    if matches!(cfg.verify, Verify::Final | Verify::Every) {
        verify_final(m.as_ref(), seq).map_err(|message| RunError::Verification {
            index: seq.len().saturating_sub(1),
            message,
            repro: if seq.is_empty() {
                String::from("% reproduce: empty sequence")
            } else {
                repro_header(cfg, seq, seq.len() - 1)
            },
        })?;
    }

    Ok(RunRecord {
        instance: cfg.instance.clone(),
        algorithm: cfg.algorithm,
        backend: cfg.backend,
        seed: cfg.seed,
        repetition,
        ops: seq.len(),
        total_ns: total.as_nanos(),
        trajectory,
        final_delta: m.delta(),
        stats: m.stats(),
        tighten_searches: m.tighten_searches(),
        verified: cfg.verify,
    })
}

/// Replays `seq` on `cfg.repetitions` fresh maintainers.
pub fn run(seq: &EditSequence, cfg: &RunConfig) -> Result<Vec<RunRecord>, RunError> {
    (0..cfg.repetitions.max(1)).map(|r| run_once(seq, cfg, r)).collect()
}

/// Runs independent (instance, configuration) cells on the rayon pool. The
/// output keeps the order of `cells`.
pub fn run_matrix(cells: &[(&EditSequence, RunConfig)]) -> Vec<Result<Vec<RunRecord>, RunError>> {
    cells.par_iter().map(|(seq, cfg)| run(seq, cfg)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("no values")]
    Empty,
    #[error("value {0} is not positive")]
    NonPositive(String),
    #[error("no value for algorithm `{algorithm}` on instance `{instance}`")]
    MissingCell { algorithm: String, instance: String },
}

pub fn geometric_mean(values: &[f64]) -> Result<f64, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    if let Some(v) = values.iter().find(|&&v| v.is_nan() || v <= 0.0) {
        return Err(StatsError::NonPositive(v.to_string()));
    }
    let n = values.len() as f64;
    // the n-th root of the product is exact on small inputs; logs avoid overflow
    let product: f64 = values.iter().product();
    if product.is_normal() {
        return Ok(product.powf(1.0 / n));
    }
    let mean_log = values.iter().map(|v| v.ln()).sum::<f64>() / n;
    Ok(mean_log.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub tau: f64,
    pub fraction: f64,
}

/// Metric values keyed by algorithm, then instance. Lower is better.
pub type ResultMatrix = BTreeMap<String, BTreeMap<String, f64>>;

/// For every algorithm, the fraction of instances on which it is within a
/// factor `tau` of the best algorithm, evaluated at every ratio that occurs.
pub fn performance_profile(results: &ResultMatrix) -> Result<BTreeMap<String, Vec<ProfilePoint>>, StatsError> {
    let instances: BTreeSet<&String> = results.values().flat_map(|m| m.keys()).collect();
    let mut best: BTreeMap<&String, f64> = BTreeMap::new();
    for inst in &instances {
        for (alg, row) in results {
            let v = *row.get(*inst).ok_or_else(|| StatsError::MissingCell {
                algorithm: alg.clone(),
                instance: (*inst).clone(),
            })?;
            if v.is_nan() || v <= 0.0 {
                return Err(StatsError::NonPositive(v.to_string()));
            }
            let b = best.entry(inst).or_insert(v);
            *b = b.min(v);
        }
    }
    let ratios: BTreeMap<&String, Vec<f64>> = results
        .iter()
        .map(|(alg, row)| (alg, instances.iter().map(|i| row[*i] / best[i]).collect()))
        .collect();
    let mut taus: Vec<f64> = ratios.values().flatten().copied().collect();
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    let total = instances.len() as f64;
    Ok(ratios
        .into_iter()
        .map(|(alg, rs)| {
            let points = taus
                .iter()
                .map(|&tau| ProfilePoint {
                    tau,
                    fraction: rs.iter().filter(|&&r| r <= tau).count() as f64 / total,
                })
                .collect();
            (alg.clone(), points)
        })
        .collect())
}

/// One line of the results CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub instance: String,
    pub algorithm: String,
    pub backend: String,
    pub seed: Option<u64>,
    pub repetition: usize,
    pub ops: usize,
    pub total_ns: u128,
    pub final_delta: usize,
    pub searches: u64,
    pub flips: u64,
    pub verified: String,
}

impl From<&RunRecord> for CsvRow {
    fn from(r: &RunRecord) -> Self {
        CsvRow {
            instance: r.instance.clone(),
            algorithm: r.algorithm.id().to_string(),
            backend: r.backend.id().to_string(),
            seed: r.seed,
            repetition: r.repetition,
            ops: r.ops,
            total_ns: r.total_ns,
            final_delta: r.final_delta,
            searches: r.stats.searches_started,
            flips: r.stats.edges_flipped,
            verified: r.verified.id().to_string(),
        }
    }
}

pub fn write_csv(w: impl Write, records: &[RunRecord]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(CsvRow::from(r))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv(r: impl Read) -> csv::Result<Vec<CsvRow>> {
    csv::Reader::from_reader(r).deserialize().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Time,
    Delta,
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "time" => Ok(Metric::Time),
            "delta" => Ok(Metric::Delta),
            _ => Err(format!("unknown metric `{s}`")),
        }
    }
}

/// Averages repetitions into an algorithm × instance matrix. Algorithms are
/// keyed as `algorithm-backend`.
pub fn matrix_from_rows(rows: &[CsvRow], metric: Metric) -> ResultMatrix {
    let mut acc: BTreeMap<String, BTreeMap<String, (f64, usize)>> = BTreeMap::new();
    for row in rows {
        let value = match metric {
            Metric::Time => row.total_ns as f64,
            Metric::Delta => row.final_delta as f64,
        };
        let cell = acc
            .entry(format!("{}-{}", row.algorithm, row.backend))
            .or_default()
            .entry(row.instance.clone())
            .or_insert((0.0, 0));
        cell.0 += value;
        cell.1 += 1;
    }
    acc.into_iter()
        .map(|(alg, row)| (alg, row.into_iter().map(|(i, (s, c))| (i, s / c as f64)).collect()))
        .collect()
}

pub fn write_profile(w: impl Write, profile: &BTreeMap<String, Vec<ProfilePoint>>) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["algorithm", "tau", "fraction"])?;
    for (alg, points) in profile {
        for p in points {
            out.write_record([alg.clone(), p.tau.to_string(), p.fraction.to_string()])?;
        }
    }
    out.flush()?;
    Ok(())
}
