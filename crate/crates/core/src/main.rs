use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use deltaorient::bench::{self, Metric, RunConfig, RunError, Verify};
use deltaorient::dynsolvers::Algorithm;
use deltaorient::io::{self as formats, EditSequence, FormatError, SequenceMode};
use deltaorient::oracle::{self, OracleError};
use deltaorient::pathfind::PathBackend;

#[derive(Parser)]
#[command(name = "deltaorient", version, about = "Exact fully dynamic Δ-orientation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum InputFormat {
    Seq,
    Metis,
}

impl std::str::FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "seq" => Ok(InputFormat::Seq),
            "metis" => Ok(InputFormat::Metis),
            _ => Err(format!("unknown format `{s}`")),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Replay an instance with one algorithm and record timings.
    Run {
        #[arg(long)]
        alg: Algorithm,
        #[arg(long)]
        backend: PathBackend,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "seq")]
        format: InputFormat,
        /// Shuffle seed for METIS inputs.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "insert_only")]
        mode: SequenceMode,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value = "none")]
        verify: Verify,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write Δ after every update, one value per line.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Turn a static METIS graph into an edit sequence.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "insert_only")]
        mode: SequenceMode,
        #[arg(long)]
        output: PathBuf,
    },
    /// Print the optimal Δ and a densest-subgraph witness.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "seq")]
        format: InputFormat,
    },
    /// Build a performance profile from a results CSV.
    Profile {
        #[arg(long)]
        metric: Metric,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

enum Failure {
    Input(String),
    Verification(String),
    OracleGuard(String),
    Other(String),
}

impl Failure {
    fn exit(self) -> ExitCode {
        let (code, msg) = match self {
            Failure::Input(m) => (2, m),
            Failure::Verification(m) => (3, m),
            Failure::OracleGuard(m) => (4, m),
            Failure::Other(m) => (1, m),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

fn load(path: &Path, format: InputFormat, seed: u64, mode: SequenceMode) -> Result<EditSequence, Failure> {
    Ok(match format {
        InputFormat::Seq => formats::parse_edit_sequence(open(path)?)?,
        InputFormat::Metis => {
            let g = formats::parse_metis(open(path)?)?;
            formats::static_to_sequence(&g.edges, g.n, seed, mode)
        }
    })
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Run {
            alg,
            backend,
            input,
            format,
            seed,
            mode,
            reps,
            verify,
            csv,
            trajectory,
        } => {
            let seq = load(&input, format, seed, mode)?;
            let mut cfg = RunConfig::new(instance_name(&input), alg, backend);
            cfg.seed = (format == InputFormat::Metis).then_some(seed);
            cfg.repetitions = reps;
            cfg.verify = verify;
            cfg.record_trajectory = trajectory.is_some();
            let records = bench::run(&seq, &cfg).map_err(|e| match e {
                RunError::Verification { .. } => Failure::Verification(e.to_string()),
                RunError::Update { .. } => Failure::Input(e.to_string()),
            })?;
            for r in &records {
                println!(
                    "{} {}/{} rep {}: {} updates in {:.3} ms, final delta {}, {} searches, {} flips",
                    r.instance,
                    r.algorithm,
                    r.backend,
                    r.repetition,
                    r.ops,
                    r.total_ns as f64 / 1e6,
                    r.final_delta,
                    r.stats.searches_started,
                    r.stats.edges_flipped
                );
            }
            if let Some(path) = csv {
                bench::write_csv(create(&path)?, &records).map_err(|e| Failure::Other(e.to_string()))?;
            }
            if let (Some(path), Some(t)) = (trajectory, records.first().and_then(|r| r.trajectory.as_ref())) {
                let mut w = create(&path)?;
                for d in t {
                    writeln!(w, "{d}").map_err(|e| Failure::Other(e.to_string()))?;
                }
                w.flush().map_err(|e| Failure::Other(e.to_string()))?;
            }
        }
        Command::Convert {
            input,
            seed,
            mode,
            output,
        } => {
            let seq = load(&input, InputFormat::Metis, seed, mode)?;
            let mut w = create(&output)?;
            seq.write_to(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| Failure::Other(e.to_string()))?;
        }
        Command::Oracle { input, format } => {
            let (n, edges, ids) = match format {
                InputFormat::Seq => {
                    let seq = formats::parse_edit_sequence(open(&input)?)?;
                    (seq.vertex_count(), seq.final_edges(), Some(seq.external_ids))
                }
                InputFormat::Metis => {
                    let g = formats::parse_metis(open(&input)?)?;
                    (g.n, g.edges, None)
                }
            };
            let cert = oracle::pseudoarboricity_bruteforce(&edges, n).map_err(|e| match e {
                OracleError::TooLarge { .. } | OracleError::TooManyEdges { .. } => Failure::OracleGuard(e.to_string()),
                OracleError::Malformed(_) => Failure::Input(e.to_string()),
            })?;
            let witness: Vec<String> = cert
                .witness
                .iter()
                .map(|&v| match &ids {
                    Some(ids) if v < ids.len() => ids[v].to_string(),
                    _ => v.to_string(),
                })
                .collect();
            let (e, s) = cert.witness_density();
            let stdout = io::stdout();
            let mut out = stdout.lock();
            writeln!(out, "optimal_delta {}", cert.optimal_delta)
                .and_then(|_| writeln!(out, "witness {}", witness.join(" ")))
                .and_then(|_| writeln!(out, "density {e}/{s}"))
                .map_err(|e| Failure::Other(e.to_string()))?;
        }
        Command::Profile { metric, input, output } => {
            let rows = bench::read_csv(open(&input)?).map_err(|e| Failure::Input(e.to_string()))?;
            let matrix = bench::matrix_from_rows(&rows, metric);
            let profile = bench::performance_profile(&matrix).map_err(|e| Failure::Input(e.to_string()))?;
            bench::write_profile(create(&output)?, &profile).map_err(|e| Failure::Other(e.to_string()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.exit(),
    }
}
