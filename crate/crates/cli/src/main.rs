//! `rainbow`: rainbow matchings and rainbow-matching decompositions of
//! edge-coloured graphs.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 unmet precondition,
//! 3 internal invariant failure, 4 Hall failure during decomposition,
//! 5 verification failed.

mod check;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rainbow_core::decompose::{check_decomposition, decompose_with, DecomposeError, Decomposition};
use rainbow_core::extend::{parse_rational, theorem1_traced, theorem2_traced, ExtendError};
use rainbow_core::genlab::{generate, GenError, GenSpec, Model, Theorem};
use rainbow_core::oracle::max_rainbow_matching_exact;
use rainbow_core::{ecg, Matching};
use serde_json::json;

use crate::io::{emit, read_graph, read_json, to_json_line};

pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn io(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Failure { code: 5, message: message.into() }
    }
}

impl From<ExtendError> for Failure {
    fn from(e: ExtendError) -> Self {
        if e.is_precondition() {
            Failure::precondition(e.to_string())
        } else {
            Failure::internal(e.to_string())
        }
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        Failure::precondition(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "rainbow", version, about = "Rainbow matchings in edge-coloured graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a rainbow matching of size k under minimum colour degree k.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Use the bipartite bound n ≥ (3+ε)k + ε⁻².
        #[arg(long)]
        bipartite: bool,
        /// Exact fraction p/q in (0, 1/2].
        #[arg(long, default_value = "1/2")]
        epsilon: String,
        /// Write one JSON record per driver iteration here.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_verify: bool,
    },
    /// Decompose into ⌊tn/2⌋ rainbow matchings.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        t: usize,
        /// Keep the fresh-colour edges added to complete the graph.
        #[arg(long)]
        keep_completion: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_verify: bool,
    },
    /// Check a decomposition or a matching against a graph.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, conflicts_with = "matching", required_unless_present = "matching")]
        parts: Option<PathBuf>,
        /// Check against the fresh-colour completion of the input.
        #[arg(long, requires = "parts")]
        completed: bool,
        #[arg(long)]
        matching: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Generate a seeded instance in .ecg format.
    Gen {
        /// GenSpec JSON file; overrides the individual flags.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, required_unless_present = "spec")]
        model: Option<Model>,
        #[arg(long, required_unless_present = "spec")]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        colours: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum rainbow matching by exhaustive search.
    Oracle {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run seeded trials and exhaustive checks; JSON lines on stdout.
    Check {
        #[arg(long, value_enum, default_value = "all")]
        suite: check::Suite,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Time trials of one statement.
    Bench {
        #[arg(long)]
        theorem: Theorem,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn solve(
    input: PathBuf,
    k: usize,
    bipartite: bool,
    epsilon: &str,
    trace: Option<PathBuf>,
    out: Option<PathBuf>,
    no_verify: bool,
) -> Result<(), Failure> {
    let g = read_graph(&input)?;
    let (m, records) = if bipartite {
        let eps = parse_rational(epsilon).map_err(Failure::io)?;
        theorem2_traced(&g, k, eps)?
    } else {
        theorem1_traced(&g, k)?
    };
    if let Some(path) = trace {
        let lines: String = records.iter().map(to_json_line).collect();
        emit(Some(&path), &lines)?;
    }
    let verified = !no_verify;
    if verified && (m.len() != k || !g.is_rainbow_matching(&m).unwrap_or(false)) {
        return Err(Failure::internal("returned matching failed verification"));
    }
    emit(out.as_deref(), &to_json_line(&json!({ "k": k, "matching": m, "verified": verified })))
}

fn run_decompose(
    input: PathBuf,
    t: usize,
    keep_completion: bool,
    out: Option<PathBuf>,
    no_verify: bool,
) -> Result<(), Failure> {
    let g = read_graph(&input)?;
    let d = match decompose_with(&g, t, keep_completion) {
        Ok(d) => d,
        Err(DecomposeError::HallFailure { colour, edges, neighbourhood }) => {
            let certificate = json!({
                "hall_failure": { "colour": colour, "edges": edges, "neighbourhood": neighbourhood }
            });
            emit(out.as_deref(), &to_json_line(&certificate))?;
            return Err(Failure {
                code: 4,
                message: format!(
                    "Hall's condition fails for colour {colour}: {} edges, {neighbourhood} parts",
                    edges.len()
                ),
            });
        }
        Err(e) => return Err(Failure::precondition(e.to_string())),
    };
    if !no_verify {
        let host = if keep_completion { g.complete_with_fresh_colours().0 } else { g };
        check_decomposition(&host, &d).map_err(Failure::internal)?;
    }
    emit(out.as_deref(), &to_json_line(&d))
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum MatchingFile {
    Bare(Matching),
    Solved { matching: Matching, k: Option<usize> },
}

fn verify(
    input: PathBuf,
    parts: Option<PathBuf>,
    completed: bool,
    matching: Option<PathBuf>,
    k: Option<usize>,
) -> Result<(), Failure> {
    let g = read_graph(&input)?;
    if let Some(path) = parts {
        let d: Decomposition = read_json(&path)?;
        let host = if completed { g.complete_with_fresh_colours().0 } else { g };
        return check_decomposition(&host, &d).map_err(Failure::verification);
    }
    let path = matching.expect("clap requires --parts or --matching");
    let (m, file_k) = match read_json(&path)? {
        MatchingFile::Bare(m) => (m, None),
        MatchingFile::Solved { matching, k } => (matching, k),
    };
    let k = k.or(file_k).ok_or_else(|| Failure::io("--k is required for a bare matching"))?;
    match g.is_rainbow_matching(&m) {
        Err(e) => Err(Failure::verification(e.to_string())),
        Ok(false) => Err(Failure::verification("not a rainbow matching")),
        Ok(true) if m.len() < k => Err(Failure::verification(format!("matching has {} < {k} edges", m.len()))),
        Ok(true) => Ok(()),
    }
}

#[allow(clippy::too_many_arguments)]
fn gen(
    spec: Option<PathBuf>,
    model: Option<Model>,
    n: Option<usize>,
    seed: u64,
    k: Option<usize>,
    t: Option<usize>,
    epsilon: Option<String>,
    p: Option<f64>,
    colours: Option<u32>,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let spec = match spec {
        Some(path) => read_json::<GenSpec>(&path)?,
        None => {
            let model = model.expect("clap requires --model");
            let n = n.expect("clap requires --n");
            GenSpec { model, n, k, t, epsilon, p, colours, seed }
        }
    };
    let g = generate(&spec)?;
    emit(out.as_deref(), &ecg::write(&g))
}

fn oracle(input: PathBuf) -> Result<(), Failure> {
    let g = read_graph(&input)?;
    let (size, m) = max_rainbow_matching_exact(&g);
    emit(None, &to_json_line(&json!({ "size": size, "matching": m.sorted() })))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { input, k, bipartite, epsilon, trace, out, no_verify } => {
            solve(input, k, bipartite, &epsilon, trace, out, no_verify)
        }
        Command::Decompose { input, t, keep_completion, out, no_verify } => {
            run_decompose(input, t, keep_completion, out, no_verify)
        }
        Command::Verify { input, parts, completed, matching, k } => verify(input, parts, completed, matching, k),
        Command::Gen { spec, model, n, seed, k, t, epsilon, p, colours, out } => {
            gen(spec, model, n, seed, k, t, epsilon, p, colours, out)
        }
        Command::Oracle { input } => oracle(input),
        Command::Check { suite, trials, seed, jobs } => check::check(suite, trials, seed, jobs),
        Command::Bench { theorem, trials, seed } => check::bench(theorem, trials, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
