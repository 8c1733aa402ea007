//! `degchain`: sample graphs with a fixed degree sequence and analyse the
//! switch and Curveball chains exactly on small state spaces.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 infeasible degree
//! sequence, 3 state-space cap exceeded, 4 verification failure.

mod commands;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use degchain::chains::ChainKind;
use degchain::exact::DEFAULT_STATE_CAP;
use degchain::graph::GraphKind;
use serde_json::Value;

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "degchain.v1";

#[derive(Debug, Parser)]
#[command(name = "degchain", version, about = "Switch and Curveball chains on graphs with a fixed degree sequence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count (and with --full, list) all states with the given margins
    Enumerate(Common),
    /// Partition the state space into isomorphism classes
    Classes(Common),
    /// Exact transition matrix of a chain
    Matrix(Common),
    /// Project a chain onto isomorphism classes
    Project(Common),
    /// Mixing time of a chain, its projection, or from class-uniform starts
    Mixing {
        #[command(flatten)]
        common: Common,
        /// Use the projected chain on isomorphism classes
        #[arg(long, conflicts_with = "lifted")]
        projected: bool,
        /// Start from the uniform distribution on each class
        #[arg(long)]
        lifted: bool,
    },
    /// Eigenvalues and spectral gap
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Use the projected chain on isomorphism classes
        #[arg(long)]
        projected: bool,
    },
    /// Run independent replicas of a chain
    Sample(Common),
    /// Relabel nodes uniformly within equal-degree groups
    Preprocess(Common),
    /// Check lumpability, detailed balance, projection identities and the sampler
    Verify(Common),
    /// Degree sequence of a named family
    Family {
        #[arg(value_enum)]
        family: Family,
        /// n for the quadratic family, l for the binomial family
        param: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Bipartite,
    #[value(alias = "undirected-simple")]
    Undirected,
    #[value(alias = "directed-simple")]
    Directed,
}

impl From<KindArg> for GraphKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Bipartite => GraphKind::Bipartite,
            KindArg::Undirected => GraphKind::Undirected,
            KindArg::Directed => GraphKind::Directed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChainArg {
    Switch,
    Curveball,
}

impl From<ChainArg> for ChainKind {
    fn from(c: ChainArg) -> Self {
        match c {
            ChainArg::Switch => ChainKind::Switch,
            ChainArg::Curveball => ChainKind::Curveball,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// rows (2,...,2), columns (n-1, n-1, 1, 1)
    #[value(alias = "5.1")]
    Quadratic,
    /// rows (l, l), columns (1,...,1)
    #[value(alias = "5.2")]
    Binomial,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Graph kind; fills in a missing "kind" in --degrees and must match the input otherwise
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Chain to analyse or run [default: switch; verify checks both]
    #[arg(long, value_enum)]
    chain: Option<ChainArg>,
    /// Degree-sequence JSON: {"kind": ..., "rows": [...], "cols": [...]}
    #[arg(long, value_name = "FILE", conflicts_with = "matrix")]
    degrees: Option<PathBuf>,
    /// State in matrix text format: "n n' kind" followed by n rows of 0/1 digits
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Variation-distance threshold for mixing times
    #[arg(long, default_value_t = 0.001)]
    eps: f64,
    /// Chain steps per replica [default: 1000]
    #[arg(long)]
    steps: Option<u64>,
    /// Replicas for sample, Monte Carlo steps per state for verify
    #[arg(long)]
    samples: Option<u64>,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relabel within equal-degree groups before running the chain
    #[arg(long)]
    preprocess: bool,
    /// Largest state space to enumerate
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Include full matrices, state lists and traces in JSON output
    #[arg(long)]
    full: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] degchain::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("verification failed")]
    Failed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use degchain::Error as E;
        match self {
            CliError::Lib(E::Infeasible(_)) => 2,
            CliError::Lib(E::CapExceeded { .. }) => 3,
            CliError::Lib(
                E::VerificationFailed(_) | E::NotLumpable { .. } | E::NotReversible { .. } | E::NoConvergence { .. },
            )
            | CliError::Failed => 4,
            _ => 1,
        }
    }
}

/// A command's result: a JSON document, optionally a table for CSV output,
/// and whether a verification failed.
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    pub failed: bool,
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn json(json: Value) -> Self {
        Report {
            json,
            table: None,
            failed: false,
        }
    }
}

fn render(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&report.json).expect("JSON values serialize");
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let table = report
                .table
                .as_ref()
                .ok_or_else(|| CliError::Usage("csv output is available for mixing, spectrum and sample".into()))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let io_err = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
            w.write_record(&table.header).map_err(io_err)?;
            for row in &table.rows {
                w.write_record(row).map_err(io_err)?;
            }
            Ok(w.into_inner().expect("in-memory writer"))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let common = match &cli.command {
        Command::Enumerate(c)
        | Command::Classes(c)
        | Command::Matrix(c)
        | Command::Project(c)
        | Command::Sample(c)
        | Command::Preprocess(c)
        | Command::Verify(c) => c,
        Command::Mixing { common, .. } | Command::Spectrum { common, .. } | Command::Family { common, .. } => common,
    };
    let report = match &cli.command {
        Command::Enumerate(c) => commands::enumerate(c)?,
        Command::Classes(c) => commands::classes(c)?,
        Command::Matrix(c) => commands::matrix(c)?,
        Command::Project(c) => commands::project(c)?,
        Command::Mixing { common, projected, lifted } => commands::mixing(common, *projected, *lifted)?,
        Command::Spectrum { common, projected } => commands::spectrum(common, *projected)?,
        Command::Sample(c) => commands::sample(c)?,
        Command::Preprocess(c) => commands::preprocess(c)?,
        Command::Verify(c) => commands::verify(c)?,
        Command::Family { family, param, .. } => commands::family(*family, *param)?,
    };
    let bytes = render(&report, common.format)?;
    match &common.out {
        Some(path) => fs::write(path, &bytes).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => io::stdout().write_all(&bytes).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })?,
    }
    if report.failed {
        return Err(CliError::Failed);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
