//! `oscillaprop`: evolve wavefunctions with the exact propagators, run the
//! identity suites and write CSV/JSON artifacts.
//!
//! Exit status: 0 on success, 1 when `identities` records a failed check,
//! 2 on I/O or configuration errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use oscillaprop::ModelId;

#[derive(Parser, Debug)]
#[command(name = "oscillaprop", version, about = "Exact propagators for modified quantum oscillators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Tabulate mu and mu' over [t-start, t-end].
    Mu,
    /// Tabulate the Green function over an N x N grid at time t.
    Kernel,
    /// Apply U(t) to the input grid.
    Evolve,
    /// Apply U(t)^-1 to the input grid.
    Invert,
    /// PDE residual of the Green function over an (x, t) table.
    Residual,
    /// Invariant checks for one model at time t (or the full suite with --full).
    Identities,
    /// Bargmann eigenfunction expansion against the closed-form kernel (M1).
    Expand,
    /// Particular nonlinear solution and its residual at time t.
    Nls,
    /// kappa_eps over a log-spaced eps sequence down to --eps.
    Scan,
    /// Classical phase-space trajectory of the model Hamiltonian.
    Classical,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// M1..M4, FREE, HARMONIC or DAMPED:<omega0>:<lambda>.
    #[arg(long, global = true, default_value = "M1", value_parser = parse_model)]
    pub model: ModelId,
    #[arg(long, global = true, default_value_t = 0.5, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long = "t-start", global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t_start: f64,
    #[arg(long = "t-end", global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t_end: f64,
    #[arg(long, global = true, default_value_t = 100)]
    pub steps: usize,
    /// Grid half width.
    #[arg(long = "L", global = true, default_value_t = 12.0)]
    pub half_width: f64,
    /// Grid points (power of two, at least 64).
    #[arg(long = "N", global = true, default_value_t = 1024)]
    pub points: usize,
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub eps: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, global = true, default_value_t = 40)]
    pub cutoff: usize,
    /// Source grid (x,re,im CSV); defaults to the oscillator ground state.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Destination file, written atomically; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Output format; csv by default, json for `identities` and `expand`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Run the whole acceptance suite in `identities`.
    #[arg(long, global = true)]
    pub full: bool,
    /// Tolerance override NAME=VALUE for `identities` (residual, duality, criterion, round_trip).
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
}

fn parse_model(s: &str) -> std::result::Result<ModelId, String> {
    let m: ModelId = s.parse().map_err(|e| format!("{e}"))?;
    m.validate().map_err(|e| format!("{e}"))?;
    Ok(m)
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let v: f64 = value.parse().map_err(|e| format!("{e}"))?;
    if !(v > 0.0) {
        return Err(format!("tolerance must be positive, got {v}"));
    }
    Ok((name.trim().to_string(), v))
}

/// Result of a subcommand: the artifact text and whether all checks held.
pub struct Artifact {
    pub text: String,
    pub passed: bool,
}

impl Artifact {
    pub fn ok(text: String) -> Self {
        Self { text, passed: true }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("OSCILLAPROP_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("OSCILLAPROP_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            bail!("OSCILLAPROP_THREADS must be a positive integer, got 0");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    Ok(())
}

/// Writes through a temporary file in the destination directory, then renames.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn run(cli: &Cli) -> Result<Artifact> {
    configure_threads()?;
    let c = &cli.config;
    match cli.command {
        Command::Mu => commands::mu(c),
        Command::Kernel => commands::kernel(c),
        Command::Evolve => commands::evolve(c, false),
        Command::Invert => commands::evolve(c, true),
        Command::Residual => commands::residual(c),
        Command::Identities => commands::identities(c),
        Command::Expand => commands::expand(c),
        Command::Nls => commands::nls(c),
        Command::Scan => commands::scan(c),
        Command::Classical => commands::classical(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let artifact = match run(&cli) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.config.output {
        Some(p) => write_atomic(p, &artifact.text),
        None => std::io::stdout().write_all(artifact.text.as_bytes()).map_err(Into::into),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if artifact.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("one or more checks failed");
        ExitCode::from(1)
    }
}
