//! Command-line front end for the random Volterra operator.

mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use commands::Command;
use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<cubic_rds::Error> for CliError {
    fn from(e: cubic_rds::Error) -> Self {
        use cubic_rds::Error as E;
        match e {
            E::SimplexViolation { .. } | E::InverseNotConverged(_) | E::ChartViolation(..) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

/// Order-preserving parallel map used by commands that run trajectories.
pub fn ordered<T, F>(n: usize, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(usize) -> cubic_rds::Result<T> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect::<cubic_rds::Result<Vec<T>>>().map_err(CliError::from)
}

#[derive(Parser)]
#[command(name = "cubic-rds", version, about = "Random iteration of the Volterra cubic operator on the 2-simplex")]
struct Cli {
    /// Flat key=value file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run trajectories from one initial point.
    Simulate(Flags),
    /// Exact exponents and attractor sets per region.
    Classify(Flags),
    /// Exponent scan over the two-point family.
    Scan(Flags),
    /// Limit-label frequencies over a grid of int G1 (or at --x0).
    Basin(Flags),
    /// Escape fraction from a small ball around a fixed point.
    Escape(Flags),
    /// Pass/fail table of the normal-form invariants.
    #[command(name = "normalform-check")]
    NormalformCheck(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// Parameter law, e.g. dirac:0.9, uniform:0.5,0.8, mix:0.5*dirac:0.57+0.5*dirac:0.77
    #[arg(long)]
    dist: Option<String>,
    /// Initial point x1,x2,x3
    #[arg(long)]
    x0: Option<String>,
    /// Maximum number of steps per trajectory
    #[arg(long)]
    steps: Option<String>,
    /// Convergence radius (escape: ball radius)
    #[arg(long)]
    eps: Option<String>,
    /// Consecutive steps inside the ball needed for a verdict
    #[arg(long)]
    dwell: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    /// Grid resolution for basin
    #[arg(long)]
    grid: Option<String>,
    /// Master seed
    #[arg(long)]
    seed: Option<String>,
    /// Worker threads (does not change results)
    #[arg(long)]
    threads: Option<String>,
    /// Output file (default stdout)
    #[arg(long)]
    out: Option<String>,
    /// Scan start
    #[arg(long)]
    from: Option<String>,
    /// Scan end
    #[arg(long)]
    to: Option<String>,
    /// Scan step
    #[arg(long)]
    step: Option<String>,
    /// Half distance between the two atoms in a scan
    #[arg(long)]
    offset: Option<String>,
    /// Escape target: E1, C12 or Center
    #[arg(long)]
    target: Option<String>,
    /// Escape start distance
    #[arg(long)]
    start: Option<String>,
}

impl Flags {
    fn entries(self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("dist", self.dist),
            ("x0", self.x0),
            ("steps", self.steps),
            ("eps", self.eps),
            ("dwell", self.dwell),
            ("trials", self.trials),
            ("grid", self.grid),
            ("seed", self.seed),
            ("threads", self.threads),
            ("out", self.out),
            ("from", self.from),
            ("to", self.to),
            ("step", self.step),
            ("offset", self.offset),
            ("target", self.target),
            ("start", self.start),
        ]
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let (command, flags) = match cli.command {
        Sub::Simulate(f) => (Command::Simulate, f),
        Sub::Classify(f) => (Command::Classify, f),
        Sub::Scan(f) => (Command::Scan, f),
        Sub::Basin(f) => (Command::Basin, f),
        Sub::Escape(f) => (Command::Escape, f),
        Sub::NormalformCheck(f) => (Command::NormalformCheck, f),
    };
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    for (key, value) in flags.entries() {
        if let Some(v) = value {
            if !command.keys().contains(&key) {
                return Err(CliError::Config(format!("--{key} is not used by {}", command.name())));
            }
            cfg.set(key, v);
        }
    }

    let output = match cfg.get::<usize>("threads")? {
        Some(0) => return Err(CliError::Config("threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?
            .install(|| command.run(&mut cfg))?,
        None => command.run(&mut cfg)?,
    };

    if let Some(text) = &output.report {
        eprint!("{text}");
    }
    match cfg.raw("out") {
        Some(path) => {
            fs::write(path, &output.csv).map_err(|e| CliError::Config(format!("cannot write {path}: {e}")))?
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(output.csv.as_bytes()).map_err(|e| CliError::Internal(e.to_string()))?;
        }
    }
    Ok(!output.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more checks failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("cubic-rds: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
