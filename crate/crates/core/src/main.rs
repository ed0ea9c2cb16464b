//! `harmqc` command line: analyze, trace, decompose, sweep.
//!
//! Exit codes: 0 all checks pass, 2 a mathematical check failed (witness
//! emitted in the report), 1 configuration or numeric error.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use harmqc::commands;
use harmqc::config::RunConfig;

#[derive(Parser)]
#[command(
    name = "harmqc",
    about = "Numerical certification for planar harmonic mappings: Schwarzian norms, \
             dilatation bounds, quasicircle checks and annulus decompositions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Key-value run configuration (see README for the grammar).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for report.txt and CSV files.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config grid resolution.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Schwarzian norm, dilatation sup, univalence scan, injectivity check.
    Analyze(Common),
    /// Trace one boundary circle and certify the image curve.
    Trace {
        #[command(flatten)]
        common: Common,
        /// Boundary circle index (outer circle first).
        #[arg(long)]
        circle: Option<usize>,
        /// Trace resolution (the certificate also runs at twice this).
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Three-sector decomposition with covering sweep and piece certificates.
    Decompose(Common),
    /// Parameter sweep over the configured family.
    Sweep(Common),
}

fn load(common: &Common) -> harmqc::Result<RunConfig> {
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(grid) = common.grid {
        cfg.grid = grid;
    }
    Ok(cfg)
}

fn run() -> harmqc::Result<commands::CommandOutcome> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Analyze(common) => {
            let cfg = load(common)?;
            commands::cmd_analyze(&cfg, &common.out)
        }
        Command::Trace {
            common,
            circle,
            samples,
        } => {
            let mut cfg = load(common)?;
            if let Some(circle) = circle {
                cfg.circle = *circle;
            }
            if let Some(samples) = samples {
                cfg.trace_samples = *samples;
            }
            commands::cmd_trace(&cfg, &common.out)
        }
        Command::Decompose(common) => {
            let cfg = load(common)?;
            commands::cmd_decompose(&cfg, &common.out)
        }
        Command::Sweep(common) => {
            let cfg = load(common)?;
            commands::cmd_sweep(&cfg, &common.out)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(outcome) => {
            print!("{}", outcome.report);
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("harmqc: {e}");
            ExitCode::from(1)
        }
    }
}
