mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Signal-passing tile assembly: generate tile sets, simulate, explore,
/// verify and render.
#[derive(Debug, Parser)]
#[command(name = "stam", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    LinePow2,
    Line,
    LineCounter,
    Tm,
    SierpinskiWeak,
    SierpinskiStrict,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: usize,
    /// Fairness window in steps (0 disables it).
    #[arg(long = "fairness", default_value_t = 1000)]
    pub fairness: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a construction into a JSON tile set.
    Generate {
        construction: Construction,
        /// Exponent for line-pow2.
        #[arg(long)]
        k: Option<u32>,
        /// Length for line and line-counter.
        #[arg(long)]
        n: Option<u64>,
        /// Digit count for line-counter.
        #[arg(long)]
        digits: Option<u32>,
        /// Turing machine description file (or `builtin:<name>`).
        #[arg(long)]
        machine: Option<String>,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Stochastic run; writes a JSONL trace.
    Run {
        system: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustive exploration of the producible assemblies.
    Explore {
        system: PathBuf,
        #[arg(long = "max-size", default_value_t = 16)]
        max_size: usize,
        #[arg(long, default_value_t = 100_000)]
        max_states: usize,
        /// Write the terminal assemblies as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit a Turing machine trace, or run and audit strict Sierpinski.
    Verify {
        /// Machine description file (or `builtin:<name>`).
        #[arg(long, conflicts_with = "strict")]
        tm: Option<String>,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, requires = "tm")]
        trace: Option<PathBuf>,
        #[arg(long)]
        strict: bool,
        /// Side of the block region resolved by the strict run.
        #[arg(long, default_value_t = 8)]
        blocks: i32,
        #[command(flatten)]
        run: RunArgs,
    },
    /// SVG snapshots of a trace's largest assembly.
    Render {
        system: PathBuf,
        trace: PathBuf,
        #[arg(long, default_value_t = 100)]
        snapshot_every: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("STAM_LOG", "warn")).init();
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
