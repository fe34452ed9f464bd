//! Command-line front end: `run`, `generate` and `evaluate`.
//!
//! Exit codes: 0 success, 1 output I/O failure, 2 bad flags or invalid
//! spec/coords, 3 input format errors, 4 run finished with an empty archive,
//! 5 overlapping planted regions.

pub mod commands;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;
use triea::{SlopeMode, Weights};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("no tricluster passed the LSL threshold; archive is empty")]
    EmptyArchive,
    #[error("{0}")]
    Overlap(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::EmptyArchive => 4,
            CliError::Overlap(_) => 5,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "triea", version, about = "Evolutionary triclustering of 3D gene expression data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine triclusters from a long-format CSV
    Run(RunArgs),
    /// Write a synthetic tensor with planted triclusters
    Generate(GenerateArgs),
    /// Score one tricluster and print its fitness breakdown as JSON
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct WeightArgs {
    /// Size weight for genes
    #[arg(long, default_value_t = 0.1)]
    pub wg: f64,
    /// Size weight for conditions
    #[arg(long, default_value_t = 0.1)]
    pub wc: f64,
    /// Size weight for time points
    #[arg(long, default_value_t = 0.1)]
    pub wt: f64,
    /// Distinction weight for genes
    #[arg(long, default_value_t = 0.1)]
    pub wdg: f64,
    /// Distinction weight for conditions
    #[arg(long, default_value_t = 0.1)]
    pub wdc: f64,
    /// Distinction weight for time points
    #[arg(long, default_value_t = 0.1)]
    pub wdt: f64,
}

impl WeightArgs {
    pub fn weights(&self) -> Weights {
        Weights { w_g: self.wg, w_c: self.wc, w_t: self.wt, wd_g: self.wdg, wd_c: self.wdc, wd_t: self.wdt }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// CSV with header `gene,condition,time,value`
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, env = "TRIEA_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Population size
    #[arg(long, default_value_t = 20)]
    pub pop: usize,
    #[arg(long, default_value_t = 100)]
    pub generations: usize,
    /// Crossover probability
    #[arg(long, default_value_t = 0.95)]
    pub pc: f64,
    /// Per-individual mutation probability
    #[arg(long, default_value_t = 0.50)]
    pub pm: f64,
    #[command(flatten)]
    pub weights: WeightArgs,
    /// LSL threshold for archiving a run's best tricluster
    #[arg(long, default_value_t = 1050.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 20)]
    pub n_triclusters: usize,
    #[arg(long, default_value_t = 1)]
    pub elite_count: usize,
    #[arg(long, default_value_t = SlopeMode::Ols)]
    pub slope_mode: SlopeMode,
    /// Keep only the first N genes in file order
    #[arg(long)]
    pub genes_limit: Option<usize>,
    #[arg(long, default_value = "triea_out")]
    pub out: PathBuf,
    /// Skip min-max normalization (missing cells are still imputed)
    #[arg(long)]
    pub no_normalize: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    /// JSON synthetic spec
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// JSON object with `genes`, `conditions` and `times` index lists
    #[arg(long)]
    pub coords: PathBuf,
    /// `triclusters.json` from a previous run, used for the distinction term
    #[arg(long)]
    pub archive: Option<PathBuf>,
    #[arg(long, default_value_t = SlopeMode::Ols)]
    pub slope_mode: SlopeMode,
    #[command(flatten)]
    pub weights: WeightArgs,
    /// Min-max normalize before scoring
    #[arg(long)]
    pub normalize: bool,
    /// Seed for imputing missing cells
    #[arg(long, env = "TRIEA_SEED", default_value_t = 0)]
    pub seed: u64,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    execute(cli)
}

pub fn execute(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Run(args) => commands::cmd_run(&args).and_then(|summary| {
            eprintln!("archived {} of {} triclusters in {}", summary.archived, summary.runs, args.out.display());
            if summary.archived == 0 {
                Err(CliError::EmptyArchive)
            } else {
                Ok(())
            }
        }),
        Command::Generate(args) => commands::cmd_generate(&args).map(|_| ()),
        Command::Evaluate(args) => commands::cmd_evaluate(&args).and_then(|b| {
            let json = serde_json::to_string(&b).map_err(|e| CliError::Io(e.to_string()))?;
            println!("{json}");
            Ok(())
        }),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}: {e}", if e.exit_code() == 4 { "warning" } else { "error" });
            e.exit_code()
        }
    }
}
