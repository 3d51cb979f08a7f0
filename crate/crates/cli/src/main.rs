//! Command-line surface: scenario simulation, detector calibration,
//! initial-condition checks, stability-block diagnostics and side-by-side
//! attack comparisons.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::ConfigSource;

#[derive(Debug)]
pub enum CliError {
    /// Invalid or missing configuration (exit 2).
    Config(String),
    /// Filesystem problems (exit 3).
    Io(String),
    /// Eigendecomposition failure in check-ic (exit 4).
    Decomposition(String),
    /// Matrix property violation in omega (exit 5).
    MatrixProperty(String),
    /// Simulation/analysis failure (exit 1).
    Run(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Run(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Decomposition(_) => 4,
            CliError::MatrixProperty(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m)
            | CliError::Io(m)
            | CliError::Decomposition(m)
            | CliError::MatrixProperty(m)
            | CliError::Run(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "polesim",
    about = "Simulate and analyze networked control loops under stealthy sensor attacks",
    version
)]
struct Cli {
    /// Directory for emitted CSV files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Suppress timestamps in reports (for reproducible output).
    #[arg(long, global = true)]
    no_timestamps: bool,
    /// Override the noise seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SourceArgs {
    /// JSON scenario file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in scenario name (see `presets` in the docs).
    #[arg(long)]
    preset: Option<String>,
}

impl SourceArgs {
    fn resolve(&self) -> Result<(config::ScenarioFile, String), CliError> {
        match (&self.config, &self.preset) {
            (Some(path), None) => {
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "scenario".into());
                Ok((config::load_scenario_file(path)?, label))
            }
            (None, Some(name)) => {
                let file: config::ScenarioFile =
                    serde_json::from_value(serde_json::json!({ "preset": name }))
                        .map_err(|e| CliError::Config(e.to_string()))?;
                Ok((file, name.clone()))
            }
            _ => Err(CliError::Config("give exactly one of --config or --preset".into())),
        }
    }

    fn source(&self) -> Result<ConfigSource, CliError> {
        match (&self.config, &self.preset) {
            (Some(path), None) => Ok(ConfigSource::Path(path.clone())),
            (None, Some(name)) => Ok(ConfigSource::Preset(name.clone())),
            _ => Err(CliError::Config("give exactly one of --config or --preset".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one closed-loop scenario and emit the trace CSV.
    Simulate(SourceArgs),
    /// Attack-free threshold calibration (mean + 3 std of residual suprema).
    Calibrate {
        #[command(flatten)]
        source: SourceArgs,
        /// Number of attack-free runs.
        #[arg(long)]
        runs: Option<usize>,
    },
    /// Eigenstructure initial-condition convergence check.
    CheckIc(SourceArgs),
    /// Assemble the sampled-data stability block matrix and test definiteness.
    Omega(SourceArgs),
    /// Run several attacks against the identical scenario and tabulate.
    Compare(SourceArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    std::fs::create_dir_all(&cli.out_dir)
        .map_err(|e| CliError::Io(format!("cannot create out dir: {e}")))?;
    match &cli.command {
        Command::Simulate(src) => {
            let (file, label) = src.resolve()?;
            let mut resolved = config::resolve_scenario(&file, &label)?;
            if let Some(seed) = cli.seed {
                resolved.scenario.noise.seed = seed;
            }
            commands::cmd_simulate(resolved, &cli.out_dir, cli.no_timestamps)
        }
        Command::Calibrate { source, runs } => {
            let (file, label) = source.resolve()?;
            let mut resolved = config::resolve_scenario(&file, &label)?;
            if let Some(seed) = cli.seed {
                resolved.scenario.noise.seed = seed;
            }
            commands::cmd_calibrate(resolved, *runs, &cli.out_dir, cli.no_timestamps)
        }
        Command::CheckIc(src) => commands::cmd_check_ic(src.source()?, cli.no_timestamps),
        Command::Omega(src) => commands::cmd_omega(src.source()?, cli.no_timestamps),
        Command::Compare(src) => {
            let (file, label) = src.resolve()?;
            let mut resolved = config::resolve_scenario(&file, &label)?;
            if let Some(seed) = cli.seed {
                resolved.scenario.noise.seed = seed;
            }
            commands::cmd_compare(resolved, &cli.out_dir, cli.no_timestamps)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
