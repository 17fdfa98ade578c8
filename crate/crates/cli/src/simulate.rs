use std::fmt::Write;
use std::fs;
use std::path::PathBuf;

use clap::Args;
use tmm_core::simulator::{implied_profiles, run_experiment, SimConfig, SimError, SimReport};

use crate::analyze::load_profiles;
use crate::error::CliError;
use crate::options::ModelArgs;
use crate::output::write_atomic;

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Experiment configuration (TOML)
    pub sim_config: PathBuf,
    /// Report file to write (TOML)
    #[arg(short, long)]
    pub out: PathBuf,
    /// Master seed, overriding the one in the configuration
    #[arg(long)]
    pub seed: Option<u64>,
    /// Player histories used by the momentum model; by default they are
    /// implied by the configured serve probabilities
    #[arg(long, value_name = "FILE")]
    pub profiles: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
}

fn config_error(e: SimError) -> CliError {
    match e {
        SimError::InvalidConfig { field, reason } => CliError::Input(format!("{field}: {reason}")),
        SimError::AllStalled { .. } => CliError::Stalled(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

pub fn run(args: &SimulateArgs) -> Result<SimReport, CliError> {
    let text = fs::read_to_string(&args.sim_config)
        .map_err(|e| CliError::io(format!("reading {}", args.sim_config.display()), e))?;
    let mut config = SimConfig::from_toml(&text).map_err(config_error)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let model = args.model.resolve()?;
    let profiles = match &args.profiles {
        Some(path) => load_profiles(path)?,
        None => implied_profiles(&config).map_err(config_error)?,
    };
    let report = run_experiment(&config, &model, &profiles).map_err(config_error)?;
    write_atomic(&args.out, report.to_toml().as_bytes())?;
    Ok(report)
}

pub fn summary(report: &SimReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "replications {}  completed {}  stalled {}  seed {:016x}",
        report.replications,
        report.completed,
        report.stalled.len(),
        report.master_seed
    )
    .unwrap();
    writeln!(
        out,
        "{:<8} {:>10} {:>10} {:>12} {:>10}",
        "player", "matches", "win rate", "serve pts", "serve win"
    )
    .unwrap();
    for i in 0..2 {
        writeln!(
            out,
            "{:<8} {:>10} {:>10.4} {:>12} {:>10.4}",
            format!("P{}", i + 1),
            report.match_wins[i],
            report.match_win_rate[i],
            report.server_points_played[i],
            report.serve_win_rate[i]
        )
        .unwrap();
    }
    writeln!(
        out,
        "mean points {:.2} (expected {:.2})",
        report.mean_match_points, report.expected_match_points
    )
    .unwrap();
    writeln!(
        out,
        "momentum leader at point {} won {:.4} of matches ({} ties)",
        report.prediction.checkpoint, report.prediction.accuracy, report.prediction.ties
    )
    .unwrap();
    out
}
