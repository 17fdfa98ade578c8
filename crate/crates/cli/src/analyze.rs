use std::fs;
use std::path::PathBuf;

use clap::Args;
use tmm_core::ingest::{
    derive_profile, parse_points_csv, to_point_records_with, IngestError, ProfileFile, Validation,
};
use tmm_core::momentum::{replay_match, ModelError};
use tmm_core::{MatchFormat, ModelConfig64, MomentumSample64, PlayerProfile};

use crate::error::CliError;
use crate::options::{FormatArgs, ModelArgs};
use crate::output::write_atomic;
use crate::{series, svg};

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Point log (CSV)
    pub points: PathBuf,
    /// Prior-match histories of both players (TOML)
    pub profile: PathBuf,
    /// Series file to write
    #[arg(short, long)]
    pub out: PathBuf,
    /// Also write line charts to this SVG file
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    /// Correct server fields that disagree with the scoring rules instead of failing
    #[arg(long)]
    pub lenient: bool,
    #[command(flatten)]
    pub format: FormatArgs,
    #[command(flatten)]
    pub model: ModelArgs,
}

pub fn load_profiles(path: &std::path::Path) -> Result<[PlayerProfile; 2], CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Profile(format!("reading {}: {e}", path.display())))?;
    ProfileFile::from_toml(&text)
        .and_then(|file| derive_profile(&file))
        .map_err(|e| CliError::Profile(format!("{}: {e}", path.display())))
}

/// Parses, validates and replays a point log.
pub fn replay_file(
    points: &std::path::Path,
    profiles: &[PlayerProfile; 2],
    format: &MatchFormat,
    config: &ModelConfig64,
    validation: Validation,
) -> Result<Vec<MomentumSample64>, CliError> {
    let input = |e: IngestError| CliError::Input(format!("{}: {e}", points.display()));
    let file = fs::File::open(points)
        .map_err(|e| CliError::io(format!("reading {}", points.display()), e))?;
    let rows = parse_points_csv(std::io::BufReader::new(file)).map_err(input)?;
    let normalized = to_point_records_with(&rows, format, validation).map_err(input)?;
    for repair in &normalized.repairs {
        tracing::warn!(
            "point {}: server recorded as {}, corrected to {}",
            repair.index,
            repair.recorded,
            repair.corrected
        );
    }
    replay_match(&normalized.points, profiles, format, config).map_err(|e| match e.source {
        ModelError::NoHistory(_)
        | ModelError::InvalidEPoints(_)
        | ModelError::InvalidProfile(_) => CliError::Profile(e.to_string()),
        _ => CliError::Input(format!("{}: {e}", points.display())),
    })
}

pub fn run(args: &AnalyzeArgs) -> Result<Vec<MomentumSample64>, CliError> {
    let format = args.format.resolve()?;
    let config = args.model.resolve()?;
    let profiles = load_profiles(&args.profile)?;
    let validation = if args.lenient {
        Validation::Lenient
    } else {
        Validation::Strict
    };
    let samples = replay_file(&args.points, &profiles, &format, &config, validation)?;
    write_atomic(&args.out, series::render(&samples).as_bytes())?;
    if let Some(path) = &args.svg {
        let labels = [profiles[0].label.as_str(), profiles[1].label.as_str()];
        write_atomic(path, svg::render(&samples, labels).as_bytes())?;
    }
    Ok(samples)
}
