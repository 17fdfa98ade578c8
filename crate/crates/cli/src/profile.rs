use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use tmm_core::ingest::{
    derive_profile, parse_points_csv, summarize_match, to_point_records, PlayerHistory,
    ProfileFile, RawPointRow,
};
use tmm_core::PlayerId;

use crate::error::CliError;
use crate::options::FormatArgs;
use crate::output::write_atomic;

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    /// Directory of per-match point logs carrying player1/player2 name columns
    pub matches_dir: PathBuf,
    /// Name of the first player, as written in the logs
    #[arg(long)]
    pub player1: String,
    /// Name of the second player, as written in the logs
    #[arg(long)]
    pub player2: String,
    /// Profile file to write (TOML)
    #[arg(short, long)]
    pub out: PathBuf,
    /// Skip unreadable match files with a warning instead of failing
    #[arg(long)]
    pub lenient: bool,
    #[command(flatten)]
    pub format: FormatArgs,
}

fn load_match(path: &Path, format: &tmm_core::MatchFormat) -> Result<Vec<RawPointRow>, String> {
    let file = fs::File::open(path).map_err(|e| e.to_string())?;
    let rows = parse_points_csv(std::io::BufReader::new(file)).map_err(|e| e.to_string())?;
    to_point_records(&rows, format).map_err(|e| e.to_string())?;
    Ok(rows)
}

fn side_of(rows: &[RawPointRow], name: &str) -> Option<PlayerId> {
    let first = rows.first()?;
    if first.player1.as_deref() == Some(name) {
        Some(PlayerId::P1)
    } else if first.player2.as_deref() == Some(name) {
        Some(PlayerId::P2)
    } else {
        None
    }
}

pub fn build(args: &ProfileArgs) -> Result<ProfileFile, CliError> {
    let format = args.format.resolve()?;
    let entries = fs::read_dir(&args.matches_dir)
        .map_err(|e| CliError::io(format!("reading {}", args.matches_dir.display()), e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv")))
        .collect();
    paths.sort();

    let mut file = ProfileFile {
        player1: PlayerHistory {
            label: args.player1.clone(),
            matches: Vec::new(),
        },
        player2: PlayerHistory {
            label: args.player2.clone(),
            matches: Vec::new(),
        },
    };
    for path in &paths {
        let rows = match load_match(path, &format) {
            Ok(rows) => rows,
            Err(message) if args.lenient => {
                tracing::warn!("skipping {}: {message}", path.display());
                continue;
            }
            Err(message) => return Err(CliError::Input(format!("{}: {message}", path.display()))),
        };
        for history in [&mut file.player1, &mut file.player2] {
            if let Some(side) = side_of(&rows, &history.label) {
                history.matches.push(summarize_match(&rows, side));
            }
        }
    }
    derive_profile(&file).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(file)
}

pub fn run(args: &ProfileArgs) -> Result<ProfileFile, CliError> {
    let file = build(args)?;
    write_atomic(&args.out, file.to_toml().as_bytes())?;
    Ok(file)
}
