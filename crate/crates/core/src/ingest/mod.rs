//! Point logs and player histories.
//!
//! Point logs are CSV files with one row per point (see [`RawPointRow`]);
//! histories are TOML documents (see [`ProfileFile`]).

mod points;
mod profile;

pub use points::{parse_points_csv, write_points_csv, RawPointRow, REQUIRED_COLUMNS};
pub use profile::{derive_profile, summarize_match, PlayerHistory, PriorMatch, ProfileFile};

use thiserror::Error;

use crate::momentum::PointRecord;
use crate::scoring::{MatchFormat, PlayerId, ScoreError, ScoreState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IngestError {
    #[error("missing column(s): {}", .0.join(", "))]
    MissingColumn(Vec<String>),
    #[error("line {line}, column `{column}`: {reason} (got `{value}`)")]
    ParseError {
        line: u64,
        column: String,
        value: String,
        reason: String,
    },
    #[error("line {line}: malformed CSV: {message}")]
    Csv { line: u64, message: String },
    #[error("point {index}: rows are not ordered by (set_no, game_no, point_no)")]
    NonMonotonicOrder { index: usize },
    #[error("point {index}: match id `{found}` differs from `{expected}`")]
    MixedMatches {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("point {index}: server recorded as {found} but {expected} is due to serve")]
    InconsistentServer {
        index: usize,
        expected: PlayerId,
        found: PlayerId,
    },
    #[error("point {index}: the match was already over")]
    PointsAfterMatchEnd { index: usize },
    #[error("profile `{0}` has no prior matches")]
    NoHistory(String),
    #[error("invalid profile file: {0}")]
    Profile(String),
    #[error(transparent)]
    Format(#[from] ScoreError),
}

/// How [`to_point_records_with`] treats server fields that disagree with the
/// scoring state machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Validation {
    #[default]
    Strict,
    /// Replace the recorded server with the expected one and log a [`Repair`].
    Lenient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Repair {
    pub index: usize,
    pub recorded: PlayerId,
    pub corrected: PlayerId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub points: Vec<PointRecord>,
    pub repairs: Vec<Repair>,
}

/// Converts a validated row to a point. The log counts the serve as a shot;
/// the model counts rallies after it, so `k = rally_count - 1`, and aces are
/// forced to `k = 0`.
pub fn point_from_row(row: &RawPointRow) -> PointRecord {
    let server = PlayerId::from_number(row.server.into()).expect("validated server");
    let point_winner = PlayerId::from_number(row.point_victor.into()).expect("validated victor");
    PointRecord {
        server,
        point_winner,
        rally_count: if row.ace {
            0
        } else {
            row.rally_count.saturating_sub(1)
        },
        is_ace: row.ace,
        is_double_fault: row.double_fault,
    }
}

/// Strict conversion of parsed rows into points, replaying them through the
/// scoring state machine.
pub fn to_point_records(
    rows: &[RawPointRow],
    format: &MatchFormat,
) -> Result<Vec<PointRecord>, IngestError> {
    to_point_records_with(rows, format, Validation::Strict).map(|n| n.points)
}

pub fn to_point_records_with(
    rows: &[RawPointRow],
    format: &MatchFormat,
    validation: Validation,
) -> Result<Normalized, IngestError> {
    format.validate()?;
    let mut points = Vec::with_capacity(rows.len());
    let mut repairs = Vec::new();
    let Some(first) = rows.first() else {
        return Ok(Normalized { points, repairs });
    };

    let mut score = ScoreState::new(format, point_from_row(first).server);
    for (index, row) in rows.iter().enumerate() {
        if row.match_id != first.match_id {
            return Err(IngestError::MixedMatches {
                index,
                expected: first.match_id.clone(),
                found: row.match_id.clone(),
            });
        }
        if index > 0 && row.order_key() <= rows[index - 1].order_key() {
            return Err(IngestError::NonMonotonicOrder { index });
        }
        if score.winner.is_some() {
            return Err(IngestError::PointsAfterMatchEnd { index });
        }
        let mut point = point_from_row(row);
        if point.server != score.server {
            match validation {
                Validation::Strict => {
                    return Err(IngestError::InconsistentServer {
                        index,
                        expected: score.server,
                        found: point.server,
                    })
                }
                Validation::Lenient => {
                    repairs.push(Repair {
                        index,
                        recorded: point.server,
                        corrected: score.server,
                    });
                    point = repair_server(point, score.server);
                }
            }
        }
        score = score.apply_point(point.point_winner, format)?;
        points.push(point);
    }
    Ok(Normalized { points, repairs })
}

/// Swaps the server while keeping the point winner. Ace and double-fault
/// flags only make sense relative to the recorded server, so they are dropped
/// when they no longer fit.
fn repair_server(point: PointRecord, server: PlayerId) -> PointRecord {
    PointRecord {
        server,
        is_ace: point.is_ace && point.point_winner == server,
        is_double_fault: point.is_double_fault && point.point_winner != server,
        ..point
    }
}
