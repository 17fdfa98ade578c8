#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tmm_core::ingest::{write_points_csv, RawPointRow};
use tmm_core::{MatchFormat, PlayerId, PlayerProfile, PointRecord, ScoreState};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn tmm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmm"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

pub fn profiles() -> [PlayerProfile; 2] {
    [
        PlayerProfile::new("A", 420, 640, 112.0).unwrap(),
        PlayerProfile::new("B", 380, 610, 108.0).unwrap(),
    ]
}

/// One generated point: whether the server wins, shots after the serve, and
/// a selector for ace / double fault.
pub type Draw = (bool, u8, u8);

/// Turns draws into a legal point sequence, taking servers from the scoring
/// rules and stopping at the end of the match.
pub fn points_from(draws: &[Draw], format: &MatchFormat, first: PlayerId) -> Vec<PointRecord> {
    let mut score = ScoreState::new(format, first);
    let mut points = Vec::new();
    for &(server_wins, k, kind) in draws {
        if score.is_over().is_some() {
            break;
        }
        let server = score.server;
        let point = match (server_wins, kind % 8) {
            (true, 0) => PointRecord::ace(server),
            (false, 0) => PointRecord::double_fault(server),
            (true, _) => PointRecord::rally(server, server, u32::from(k % 20).max(1)),
            (false, _) => PointRecord::rally(server, server.opponent(), u32::from(k % 20)),
        };
        score = score.apply_point(point.point_winner, format).unwrap();
        points.push(point);
    }
    points
}

/// Point log rows for `points`, using the log's rally convention.
pub fn rows_for(points: &[PointRecord]) -> Vec<RawPointRow> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| RawPointRow {
            match_id: "m".into(),
            set_no: 1,
            game_no: 1,
            point_no: i as u32 + 1,
            server: p.server.number(),
            point_victor: p.point_winner.number(),
            rally_count: p.rally_count + 1,
            ace: p.is_ace,
            double_fault: p.is_double_fault,
            player1: None,
            player2: None,
        })
        .collect()
}

pub fn write_log(path: &Path, points: &[PointRecord]) {
    let file = std::fs::File::create(path).unwrap();
    write_points_csv(&rows_for(points), file).unwrap();
}

/// JSON `point` object for the live protocol.
pub fn point_json(p: &PointRecord) -> serde_json::Value {
    serde_json::json!({
        "server": p.server.number(),
        "winner": p.point_winner.number(),
        "rally_count": p.rally_count + 1,
        "ace": p.is_ace,
        "double_fault": p.is_double_fault,
    })
}

pub fn start_json(profiles: &[PlayerProfile; 2], format: &MatchFormat) -> String {
    serde_json::json!({
        "type": "start_session",
        "profiles": {"player1": profiles[0], "player2": profiles[1]},
        "format": format,
    })
    .to_string()
}

pub fn record_json(p: &PointRecord) -> String {
    serde_json::json!({"type": "record_point", "point": point_json(p)}).to_string()
}
