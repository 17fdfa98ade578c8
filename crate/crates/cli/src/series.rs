//! Per-point series file.
//!
//! CSV with one row per point and these columns, in order:
//!
//! ```text
//! point_index, server, point_winner,
//! p1_p_hist, p1_p_inst, p1_p_ltm, p1_efficiency_raw, p1_efficiency, p1_m_stm, p1_tmm,
//! p2_p_hist, p2_p_inst, p2_p_ltm, p2_efficiency_raw, p2_efficiency, p2_m_stm, p2_tmm
//! ```
//!
//! Players are written as `1`/`2`. Reals use fixed 6-decimal formatting;
//! `efficiency_raw` is empty on points that did not move that player's
//! efficiency series.

use std::fmt::Write;

use tmm_core::momentum::PlayerSample;
use tmm_core::MomentumSample64;

const PLAYER_FIELDS: [&str; 7] = [
    "p_hist",
    "p_inst",
    "p_ltm",
    "efficiency_raw",
    "efficiency",
    "m_stm",
    "tmm",
];

pub fn header() -> String {
    let mut cols = vec![
        "point_index".to_string(),
        "server".into(),
        "point_winner".into(),
    ];
    for p in ["p1", "p2"] {
        cols.extend(PLAYER_FIELDS.iter().map(|f| format!("{p}_{f}")));
    }
    cols.join(",")
}

fn push_player(line: &mut String, p: &PlayerSample<f64>) {
    for v in [p.p_hist, p.p_inst, p.p_ltm] {
        write!(line, ",{v:.6}").unwrap();
    }
    match p.efficiency_raw {
        Some(v) => write!(line, ",{v:.6}").unwrap(),
        None => line.push(','),
    }
    for v in [p.efficiency_smoothed, p.m_stm, p.tmm] {
        write!(line, ",{v:.6}").unwrap();
    }
}

pub fn row(sample: &MomentumSample64) -> String {
    let mut line = format!(
        "{},{},{}",
        sample.point_index,
        sample.server.number(),
        sample.point_winner.number()
    );
    for p in &sample.players {
        push_player(&mut line, p);
    }
    line
}

/// Renders the whole series file.
pub fn render(samples: &[MomentumSample64]) -> String {
    let mut out = header();
    out.push('\n');
    for s in samples {
        out.push_str(&row(s));
        out.push('\n');
    }
    out
}
