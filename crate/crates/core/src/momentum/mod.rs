//! The momentum model.
//!
//! Per-point quantities, for a player `x` on a point served by `s`:
//!
//! * historical probability `p_hist`: pooled serve-point win rate from prior
//!   matches; a returner uses the complement of the server's rate.
//! * instant probability `p_inst`: in-match serve-point win rate, shrunk
//!   towards `p_hist` by a Beta prior with `prior_strength` pseudo-attempts.
//! * efficiency `E = 2 - sum_{n=0..k} r^-n` for a point of `k` rallies after
//!   the serve.
//! * long-term probability `p_ltm = (1 - w) p_hist + w p_inst`, with
//!   `w = T_points / E_points`.
//! * momentum `tmm = p_ltm * E`.
//!
//! All of it is generic over [`Scalar`](crate::Scalar).

mod config;
mod engine;
mod formulas;

pub use config::{ModelConfig, StmTransform, DEFAULT_R};
pub use engine::{
    process_point, replay_match, MatchTracker, MomentumSample, MomentumState, PlayerSample,
    ReplayError, ServeTally,
};
pub use formulas::{
    efficiency, expected_match_points, fit_r, historical_prob, instant_prob, long_term_prob,
    mean_efficiency, scoring_prob_for, short_term_momentum, tmm,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scoring::{PlayerId, ScoreError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("profile `{0}` has no serve history")]
    NoHistory(String),
    #[error("efficiency base r must be greater than 1, got {0}")]
    InvalidR(f64),
    #[error("expected match points must be positive, got {0}")]
    InvalidEPoints(f64),
    #[error("target mean efficiency {target} is outside the attainable range ({low}, {high}]")]
    Unachievable { target: f64, low: f64, high: f64 },
    #[error("every rally count is zero, so the mean efficiency is 1 for any r")]
    DegenerateInput,
    #[error("no rally counts to fit")]
    EmptyInput,
    #[error("unknown short-term momentum transform `{0}`")]
    UnknownTransform(String),
    #[error("invalid model config: {0}")]
    InvalidConfig(&'static str),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid point: {0}")]
    InvalidPoint(&'static str),
    #[error("point served by {found} but the score says {expected} is serving")]
    ServerMismatch { expected: PlayerId, found: PlayerId },
    #[error(transparent)]
    Score(#[from] ScoreError),
}

/// Historical aggregates for one player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerProfile {
    pub label: String,
    pub points_won_on_serve: u64,
    pub serve_attempts: u64,
    pub expected_points_per_match: f64,
}

impl PlayerProfile {
    pub fn new(
        label: impl Into<String>,
        points_won_on_serve: u64,
        serve_attempts: u64,
        expected_points_per_match: f64,
    ) -> Result<Self, ModelError> {
        let profile = Self {
            label: label.into(),
            points_won_on_serve,
            serve_attempts,
            expected_points_per_match,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.points_won_on_serve > self.serve_attempts {
            return Err(ModelError::InvalidProfile(format!(
                "{}: {} points won on serve out of {} attempts",
                self.label, self.points_won_on_serve, self.serve_attempts
            )));
        }
        if !(self.expected_points_per_match >= 0.0 && self.expected_points_per_match.is_finite()) {
            return Err(ModelError::InvalidProfile(format!(
                "{}: expected points per match must be a non-negative number",
                self.label
            )));
        }
        Ok(())
    }
}

/// One observed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointRecord {
    pub server: PlayerId,
    pub point_winner: PlayerId,
    /// Exchanges after the serve.
    pub rally_count: u32,
    pub is_ace: bool,
    pub is_double_fault: bool,
}

impl PointRecord {
    pub fn new(
        server: PlayerId,
        point_winner: PlayerId,
        rally_count: u32,
        is_ace: bool,
        is_double_fault: bool,
    ) -> Result<Self, ModelError> {
        let point = Self {
            server,
            point_winner,
            rally_count,
            is_ace,
            is_double_fault,
        };
        point.validate()?;
        Ok(point)
    }

    /// A rally point without ace or double fault.
    pub fn rally(server: PlayerId, point_winner: PlayerId, rally_count: u32) -> Self {
        Self {
            server,
            point_winner,
            rally_count,
            is_ace: false,
            is_double_fault: false,
        }
    }

    pub fn ace(server: PlayerId) -> Self {
        Self {
            server,
            point_winner: server,
            rally_count: 0,
            is_ace: true,
            is_double_fault: false,
        }
    }

    pub fn double_fault(server: PlayerId) -> Self {
        Self {
            server,
            point_winner: server.opponent(),
            rally_count: 0,
            is_ace: false,
            is_double_fault: true,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.is_ace && self.is_double_fault {
            return Err(ModelError::InvalidPoint(
                "a point cannot be both an ace and a double fault",
            ));
        }
        if self.is_ace && self.point_winner != self.server {
            return Err(ModelError::InvalidPoint("an ace must be won by the server"));
        }
        if self.is_ace && self.rally_count != 0 {
            return Err(ModelError::InvalidPoint("an ace has a rally count of 0"));
        }
        if self.is_double_fault && self.point_winner == self.server {
            return Err(ModelError::InvalidPoint(
                "a double fault must be lost by the server",
            ));
        }
        Ok(())
    }
}
