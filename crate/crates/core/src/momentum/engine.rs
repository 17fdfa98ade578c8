use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::formulas::{
    efficiency, expected_match_points, historical_prob, instant_prob, long_term_prob,
    scoring_prob_for, short_term_momentum, tmm,
};
use super::{ModelConfig, ModelError, PlayerProfile, PointRecord};
use crate::scoring::{MatchFormat, PlayerId, ScoreState};
use crate::Scalar;

/// In-match serve tallies of one player.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ServeTally {
    pub won: u64,
    pub attempts: u64,
}

/// Running state of the model over one match.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumState<T> {
    pub tallies: [ServeTally; 2],
    pub smoothed_efficiency: [T; 2],
    pub t_points: u32,
    /// Expected match length, fixed at the start of the match.
    pub e_points: T,
}

impl<T: Scalar> MomentumState<T> {
    pub fn new(e_points: T) -> Result<Self, ModelError> {
        if !e_points.is_finite() || e_points <= T::zero() {
            return Err(ModelError::InvalidEPoints(
                e_points.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self {
            tallies: [ServeTally::default(); 2],
            smoothed_efficiency: [T::one(); 2],
            t_points: 0,
            e_points,
        })
    }

    pub fn from_profiles(profiles: &[PlayerProfile; 2]) -> Result<Self, ModelError> {
        Self::new(expected_match_points(&profiles[0], &profiles[1])?)
    }
}

/// Model outputs for one player at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlayerSample<T> {
    pub p_hist: T,
    pub p_inst: T,
    pub p_ltm: T,
    /// Raw efficiency credited on this point, if the player's series moved.
    pub efficiency_raw: Option<T>,
    pub efficiency_smoothed: T,
    pub m_stm: T,
    pub tmm: T,
}

/// Model outputs for both players after one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumSample<T> {
    /// 1-based; equals the number of points played including this one.
    pub point_index: u32,
    pub server: PlayerId,
    pub point_winner: PlayerId,
    pub players: [PlayerSample<T>; 2],
}

impl<T> MomentumSample<T> {
    pub fn player(&self, player: PlayerId) -> &PlayerSample<T> {
        &self.players[player.index()]
    }
}

/// Advances the model by one point.
///
/// The server's in-match tallies take the result, the point winner's
/// efficiency series absorbs `efficiency(rally_count, r)` (on a double fault
/// the server's series absorbs `double_fault_efficiency` instead), and both
/// players' outputs are evaluated at the post-point `T_points`.
pub fn process_point<T: Scalar>(
    state: &MomentumState<T>,
    score: &ScoreState,
    point: &PointRecord,
    profiles: &[PlayerProfile; 2],
    config: &ModelConfig<T>,
) -> Result<(MomentumState<T>, MomentumSample<T>), ModelError> {
    if score.winner.is_some() {
        return Err(crate::scoring::ScoreError::MatchAlreadyOver.into());
    }
    if point.server != score.server {
        return Err(ModelError::ServerMismatch {
            expected: score.server,
            found: point.server,
        });
    }
    point.validate()?;

    let server = point.server;
    let mut next = *state;

    let tally = &mut next.tallies[server.index()];
    tally.attempts += 1;
    if point.point_winner == server {
        tally.won += 1;
    }

    let mut raw = [None; 2];
    let (credited, raw_efficiency) = if point.is_double_fault {
        (server, config.double_fault_efficiency)
    } else {
        (point.point_winner, efficiency(point.rally_count, config.r)?)
    };
    raw[credited.index()] = Some(raw_efficiency);
    let alpha = config.efficiency_smoothing;
    let smoothed = &mut next.smoothed_efficiency[credited.index()];
    *smoothed = alpha * raw_efficiency + (T::one() - alpha) * *smoothed;

    next.t_points += 1;

    let server_hist = historical_prob::<T>(&profiles[server.index()])?;
    let server_inst = instant_prob(&next, server, server_hist, config);

    let mut players = [PlayerSample {
        p_hist: T::zero(),
        p_inst: T::zero(),
        p_ltm: T::zero(),
        efficiency_raw: None,
        efficiency_smoothed: T::zero(),
        m_stm: T::zero(),
        tmm: T::zero(),
    }; 2];
    for player in PlayerId::BOTH {
        let p_hist = scoring_prob_for(player, server, server_hist);
        let p_inst = scoring_prob_for(player, server, server_inst);
        let p_ltm = long_term_prob(
            p_hist,
            p_inst,
            next.t_points,
            next.e_points,
            config.clamp_weight,
        )?;
        let e = next.smoothed_efficiency[player.index()];
        players[player.index()] = PlayerSample {
            p_hist,
            p_inst,
            p_ltm,
            efficiency_raw: raw[player.index()],
            efficiency_smoothed: e,
            m_stm: short_term_momentum(p_hist, e, config),
            tmm: tmm(p_ltm, e),
        };
    }

    let sample = MomentumSample {
        point_index: next.t_points,
        server,
        point_winner: point.point_winner,
        players,
    };
    Ok((next, sample))
}

/// Streaming fold of scoring and model state over a match.
#[derive(Debug, Clone)]
pub struct MatchTracker<T> {
    format: MatchFormat,
    config: ModelConfig<T>,
    profiles: [PlayerProfile; 2],
    score: ScoreState,
    momentum: MomentumState<T>,
}

impl<T: Scalar> MatchTracker<T> {
    pub fn new(
        profiles: [PlayerProfile; 2],
        format: MatchFormat,
        config: ModelConfig<T>,
        first_server: PlayerId,
    ) -> Result<Self, ModelError> {
        format.validate()?;
        config.validate()?;
        for profile in &profiles {
            profile.validate()?;
            historical_prob::<T>(profile)?;
        }
        let momentum = MomentumState::from_profiles(&profiles)?;
        Ok(Self {
            score: ScoreState::new(&format, first_server),
            format,
            config,
            profiles,
            momentum,
        })
    }

    pub fn score(&self) -> &ScoreState {
        &self.score
    }

    pub fn momentum(&self) -> &MomentumState<T> {
        &self.momentum
    }

    pub fn format(&self) -> &MatchFormat {
        &self.format
    }

    pub fn config(&self) -> &ModelConfig<T> {
        &self.config
    }

    pub fn profiles(&self) -> &[PlayerProfile; 2] {
        &self.profiles
    }

    /// Records one point. On error the tracker is left unchanged.
    pub fn push(&mut self, point: &PointRecord) -> Result<MomentumSample<T>, ModelError> {
        let (momentum, sample) = process_point(
            &self.momentum,
            &self.score,
            point,
            &self.profiles,
            &self.config,
        )?;
        let score = self.score.apply_point(point.point_winner, &self.format)?;
        self.momentum = momentum;
        self.score = score;
        Ok(sample)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("point {index}: {source}")]
pub struct ReplayError {
    /// 0-based position of the offending point in the input.
    pub index: usize,
    #[source]
    pub source: ModelError,
}

/// Replays a full point sequence, returning one sample per point.
///
/// The first point's server opens the match.
pub fn replay_match<T: Scalar>(
    points: &[PointRecord],
    profiles: &[PlayerProfile; 2],
    format: &MatchFormat,
    config: &ModelConfig<T>,
) -> Result<Vec<MomentumSample<T>>, ReplayError> {
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let mut tracker = MatchTracker::new(profiles.clone(), *format, *config, first.server)
        .map_err(|source| ReplayError { index: 0, source })?;
    points
        .iter()
        .enumerate()
        .map(|(index, point)| {
            tracker
                .push(point)
                .map_err(|source| ReplayError { index, source })
        })
        .collect()
}
