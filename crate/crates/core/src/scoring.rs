//! Tennis scoring state machine.
//!
//! [`ScoreState`] is a plain value: [`ScoreState::apply_point`] returns the
//! next state and leaves its receiver untouched. Standard ad scoring is used
//! throughout; sets are decided by a tiebreak at `tiebreak_at` games all,
//! except in the final set when `final_set_tiebreak` is off, where play
//! continues until one player leads by two games.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the two players of a singles match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PlayerId {
    #[serde(rename = "p1")]
    P1,
    #[serde(rename = "p2")]
    P2,
}

impl PlayerId {
    pub const BOTH: [PlayerId; 2] = [PlayerId::P1, PlayerId::P2];

    pub fn opponent(self) -> PlayerId {
        match self {
            PlayerId::P1 => PlayerId::P2,
            PlayerId::P2 => PlayerId::P1,
        }
    }

    /// Zero-based index for per-player arrays.
    pub fn index(self) -> usize {
        match self {
            PlayerId::P1 => 0,
            PlayerId::P2 => 1,
        }
    }

    /// The 1-based number used in point logs.
    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_number(n: u64) -> Option<PlayerId> {
        match n {
            1 => Some(PlayerId::P1),
            2 => Some(PlayerId::P2),
            _ => None,
        }
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("match is already over")]
    MatchAlreadyOver,
    #[error("invalid match format: {0}")]
    InvalidFormat(&'static str),
}

/// Match format parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatchFormat {
    /// 2 for best-of-3, 3 for best-of-5.
    pub sets_to_win: u32,
    pub games_per_set: u32,
    /// Games-all score at which a tiebreak is played.
    pub tiebreak_at: u32,
    pub tiebreak_points: u32,
    pub final_set_tiebreak: bool,
}

impl MatchFormat {
    pub fn best_of_3() -> Self {
        Self {
            sets_to_win: 2,
            ..Self::best_of_5()
        }
    }

    pub fn best_of_5() -> Self {
        Self {
            sets_to_win: 3,
            games_per_set: 6,
            tiebreak_at: 6,
            tiebreak_points: 7,
            final_set_tiebreak: true,
        }
    }

    /// Format for a best-of-`n` match, `n` being 3 or 5.
    pub fn best_of(n: u32) -> Result<Self, ScoreError> {
        match n {
            3 => Ok(Self::best_of_3()),
            5 => Ok(Self::best_of_5()),
            _ => Err(ScoreError::InvalidFormat("best-of must be 3 or 5")),
        }
    }

    pub fn validate(&self) -> Result<(), ScoreError> {
        if !(2..=3).contains(&self.sets_to_win) {
            return Err(ScoreError::InvalidFormat("sets_to_win must be 2 or 3"));
        }
        if self.games_per_set == 0 {
            return Err(ScoreError::InvalidFormat(
                "games_per_set must be at least 1",
            ));
        }
        if self.tiebreak_at == 0 {
            return Err(ScoreError::InvalidFormat("tiebreak_at must be at least 1"));
        }
        if self.tiebreak_points == 0 {
            return Err(ScoreError::InvalidFormat(
                "tiebreak_points must be at least 1",
            ));
        }
        Ok(())
    }
}

impl Default for MatchFormat {
    fn default() -> Self {
        Self::best_of_5()
    }
}

/// Full score of a match in progress.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScoreState {
    pub points_in_game: [u32; 2],
    pub games_in_set: [u32; 2],
    pub sets_won: [u32; 2],
    pub in_tiebreak: bool,
    pub tiebreak_points: [u32; 2],
    pub server: PlayerId,
    /// Points played since the start of the match.
    pub total_points_played: u32,
    pub winner: Option<PlayerId>,
}

impl ScoreState {
    pub fn new(_format: &MatchFormat, first_server: PlayerId) -> Self {
        Self {
            points_in_game: [0; 2],
            games_in_set: [0; 2],
            sets_won: [0; 2],
            in_tiebreak: false,
            tiebreak_points: [0; 2],
            server: first_server,
            total_points_played: 0,
            winner: None,
        }
    }

    pub fn is_over(&self) -> Option<PlayerId> {
        self.winner
    }

    /// 1-based number of the set in progress (or the last set once over).
    pub fn set_number(&self) -> u32 {
        let played = self.sets_won[0] + self.sets_won[1];
        if self.winner.is_some() {
            played
        } else {
            played + 1
        }
    }

    pub fn is_final_set(&self, format: &MatchFormat) -> bool {
        self.sets_won[0] + self.sets_won[1] == 2 * (format.sets_to_win - 1)
    }

    /// Returns the state after `point_winner` takes the next point.
    pub fn apply_point(
        &self,
        point_winner: PlayerId,
        format: &MatchFormat,
    ) -> Result<ScoreState, ScoreError> {
        if self.winner.is_some() {
            return Err(ScoreError::MatchAlreadyOver);
        }
        let w = point_winner.index();
        let l = point_winner.opponent().index();
        let mut next = *self;
        next.total_points_played += 1;

        if self.in_tiebreak {
            let played_before = self.tiebreak_points[0] + self.tiebreak_points[1];
            let first_server = tiebreak_first_server(self.server, played_before);
            next.tiebreak_points[w] += 1;
            let (won, lost) = (next.tiebreak_points[w], next.tiebreak_points[l]);
            if won >= format.tiebreak_points && won >= lost + 2 {
                next.in_tiebreak = false;
                next.tiebreak_points = [0; 2];
                next.games_in_set[w] += 1;
                next.server = first_server.opponent();
                next.finish_set(point_winner, format);
            } else {
                next.server = tiebreak_server(first_server, played_before + 1);
            }
            return Ok(next);
        }

        next.points_in_game[w] += 1;
        let (won, lost) = (next.points_in_game[w], next.points_in_game[l]);
        if won >= 4 && won >= lost + 2 {
            next.points_in_game = [0; 2];
            next.games_in_set[w] += 1;
            next.server = self.server.opponent();
            let (gw, gl) = (next.games_in_set[w], next.games_in_set[l]);
            if gw >= format.games_per_set && gw >= gl + 2 {
                next.finish_set(point_winner, format);
            } else if gw == format.tiebreak_at
                && gl == format.tiebreak_at
                && (format.final_set_tiebreak || !next.is_final_set(format))
            {
                next.in_tiebreak = true;
            }
        }
        Ok(next)
    }

    fn finish_set(&mut self, set_winner: PlayerId, format: &MatchFormat) {
        self.games_in_set = [0; 2];
        self.sets_won[set_winner.index()] += 1;
        if self.sets_won[set_winner.index()] == format.sets_to_win {
            self.winner = Some(set_winner);
        }
    }
}

/// Server of tiebreak point `index` (0-based): the first server takes one
/// point, then serve changes every two points.
fn tiebreak_server(first_server: PlayerId, index: u32) -> PlayerId {
    if index.div_ceil(2).is_multiple_of(2) {
        first_server
    } else {
        first_server.opponent()
    }
}

fn tiebreak_first_server(current_server: PlayerId, played: u32) -> PlayerId {
    if played.div_ceil(2).is_multiple_of(2) {
        current_server
    } else {
        current_server.opponent()
    }
}

/// Functional form of [`ScoreState::new`].
pub fn initial_state(format: &MatchFormat, first_server: PlayerId) -> ScoreState {
    ScoreState::new(format, first_server)
}

/// Functional form of [`ScoreState::apply_point`].
pub fn apply_point(
    state: &ScoreState,
    point_winner: PlayerId,
    format: &MatchFormat,
) -> Result<ScoreState, ScoreError> {
    state.apply_point(point_winner, format)
}

pub fn is_over(state: &ScoreState) -> Option<PlayerId> {
    state.is_over()
}
