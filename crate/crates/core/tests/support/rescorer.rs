//! Whole-sequence tennis rescorer used as a test oracle.
//!
//! It shares no code with the incremental state machine: the score after a
//! prefix is recomputed from scratch by walking sets, then games, then points.
//! Regular games alternate servers across the whole match (a tiebreak counts
//! as one game), and inside a tiebreak the game's server takes the first
//! point, then serve changes every two points.

use tmm_core::{MatchFormat, PlayerId, ScoreState};

fn other(p: PlayerId) -> PlayerId {
    if p == PlayerId::P1 {
        PlayerId::P2
    } else {
        PlayerId::P1
    }
}

fn idx(p: PlayerId) -> usize {
    if p == PlayerId::P1 {
        0
    } else {
        1
    }
}

fn tiebreak_point_server(game_server: PlayerId, played: u32) -> PlayerId {
    if played == 0 {
        return game_server;
    }
    // Points 1-2 by the receiver, 3-4 by the game server, and so on.
    if ((played - 1) / 2).is_multiple_of(2) {
        other(game_server)
    } else {
        game_server
    }
}

/// Score after the given point winners, starting with `first` serving. The
/// sequence must not run past the end of the match.
pub fn rescore(winners: &[PlayerId], format: &MatchFormat, first: PlayerId) -> ScoreState {
    let mut state = ScoreState {
        points_in_game: [0, 0],
        games_in_set: [0, 0],
        sets_won: [0, 0],
        in_tiebreak: false,
        tiebreak_points: [0, 0],
        server: first,
        total_points_played: winners.len() as u32,
        winner: None,
    };
    let mut pos = 0usize;
    let mut games_played = 0u32;
    let mut sets = [0u32, 0u32];

    loop {
        let mut games = [0u32, 0u32];
        loop {
            let final_set = sets[0] + sets[1] + 1 == 2 * format.sets_to_win - 1;
            let tiebreak = games[0] == format.tiebreak_at
                && games[1] == format.tiebreak_at
                && (format.final_set_tiebreak || !final_set);
            let game_server = if games_played.is_multiple_of(2) {
                first
            } else {
                other(first)
            };
            let target = if tiebreak { format.tiebreak_points } else { 4 };

            let mut points = [0u32, 0u32];
            let mut game_over = None;
            while game_over.is_none() {
                if pos == winners.len() {
                    state.games_in_set = games;
                    state.sets_won = sets;
                    state.in_tiebreak = tiebreak;
                    if tiebreak {
                        state.tiebreak_points = points;
                        state.server = tiebreak_point_server(game_server, points[0] + points[1]);
                    } else {
                        state.points_in_game = points;
                        state.server = game_server;
                    }
                    return state;
                }
                let w = winners[pos];
                pos += 1;
                points[idx(w)] += 1;
                let (a, b) = (points[idx(w)], points[idx(other(w))]);
                if a >= target && a - b >= 2 {
                    game_over = Some(w);
                }
            }
            let w = game_over.unwrap();
            games[idx(w)] += 1;
            games_played += 1;
            let (a, b) = (games[idx(w)], games[idx(other(w))]);
            let set_over = tiebreak || (a >= format.games_per_set && a - b >= 2);
            if set_over {
                sets[idx(w)] += 1;
                if sets[idx(w)] == format.sets_to_win {
                    assert_eq!(pos, winners.len(), "points after the end of the match");
                    state.sets_won = sets;
                    state.winner = Some(w);
                    state.server = if games_played.is_multiple_of(2) {
                        first
                    } else {
                        other(first)
                    };
                    return state;
                }
                break;
            }
        }
    }
}
