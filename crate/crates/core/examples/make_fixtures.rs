//! Regenerates the bundled fixtures under `fixtures/`.
//!
//! ```text
//! cargo run -p tmm-core --example make_fixtures -- fixtures
//! ```
//!
//! Matches are scripted game by game. Servers come from the scoring state
//! machine, so every log replays cleanly. Each set names a dominant player:
//! that player wins points in short rallies (and aces on serve) while the
//! other player's points come from long rallies.

use std::fs;
use std::path::Path;

use tmm_core::ingest::{write_points_csv, PlayerHistory, PriorMatch, ProfileFile, RawPointRow};
use tmm_core::simulator::{simulate_match_from, SimConfig};
use tmm_core::{MatchFormat, PlayerId, ScoreState};

use PlayerId::{P1, P2};

/// Small deterministic LCG so the fixtures do not depend on any RNG crate.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

struct SetScript {
    /// Game winners in order, `1` or `2`; a trailing tiebreak is given by
    /// `tiebreak`.
    games: &'static str,
    tiebreak: Option<&'static str>,
    dominant: PlayerId,
}

struct Builder {
    format: MatchFormat,
    score: ScoreState,
    rows: Vec<RawPointRow>,
    rng: Lcg,
    match_id: String,
    game_no: u32,
    set_no: u32,
}

impl Builder {
    fn new(match_id: &str, format: MatchFormat, first_server: PlayerId, seed: u64) -> Self {
        Self {
            format,
            score: ScoreState::new(&format, first_server),
            rows: Vec::new(),
            rng: Lcg(seed),
            match_id: match_id.to_string(),
            game_no: 1,
            set_no: 1,
        }
    }

    fn point(&mut self, winner: PlayerId, dominant: PlayerId) {
        let server = self.score.server;
        let (mut rally, mut ace, mut df) = if winner == dominant {
            (1 + self.rng.below(3) as u32, false, false)
        } else {
            (5 + self.rng.below(8) as u32, false, false)
        };
        if winner == dominant && winner == server && self.rng.below(4) == 0 {
            rally = 1;
            ace = true;
        }
        if winner != dominant && winner != server && self.rng.below(6) == 0 {
            // Dominant player donates a double fault now and then.
            rally = 1;
            df = true;
            ace = false;
        }
        if winner == dominant && winner != server && self.rng.below(10) == 0 {
            rally = 1;
            df = true;
        }
        let sets_before = self.score.sets_won[0] + self.score.sets_won[1];
        let games_before = self.score.games_in_set[0] + self.score.games_in_set[1];
        self.rows.push(RawPointRow {
            match_id: self.match_id.clone(),
            set_no: self.set_no,
            game_no: self.game_no,
            point_no: self.rows.len() as u32 + 1,
            server: server.number(),
            point_victor: winner.number(),
            rally_count: rally,
            ace,
            double_fault: df,
            player1: None,
            player2: None,
        });
        self.score = self.score.apply_point(winner, &self.format).unwrap();
        let sets_after = self.score.sets_won[0] + self.score.sets_won[1];
        let games_after = self.score.games_in_set[0] + self.score.games_in_set[1];
        if sets_after != sets_before {
            self.set_no += 1;
            self.game_no = 1;
        } else if games_after != games_before {
            self.game_no += 1;
        }
    }

    fn game(&mut self, winner: PlayerId, dominant: PlayerId) {
        let loser_points = match self.rng.below(8) {
            0 | 1 => 0,
            2 | 3 => 1,
            4 | 5 => 2,
            6 => 3,
            _ => 4,
        };
        let mut sequence = Vec::new();
        if loser_points <= 2 {
            sequence.extend(std::iter::repeat_n(winner, 3));
            for _ in 0..loser_points {
                let at = self.rng.below(sequence.len() as u64 + 1) as usize;
                sequence.insert(at, winner.opponent());
            }
            sequence.push(winner);
        } else {
            // Through deuce: alternate to 3-3, then possibly an advantage lost.
            for _ in 0..3 {
                sequence.push(winner);
                sequence.push(winner.opponent());
            }
            if loser_points == 4 {
                sequence.push(winner.opponent());
                sequence.push(winner);
            }
            sequence.push(winner);
            sequence.push(winner);
        }
        let games = self.score.games_in_set;
        for w in sequence {
            self.point(w, dominant);
        }
        assert_ne!(
            games, self.score.games_in_set,
            "game script did not finish a game"
        );
    }

    fn set(&mut self, script: &SetScript) {
        for c in script.games.chars() {
            let winner = if c == '1' { P1 } else { P2 };
            self.game(winner, script.dominant);
        }
        if let Some(tb) = script.tiebreak {
            assert!(self.score.in_tiebreak, "script expects a tiebreak");
            for c in tb.chars() {
                let winner = if c == '1' { P1 } else { P2 };
                self.point(winner, script.dominant);
            }
        }
    }
}

fn write_csv(path: &Path, rows: &[RawPointRow]) {
    let file = fs::File::create(path).unwrap();
    write_points_csv(rows, file).unwrap();
}

fn history(label: &str, matches: &[(u64, u64, u64)]) -> PlayerHistory {
    PlayerHistory {
        label: label.to_string(),
        matches: matches
            .iter()
            .map(|&(w, a, t)| PriorMatch {
                points_won_on_serve: w,
                serve_attempts: a,
                total_points_in_match: t,
            })
            .collect(),
    }
}

fn main() {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "fixtures".to_string());
    let out = Path::new(&out);
    fs::create_dir_all(out.join("history")).unwrap();

    // Five sets, P1 takes the first and P2 the match.
    let mut swing = Builder::new("swing", MatchFormat::best_of_5(), P2, 2023);
    for script in [
        SetScript {
            games: "1112111",
            tiebreak: None,
            dominant: P1,
        },
        SetScript {
            games: "212121211212",
            tiebreak: Some("2122122212"),
            dominant: P2,
        },
        SetScript {
            games: "2212222",
            tiebreak: None,
            dominant: P2,
        },
        SetScript {
            games: "121121121",
            tiebreak: None,
            dominant: P1,
        },
        SetScript {
            games: "2121212122",
            tiebreak: None,
            dominant: P2,
        },
    ] {
        swing.set(&script);
    }
    assert_eq!(swing.score.winner, Some(P2));
    assert_eq!(swing.score.sets_won, [2, 3]);
    write_csv(&out.join("swing_five_sets.csv"), &swing.rows);

    // Straight sets, 6-3 6-3 6-3 for P1 with P1 dominant throughout.
    let mut sweep = Builder::new("one_sided", MatchFormat::best_of_5(), P1, 714);
    for _ in 0..3 {
        sweep.set(&SetScript {
            games: "121211211",
            tiebreak: None,
            dominant: P1,
        });
    }
    assert_eq!(sweep.score.winner, Some(P1));
    write_csv(&out.join("one_sided_straight_sets.csv"), &sweep.rows);

    let swing_profiles = ProfileFile {
        player1: history(
            "Player One",
            &[(70, 102, 214), (66, 98, 201), (81, 119, 262), (59, 90, 187)],
        ),
        player2: history(
            "Player Two",
            &[(72, 104, 220), (63, 95, 190), (88, 125, 271), (61, 91, 205)],
        ),
    };
    fs::write(out.join("swing_profiles.toml"), swing_profiles.to_toml()).unwrap();

    let sweep_profiles = ProfileFile {
        player1: history("Favourite", &[(75, 104, 188), (68, 95, 172), (71, 99, 180)]),
        player2: history("Underdog", &[(66, 103, 196), (60, 96, 181), (63, 100, 187)]),
    };
    fs::write(
        out.join("one_sided_profiles.toml"),
        sweep_profiles.to_toml(),
    )
    .unwrap();

    // Prior matches for the profile command: four per player, player names
    // in the log columns.
    let opponents = ["Rival A", "Rival B", "Rival C", "Rival D"];
    let config = SimConfig {
        format: MatchFormat::best_of_3(),
        ..SimConfig::new([0.66, 0.62], 1, 0)
    };
    for (n, (name, side)) in [("Player One", P1), ("Player Two", P2)].iter().enumerate() {
        for (m, opponent) in opponents.iter().enumerate() {
            let seed = 1000 + (n * 10 + m) as u64;
            let points = simulate_match_from(&config, seed, if m % 2 == 0 { P1 } else { P2 })
                .expect("finite match");
            let (p1, p2) = match side {
                P1 => (name.to_string(), opponent.to_string()),
                P2 => (opponent.to_string(), name.to_string()),
            };
            let rows: Vec<RawPointRow> = points
                .iter()
                .enumerate()
                .map(|(i, p)| RawPointRow {
                    match_id: format!("prior-{n}-{m}"),
                    set_no: 1,
                    game_no: 1,
                    point_no: i as u32 + 1,
                    server: p.server.number(),
                    point_victor: p.point_winner.number(),
                    rally_count: p.rally_count + 1,
                    ace: p.is_ace,
                    double_fault: p.is_double_fault,
                    player1: Some(p1.clone()),
                    player2: Some(p2.clone()),
                })
                .collect();
            let file = format!("{}_vs_{}.csv", slug(&p1), slug(&p2));
            write_csv(&out.join("history").join(file), &rows);
        }
    }
}

fn slug(name: &str) -> String {
    name.to_lowercase().replace(' ', "_")
}
