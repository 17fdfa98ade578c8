//! Seeded Monte Carlo matches and an evaluation harness for the momentum
//! model.
//!
//! Each point is won by the server with a fixed per-player probability,
//! optionally shifted by `momentum_boost` for every point in the current
//! winning streak (positive when the server holds the streak, negative when
//! the returner does). Ace and double-fault flags are drawn conditionally on
//! the point result and rally lengths are geometric.

mod rng;

pub use rng::{labelled_seed, mix64, replication_seed, SimRng};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::momentum::{replay_match, ModelConfig, PlayerProfile, PointRecord, ReplayError};
use crate::scoring::{MatchFormat, PlayerId, ScoreState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: `{field}` {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error("no winner after {points} points")]
    SimulationStall { points: u32 },
    #[error("replication {index}: {source}")]
    Replication {
        index: u64,
        #[source]
        source: Box<SimError>,
    },
    #[error("all {replications} replications stalled")]
    AllStalled { replications: u64 },
    #[error(transparent)]
    Model(#[from] ReplayError),
}

fn default_max_points() -> u32 {
    2000
}

fn default_true() -> bool {
    true
}

/// Generative model and experiment size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub serve_win_prob: [f64; 2],
    /// Mean rally count (after the serve) of non-ace points.
    #[serde(default)]
    pub rally_length_mean: f64,
    /// Probability of an ace given the server wins the point.
    #[serde(default)]
    pub ace_prob: [f64; 2],
    /// Probability of a double fault given the server loses the point.
    #[serde(default)]
    pub double_fault_prob: [f64; 2],
    #[serde(default)]
    pub format: MatchFormat,
    pub replications: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_points")]
    pub max_points: u32,
    /// Shift of the server's win probability per point of the current streak.
    #[serde(default)]
    pub momentum_boost: f64,
    /// Odd-numbered replications start with P2 serving.
    #[serde(default = "default_true")]
    pub alternate_first_server: bool,
}

impl SimConfig {
    pub fn new(serve_win_prob: [f64; 2], replications: u64, seed: u64) -> Self {
        Self {
            serve_win_prob,
            rally_length_mean: 3.0,
            ace_prob: [0.1; 2],
            double_fault_prob: [0.05; 2],
            format: MatchFormat::best_of_5(),
            replications,
            seed,
            max_points: default_max_points(),
            momentum_boost: 0.0,
            alternate_first_server: true,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, SimError> {
        let config: SimConfig = toml::from_str(text).map_err(|e| SimError::InvalidConfig {
            field: "document",
            reason: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let invalid = |field, reason: &str| SimError::InvalidConfig {
            field,
            reason: reason.to_string(),
        };
        let is_prob = |p: f64| (0.0..=1.0).contains(&p);
        if !self.serve_win_prob.iter().all(|&p| is_prob(p)) {
            return Err(invalid("serve_win_prob", "must lie in [0, 1]"));
        }
        if !self.ace_prob.iter().all(|&p| is_prob(p)) {
            return Err(invalid("ace_prob", "must lie in [0, 1]"));
        }
        if !self.double_fault_prob.iter().all(|&p| is_prob(p)) {
            return Err(invalid("double_fault_prob", "must lie in [0, 1]"));
        }
        if !(self.rally_length_mean >= 0.0 && self.rally_length_mean.is_finite()) {
            return Err(invalid(
                "rally_length_mean",
                "must be a non-negative number",
            ));
        }
        if self.replications == 0 {
            return Err(invalid("replications", "must be at least 1"));
        }
        if self.max_points == 0 {
            return Err(invalid("max_points", "must be at least 1"));
        }
        if !self.momentum_boost.is_finite() {
            return Err(invalid("momentum_boost", "must be finite"));
        }
        self.format
            .validate()
            .map_err(|e| invalid("format", &e.to_string()))
    }

    pub fn first_server(&self, replication: u64) -> PlayerId {
        if self.alternate_first_server && replication % 2 == 1 {
            PlayerId::P2
        } else {
            PlayerId::P1
        }
    }
}

/// Simulates one match with P1 serving first.
pub fn simulate_match(config: &SimConfig, seed: u64) -> Result<Vec<PointRecord>, SimError> {
    simulate_match_from(config, seed, PlayerId::P1)
}

pub fn simulate_match_from(
    config: &SimConfig,
    seed: u64,
    first_server: PlayerId,
) -> Result<Vec<PointRecord>, SimError> {
    let mut rng = SimRng::new(seed);
    let mut score = ScoreState::new(&config.format, first_server);
    let mut points = Vec::new();
    let mut streak: Option<(PlayerId, u32)> = None;

    while score.winner.is_none() {
        if points.len() as u32 >= config.max_points {
            return Err(SimError::SimulationStall {
                points: config.max_points,
            });
        }
        let server = score.server;
        let i = server.index();
        let shift = match streak {
            Some((holder, run)) if holder == server => config.momentum_boost * f64::from(run),
            Some((_, run)) => -config.momentum_boost * f64::from(run),
            None => 0.0,
        };
        let p = (config.serve_win_prob[i] + shift).clamp(0.0, 1.0);
        let server_wins = rng.bernoulli(p);

        let point = if server_wins {
            if rng.bernoulli(config.ace_prob[i]) {
                PointRecord::ace(server)
            } else {
                PointRecord::rally(server, server, rng.geometric(config.rally_length_mean))
            }
        } else if rng.bernoulli(config.double_fault_prob[i]) {
            PointRecord::double_fault(server)
        } else {
            PointRecord::rally(
                server,
                server.opponent(),
                rng.geometric(config.rally_length_mean),
            )
        };

        streak = match streak {
            Some((holder, run)) if holder == point.point_winner => Some((holder, run + 1)),
            _ => Some((point.point_winner, 1)),
        };
        score = score
            .apply_point(point.point_winner, &config.format)
            .expect("match not over");
        points.push(point);
    }
    Ok(points)
}

/// Accuracy of "the player with the higher momentum at the halfway mark wins".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSummary {
    /// Point index at which momentum is compared: half the expected match
    /// length, or the last point of shorter matches.
    pub checkpoint: u32,
    pub correct: u64,
    /// Replications where both players had equal momentum at the checkpoint.
    pub ties: u64,
    /// `correct / completed`; ties count as misses.
    pub accuracy: f64,
}

/// Aggregate result of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    #[serde(with = "hex_u64")]
    pub master_seed: u64,
    pub replications: u64,
    pub completed: u64,
    /// Indices of replications that hit `max_points` without a winner.
    pub stalled: Vec<u64>,
    pub match_wins: [u64; 2],
    /// Share of completed replications won by each player.
    pub match_win_rate: [f64; 2],
    pub mean_match_points: f64,
    pub expected_match_points: f64,
    pub server_points_played: [u64; 2],
    pub server_points_won: [u64; 2],
    pub serve_win_rate: [f64; 2],
    pub prediction: PredictionSummary,
    /// Seed of every replication, in order, for `simulate_match_from`.
    #[serde(with = "hex_u64_vec")]
    pub seeds: Vec<u64>,
}

impl SimReport {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

enum Outcome {
    Completed {
        winner: PlayerId,
        points: u64,
        served: [u64; 2],
        served_won: [u64; 2],
        /// `Some(true)` when the momentum leader at the checkpoint won.
        predicted: Option<bool>,
    },
    Stalled,
}

/// Runs `config.replications` independent matches and replays each through
/// the momentum model.
///
/// Replication `i` uses seed `replication_seed(config.seed, i)`. Replications
/// run in parallel; the reduction is done in index order, so the report does
/// not depend on scheduling.
pub fn run_experiment(
    config: &SimConfig,
    model_config: &ModelConfig<f64>,
    profiles: &[PlayerProfile; 2],
) -> Result<SimReport, SimError> {
    config.validate()?;
    let e_points = profiles[0].expected_points_per_match + profiles[1].expected_points_per_match;
    let checkpoint = ((e_points / 2.0).floor() as u32).max(1);
    let seeds: Vec<u64> = (0..config.replications)
        .map(|i| replication_seed(config.seed, i))
        .collect();

    let outcomes: Vec<Outcome> =
        seeds
            .par_iter()
            .enumerate()
            .map(|(i, &seed)| -> Result<Outcome, SimError> {
                let i = i as u64;
                let points = match simulate_match_from(config, seed, config.first_server(i)) {
                    Ok(points) => points,
                    Err(SimError::SimulationStall { .. }) => return Ok(Outcome::Stalled),
                    Err(e) => {
                        return Err(SimError::Replication {
                            index: i,
                            source: Box::new(e),
                        })
                    }
                };
                let samples = replay_match(&points, profiles, &config.format, model_config)
                    .map_err(|e| SimError::Replication {
                        index: i,
                        source: Box::new(SimError::Model(e)),
                    })?;
                let winner = points
                    .last()
                    .expect("a finished match has points")
                    .point_winner;
                let mut served = [0u64; 2];
                let mut served_won = [0u64; 2];
                for p in &points {
                    served[p.server.index()] += 1;
                    if p.point_winner == p.server {
                        served_won[p.server.index()] += 1;
                    }
                }
                let at = samples[(checkpoint as usize).min(samples.len()) - 1];
                let (t1, t2) = (at.players[0].tmm, at.players[1].tmm);
                let predicted = if t1 == t2 {
                    None
                } else {
                    let leader = if t1 > t2 { PlayerId::P1 } else { PlayerId::P2 };
                    Some(leader == winner)
                };
                Ok(Outcome::Completed {
                    winner,
                    points: points.len() as u64,
                    served,
                    served_won,
                    predicted,
                })
            })
            .collect::<Result<_, _>>()?;

    let mut report = SimReport {
        master_seed: config.seed,
        replications: config.replications,
        completed: 0,
        stalled: Vec::new(),
        match_wins: [0; 2],
        match_win_rate: [0.0; 2],
        mean_match_points: 0.0,
        expected_match_points: e_points,
        server_points_played: [0; 2],
        server_points_won: [0; 2],
        serve_win_rate: [0.0; 2],
        prediction: PredictionSummary {
            checkpoint,
            correct: 0,
            ties: 0,
            accuracy: 0.0,
        },
        seeds,
    };
    let mut total_points = 0u64;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Outcome::Stalled => report.stalled.push(i as u64),
            Outcome::Completed {
                winner,
                points,
                served,
                served_won,
                predicted,
            } => {
                report.completed += 1;
                report.match_wins[winner.index()] += 1;
                total_points += points;
                for j in 0..2 {
                    report.server_points_played[j] += served[j];
                    report.server_points_won[j] += served_won[j];
                }
                match predicted {
                    Some(true) => report.prediction.correct += 1,
                    Some(false) => {}
                    None => report.prediction.ties += 1,
                }
            }
        }
    }
    if report.completed == 0 {
        return Err(SimError::AllStalled {
            replications: config.replications,
        });
    }
    let completed = report.completed as f64;
    report.match_win_rate = [
        report.match_wins[0] as f64 / completed,
        report.match_wins[1] as f64 / completed,
    ];
    report.mean_match_points = total_points as f64 / completed;
    for j in 0..2 {
        report.serve_win_rate[j] = if report.server_points_played[j] == 0 {
            0.0
        } else {
            report.server_points_won[j] as f64 / report.server_points_played[j] as f64
        };
    }
    report.prediction.accuracy = report.prediction.correct as f64 / completed;
    Ok(report)
}

/// Serve tallies used for profiles implied by a configuration.
const IMPLIED_SERVE_ATTEMPTS: u64 = 10_000;
const PILOT_REPLICATIONS: u64 = 200;

/// Profiles matching the generative model: serve-point win rates equal to
/// the configured probabilities, and expected match length estimated from a
/// pilot run on a separate seed stream (split evenly between the players).
pub fn implied_profiles(config: &SimConfig) -> Result<[PlayerProfile; 2], SimError> {
    config.validate()?;
    let pilot_master = labelled_seed(config.seed, "pilot");
    let n = config.replications.min(PILOT_REPLICATIONS);
    let lengths: Vec<u64> = (0..n)
        .into_par_iter()
        .filter_map(|i| {
            simulate_match_from(
                config,
                replication_seed(pilot_master, i),
                config.first_server(i),
            )
            .ok()
            .map(|points| points.len() as u64)
        })
        .collect();
    if lengths.is_empty() {
        return Err(SimError::AllStalled { replications: n });
    }
    let mean = lengths.iter().sum::<u64>() as f64 / lengths.len() as f64;
    let profile = |label: &str, p: f64| PlayerProfile {
        label: label.to_string(),
        points_won_on_serve: (p * IMPLIED_SERVE_ATTEMPTS as f64).round() as u64,
        serve_attempts: IMPLIED_SERVE_ATTEMPTS,
        expected_points_per_match: mean / 2.0,
    };
    Ok([
        profile("P1", config.serve_win_prob[0]),
        profile("P2", config.serve_win_prob[1]),
    ])
}

mod hex_u64 {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{value:016x}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let text = String::deserialize(d)?;
        u64::from_str_radix(&text, 16).map_err(D::Error::custom)
    }
}

mod hex_u64_vec {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[u64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(|v| format!("{v:016x}")))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u64>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| u64::from_str_radix(t, 16).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest;

    fn deterministic(p: [f64; 2]) -> SimConfig {
        SimConfig {
            format: MatchFormat::best_of_3(),
            ..SimConfig::new(p, 1, 9)
        }
    }

    #[test]
    fn sweep_takes_48_points() {
        let points = simulate_match(&deterministic([1.0, 0.0]), 5).unwrap();
        assert_eq!(points.len(), 48);
        assert!(points.iter().all(|p| p.point_winner == PlayerId::P1));
    }

    #[test]
    fn unbreakable_servers_stall_in_the_tiebreak() {
        let err = simulate_match(&deterministic([1.0, 1.0]), 5).unwrap_err();
        assert_eq!(err, SimError::SimulationStall { points: 2000 });
    }

    #[test]
    fn same_seed_same_match() {
        let cfg = deterministic([0.62, 0.6]);
        assert_eq!(
            simulate_match(&cfg, 77).unwrap(),
            simulate_match(&cfg, 77).unwrap()
        );
        assert_ne!(
            simulate_match(&cfg, 77).unwrap(),
            simulate_match(&cfg, 78).unwrap()
        );
    }

    #[test]
    fn points_are_well_formed() {
        let cfg = SimConfig {
            ace_prob: [0.3, 0.3],
            double_fault_prob: [0.3, 0.3],
            ..deterministic([0.6, 0.6])
        };
        let points = simulate_match(&cfg, 1).unwrap();
        for p in &points {
            p.validate().unwrap();
        }
        assert!(points.iter().any(|p| p.is_ace));
        assert!(points.iter().any(|p| p.is_double_fault));
    }

    #[test]
    fn generated_matches_pass_ingest() {
        let cfg = deterministic([0.64, 0.61]);
        for seed in 0..20 {
            let points = simulate_match_from(&cfg, seed, PlayerId::P2).unwrap();
            let rows: Vec<ingest::RawPointRow> = points
                .iter()
                .enumerate()
                .map(|(i, p)| ingest::RawPointRow {
                    match_id: "sim".into(),
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
                .collect();
            assert_eq!(
                ingest::to_point_records(&rows, &cfg.format).unwrap(),
                points
            );
        }
    }

    #[test]
    fn config_validation_names_field() {
        let mut cfg = deterministic([0.6, 0.6]);
        cfg.replications = 0;
        match cfg.validate().unwrap_err() {
            SimError::InvalidConfig { field, .. } => assert_eq!(field, "replications"),
            e => panic!("{e:?}"),
        }
        cfg.replications = 1;
        cfg.serve_win_prob = [1.2, 0.5];
        assert!(matches!(
            cfg.validate(),
            Err(SimError::InvalidConfig {
                field: "serve_win_prob",
                ..
            })
        ));
    }

    #[test]
    fn single_sweep_experiment() {
        let cfg = deterministic([1.0, 0.0]);
        let profiles = implied_profiles(&cfg).unwrap();
        let report = run_experiment(&cfg, &ModelConfig::default(), &profiles).unwrap();
        assert_eq!(report.match_win_rate, [1.0, 0.0]);
        assert_eq!(report.completed, 1);
        assert_eq!(report.mean_match_points, 48.0);
    }

    #[test]
    fn all_stalled_is_an_error() {
        let cfg = SimConfig {
            replications: 3,
            ..deterministic([1.0, 1.0])
        };
        let profiles = [
            PlayerProfile::new("a", 1, 2, 100.0).unwrap(),
            PlayerProfile::new("b", 1, 2, 100.0).unwrap(),
        ];
        assert_eq!(
            run_experiment(&cfg, &ModelConfig::default(), &profiles),
            Err(SimError::AllStalled { replications: 3 })
        );
        assert!(matches!(
            implied_profiles(&cfg),
            Err(SimError::AllStalled { .. })
        ));
    }

    #[test]
    fn report_toml_round_trip() {
        let cfg = SimConfig {
            replications: 8,
            seed: u64::MAX,
            ..deterministic([0.6, 0.6])
        };
        let profiles = implied_profiles(&cfg).unwrap();
        let report = run_experiment(&cfg, &ModelConfig::default(), &profiles).unwrap();
        let text = report.to_toml();
        assert_eq!(SimReport::from_toml(&text).unwrap(), report);
        assert_eq!(report.seeds.len(), 8);
    }
}
