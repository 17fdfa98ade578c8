use serde::{Deserialize, Serialize};

use super::{IngestError, RawPointRow};
use crate::momentum::PlayerProfile;
use crate::scoring::PlayerId;

/// Serve tallies and length of one prior match, from one player's side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorMatch {
    pub points_won_on_serve: u64,
    pub serve_attempts: u64,
    pub total_points_in_match: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerHistory {
    pub label: String,
    #[serde(default)]
    pub matches: Vec<PriorMatch>,
}

/// Prior-match history of both players, stored as TOML:
///
/// ```toml
/// [player1]
/// label = "Player One"
///
/// [[player1.matches]]
/// points_won_on_serve = 62
/// serve_attempts = 91
/// total_points_in_match = 178
///
/// [player2]
/// label = "Player Two"
/// # ...
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub player1: PlayerHistory,
    pub player2: PlayerHistory,
}

impl ProfileFile {
    pub fn from_toml(text: &str) -> Result<Self, IngestError> {
        let file: ProfileFile =
            toml::from_str(text).map_err(|e| IngestError::Profile(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("profile file serializes")
    }

    pub fn history(&self, player: PlayerId) -> &PlayerHistory {
        match player {
            PlayerId::P1 => &self.player1,
            PlayerId::P2 => &self.player2,
        }
    }

    pub fn validate(&self) -> Result<(), IngestError> {
        for history in [&self.player1, &self.player2] {
            for (i, m) in history.matches.iter().enumerate() {
                if m.points_won_on_serve > m.serve_attempts {
                    return Err(IngestError::Profile(format!(
                        "{} match {}: {} points won on serve out of {} attempts",
                        history.label,
                        i + 1,
                        m.points_won_on_serve,
                        m.serve_attempts
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Builds both players' profiles. Serve tallies are pooled across matches
/// (summed, not averaged per match); expected points are the mean match
/// length.
pub fn derive_profile(file: &ProfileFile) -> Result<[PlayerProfile; 2], IngestError> {
    file.validate()?;
    let derive = |history: &PlayerHistory| -> Result<PlayerProfile, IngestError> {
        if history.matches.is_empty() {
            return Err(IngestError::NoHistory(history.label.clone()));
        }
        let won = history.matches.iter().map(|m| m.points_won_on_serve).sum();
        let attempts = history.matches.iter().map(|m| m.serve_attempts).sum();
        let total: u64 = history
            .matches
            .iter()
            .map(|m| m.total_points_in_match)
            .sum();
        let mean = total as f64 / history.matches.len() as f64;
        PlayerProfile::new(history.label.clone(), won, attempts, mean)
            .map_err(|e| IngestError::Profile(e.to_string()))
    };
    Ok([derive(&file.player1)?, derive(&file.player2)?])
}

/// Tallies one match from the point of view of `side`.
pub fn summarize_match(rows: &[RawPointRow], side: PlayerId) -> PriorMatch {
    let n = side.number();
    let served = rows.iter().filter(|r| r.server == n);
    PriorMatch {
        points_won_on_serve: served.clone().filter(|r| r.point_victor == n).count() as u64,
        serve_attempts: served.count() as u64,
        total_points_in_match: rows.len() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn history(label: &str, matches: &[(u64, u64, u64)]) -> PlayerHistory {
        PlayerHistory {
            label: label.into(),
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

    #[test]
    fn single_match() {
        let file = ProfileFile {
            player1: history("a", &[(30, 50, 120)]),
            player2: history("b", &[(30, 50, 120)]),
        };
        let [a, _] = derive_profile(&file).unwrap();
        assert_eq!(
            (
                a.points_won_on_serve,
                a.serve_attempts,
                a.expected_points_per_match
            ),
            (30, 50, 120.0)
        );
    }

    #[test]
    fn four_matches() {
        let file = ProfileFile {
            player1: history(
                "a",
                &[(50, 80, 110), (50, 80, 130), (50, 80, 120), (50, 80, 140)],
            ),
            player2: history("b", &[(1, 2, 10)]),
        };
        let [a, _] = derive_profile(&file).unwrap();
        assert_eq!((a.points_won_on_serve, a.serve_attempts), (200, 320));
        assert_eq!(
            a.points_won_on_serve as f64 / a.serve_attempts as f64,
            0.625
        );
        assert_eq!(a.expected_points_per_match, 125.0);
    }

    #[test]
    fn pools_rather_than_averages() {
        // Unequal denominators separate pooling (2/12) from averaging ((0 + 1) / 2).
        let file = ProfileFile {
            player1: history("a", &[(0, 10, 50), (10, 10, 50)]),
            player2: history("b", &[(0, 10, 50), (2, 2, 50)]),
        };
        let [a, b] = derive_profile(&file).unwrap();
        assert_eq!(a.points_won_on_serve as f64 / a.serve_attempts as f64, 0.5);
        assert_eq!(
            b.points_won_on_serve as f64 / b.serve_attempts as f64,
            2.0 / 12.0
        );
    }

    #[test]
    fn no_history() {
        let file = ProfileFile {
            player1: history("a", &[(1, 2, 3)]),
            player2: history("b", &[]),
        };
        assert_eq!(
            derive_profile(&file),
            Err(IngestError::NoHistory("b".into()))
        );
    }

    #[test]
    fn toml_round_trip_and_validation() {
        let file = ProfileFile {
            player1: history("a", &[(30, 50, 120)]),
            player2: history("b", &[(20, 40, 100), (25, 45, 110)]),
        };
        assert_eq!(ProfileFile::from_toml(&file.to_toml()).unwrap(), file);
        let bad = "[player1]\nlabel = \"a\"\n[[player1.matches]]\npoints_won_on_serve = 5\nserve_attempts = 4\ntotal_points_in_match = 9\n[player2]\nlabel = \"b\"\n";
        assert!(matches!(
            ProfileFile::from_toml(bad),
            Err(IngestError::Profile(_))
        ));
        assert!(matches!(
            ProfileFile::from_toml("nonsense ="),
            Err(IngestError::Profile(_))
        ));
    }
}
