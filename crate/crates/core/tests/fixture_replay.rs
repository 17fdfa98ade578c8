mod support;

use std::fs;

use support::fixture;
use tmm_core::ingest::{derive_profile, parse_points_csv, to_point_records, ProfileFile};
use tmm_core::momentum::{replay_match, ModelConfig};
use tmm_core::{MatchFormat, MomentumSample64, PlayerId, PlayerProfile, PointRecord};

use PlayerId::{P1, P2};

fn load(points: &str, profiles: &str) -> (Vec<PointRecord>, [PlayerProfile; 2]) {
    let rows = parse_points_csv(fs::File::open(fixture(points)).unwrap()).unwrap();
    let points = to_point_records(&rows, &MatchFormat::best_of_5()).unwrap();
    let file = ProfileFile::from_toml(&fs::read_to_string(fixture(profiles)).unwrap()).unwrap();
    (points, derive_profile(&file).unwrap())
}

fn replay(points: &[PointRecord], profiles: &[PlayerProfile; 2]) -> Vec<MomentumSample64> {
    replay_match(
        points,
        profiles,
        &MatchFormat::best_of_5(),
        &ModelConfig::default(),
    )
    .unwrap()
}

#[test]
fn swing_fixture_crosses() {
    let (points, profiles) = load("swing_five_sets.csv", "swing_profiles.toml");
    let samples = replay(&points, &profiles);
    assert_eq!(samples.len(), points.len());
    let diff: Vec<f64> = samples
        .iter()
        .map(|s| s.player(P1).tmm - s.player(P2).tmm)
        .collect();
    let crossings = diff
        .windows(2)
        .filter(|w| w[0].signum() != w[1].signum())
        .count();
    assert!(crossings >= 1);
}

#[test]
fn one_sided_fixture_favours_winner() {
    let (points, profiles) = load("one_sided_straight_sets.csv", "one_sided_profiles.toml");
    let samples = replay(&points, &profiles);
    let after: Vec<_> = samples.iter().skip(10).collect();
    let ahead = after
        .iter()
        .filter(|s| s.player(P1).tmm >= s.player(P2).tmm)
        .count();
    let share = ahead as f64 / after.len() as f64;
    assert!(share >= 0.9, "winner ahead on {share:.3} of points");
}

#[test]
fn complements_and_factorization_hold_on_fixtures() {
    for (pts, prof) in [
        ("swing_five_sets.csv", "swing_profiles.toml"),
        ("one_sided_straight_sets.csv", "one_sided_profiles.toml"),
    ] {
        let (points, profiles) = load(pts, prof);
        for s in replay(&points, &profiles) {
            let (a, b) = (s.player(P1), s.player(P2));
            assert!((a.p_hist + b.p_hist - 1.0).abs() <= 1e-12);
            assert!((a.p_inst + b.p_inst - 1.0).abs() <= 1e-12);
            for p in [a, b] {
                assert_eq!(p.tmm, p.p_ltm * p.efficiency_smoothed);
                for q in [p.p_hist, p.p_inst, p.p_ltm] {
                    assert!((0.0..=1.0).contains(&q));
                }
            }
        }
    }
}
