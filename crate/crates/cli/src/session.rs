//! One live match being recorded point by point.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use thiserror::Error;
use tmm_core::momentum::ModelError;
use tmm_core::{
    MatchFormat, MatchTracker64, ModelConfig64, MomentumSample64, PlayerId, PlayerProfile,
    PointRecord, ScoreState,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SessionError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("no points to undo")]
    NothingToUndo,
}

/// Session state. The tracker always equals a fresh replay of `history`'s
/// points; undo rebuilds it that way.
#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    first_server: Option<PlayerId>,
    history: Vec<(PointRecord, MomentumSample64)>,
    tracker: MatchTracker64,
}

impl Session {
    /// Without `first_server`, the first recorded point decides who opened
    /// the match.
    pub fn new(
        id: impl Into<String>,
        profiles: [PlayerProfile; 2],
        format: MatchFormat,
        config: ModelConfig64,
        first_server: Option<PlayerId>,
    ) -> Result<Self, ModelError> {
        let tracker = MatchTracker64::new(
            profiles,
            format,
            config,
            first_server.unwrap_or(PlayerId::P1),
        )?;
        Ok(Self {
            id: id.into(),
            first_server,
            history: Vec::new(),
            tracker,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn score(&self) -> &ScoreState {
        self.tracker.score()
    }

    pub fn history(&self) -> &[(PointRecord, MomentumSample64)] {
        &self.history
    }

    pub fn samples(&self) -> Vec<MomentumSample64> {
        self.history.iter().map(|(_, s)| *s).collect()
    }

    pub fn points(&self) -> Vec<PointRecord> {
        self.history.iter().map(|(p, _)| *p).collect()
    }

    fn fresh_tracker(&self, opening: PlayerId) -> MatchTracker64 {
        MatchTracker64::new(
            self.tracker.profiles().clone(),
            *self.tracker.format(),
            *self.tracker.config(),
            opening,
        )
        .expect("settings were validated when the session started")
    }

    /// Tracker ready to take `next`: before the first point of a session
    /// without a fixed opener, the point's server opens the match.
    fn tracker_for(&self, next: &PointRecord) -> Option<MatchTracker64> {
        (self.history.is_empty() && self.first_server.is_none())
            .then(|| self.fresh_tracker(next.server))
    }

    pub fn record(&mut self, point: PointRecord) -> Result<MomentumSample64, SessionError> {
        let mut tracker = self
            .tracker_for(&point)
            .unwrap_or_else(|| self.tracker.clone());
        let sample = tracker.push(&point)?;
        self.tracker = tracker;
        self.history.push((point, sample));
        Ok(sample)
    }

    /// Removes the last point and recomputes the state from the rest.
    pub fn undo(&mut self) -> Result<PointRecord, SessionError> {
        let (removed, _) = self.history.pop().ok_or(SessionError::NothingToUndo)?;
        let opening = self
            .first_server
            .or(self.history.first().map(|(p, _)| p.server))
            .unwrap_or(PlayerId::P1);
        let mut tracker = self.fresh_tracker(opening);
        for (point, sample) in &mut self.history {
            *sample = tracker
                .push(point)
                .expect("surviving points replayed before");
        }
        self.tracker = tracker;
        Ok(removed)
    }

    /// Samples the session would produce if `points` came next, with the
    /// projected score. The session itself is untouched.
    pub fn what_if(
        &self,
        points: &[PointRecord],
    ) -> Result<(Vec<MomentumSample64>, ScoreState), (usize, ModelError)> {
        let mut tracker = match points.first() {
            Some(first) => self
                .tracker_for(first)
                .unwrap_or_else(|| self.tracker.clone()),
            None => self.tracker.clone(),
        };
        let samples = points
            .iter()
            .enumerate()
            .map(|(i, p)| tracker.push(p).map_err(|e| (i, e)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((samples, *tracker.score()))
    }

    /// Hash of everything observable about the session.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.id.hash(&mut h);
        self.first_server.hash(&mut h);
        self.score().hash(&mut h);
        let momentum = self.tracker.momentum();
        momentum.tallies.hash(&mut h);
        momentum.t_points.hash(&mut h);
        momentum.e_points.to_bits().hash(&mut h);
        for e in momentum.smoothed_efficiency {
            e.to_bits().hash(&mut h);
        }
        for (point, sample) in &self.history {
            point.hash(&mut h);
            sample.point_index.hash(&mut h);
            for p in &sample.players {
                for v in [
                    p.p_hist,
                    p.p_inst,
                    p.p_ltm,
                    p.efficiency_smoothed,
                    p.m_stm,
                    p.tmm,
                ] {
                    v.to_bits().hash(&mut h);
                }
                p.efficiency_raw.map(f64::to_bits).hash(&mut h);
            }
        }
        h.finish()
    }
}
