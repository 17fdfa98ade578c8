//! Point-by-point tennis momentum engine.
//!
//! * [`scoring`]: rule-correct scoring state machine.
//! * [`momentum`]: the momentum model and its streaming fold over a match.
//! * [`ingest`]: point-log CSV and profile file parsing.
//! * [`simulator`]: seeded Monte Carlo match generator and evaluation harness.
//!
//! The model math is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to one of the two.

pub mod ingest;
pub mod momentum;
mod scalar;
pub mod scoring;
pub mod simulator;

pub use momentum::{ModelError, PlayerProfile, PointRecord};
pub use scalar::Scalar;
pub use scoring::{MatchFormat, PlayerId, ScoreState};

pub type ModelConfig64 = momentum::ModelConfig<f64>;
pub type ModelConfig32 = momentum::ModelConfig<f32>;
pub type MomentumState64 = momentum::MomentumState<f64>;
pub type MomentumState32 = momentum::MomentumState<f32>;
pub type MomentumSample64 = momentum::MomentumSample<f64>;
pub type MomentumSample32 = momentum::MomentumSample<f32>;
pub type MatchTracker64 = momentum::MatchTracker<f64>;
pub type MatchTracker32 = momentum::MatchTracker<f32>;
