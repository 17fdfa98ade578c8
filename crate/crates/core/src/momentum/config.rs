use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::Scalar;

/// Efficiency decay base used when none is calibrated.
pub const DEFAULT_R: f64 = 2.0;

/// The `f` in `M_stm = p_hist * f(E)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum StmTransform {
    #[default]
    Identity,
    Square,
    /// `exp(E - 1)`, which keeps `f(1) = 1`.
    Exp,
}

impl StmTransform {
    pub fn apply<T: Scalar>(self, e: T) -> T {
        match self {
            StmTransform::Identity => e,
            StmTransform::Square => e * e,
            StmTransform::Exp => (e - T::one()).exp(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StmTransform::Identity => "identity",
            StmTransform::Square => "square",
            StmTransform::Exp => "exp",
        }
    }
}

impl fmt::Display for StmTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StmTransform {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(StmTransform::Identity),
            "square" => Ok(StmTransform::Square),
            "exp" => Ok(StmTransform::Exp),
            other => Err(ModelError::UnknownTransform(other.to_string())),
        }
    }
}

impl TryFrom<String> for StmTransform {
    type Error = ModelError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<StmTransform> for String {
    fn from(value: StmTransform) -> Self {
        value.name().to_string()
    }
}

/// Knobs of the model that historical data or the analyst must supply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig<T> {
    /// Efficiency decay base, `> 1`.
    pub r: T,
    /// Pseudo-count of the Beta prior on in-match serve win rate.
    pub prior_strength: T,
    /// EMA factor for each player's efficiency series; 1 keeps only the
    /// latest point.
    pub efficiency_smoothing: T,
    /// Raw efficiency charged to a server who double faults.
    pub double_fault_efficiency: T,
    /// Clamp `T_points / E_points` to `[0, 1]`.
    pub clamp_weight: bool,
    pub stm_transform: StmTransform,
}

impl<T: Scalar> Default for ModelConfig<T> {
    fn default() -> Self {
        Self {
            r: T::of(DEFAULT_R),
            prior_strength: T::of(20.0),
            efficiency_smoothing: T::of(0.3),
            double_fault_efficiency: T::zero(),
            clamp_weight: true,
            stm_transform: StmTransform::Identity,
        }
    }
}

impl<T: Scalar> ModelConfig<T> {
    /// Configuration under which the instant probability is the raw in-match
    /// ratio and efficiency is that of the last point won.
    pub fn unsmoothed() -> Self {
        Self {
            prior_strength: T::zero(),
            efficiency_smoothing: T::one(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !self.r.is_finite() || self.r <= T::one() {
            return Err(ModelError::InvalidR(self.r.to_f64().unwrap_or(f64::NAN)));
        }
        if !self.prior_strength.is_finite() || self.prior_strength < T::zero() {
            return Err(ModelError::InvalidConfig(
                "prior_strength must be a non-negative number",
            ));
        }
        if !(self.efficiency_smoothing >= T::zero() && self.efficiency_smoothing <= T::one()) {
            return Err(ModelError::InvalidConfig(
                "efficiency_smoothing must lie in [0, 1]",
            ));
        }
        if !self.double_fault_efficiency.is_finite() {
            return Err(ModelError::InvalidConfig(
                "double_fault_efficiency must be finite",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_names_round_trip() {
        for t in [
            StmTransform::Identity,
            StmTransform::Square,
            StmTransform::Exp,
        ] {
            assert_eq!(t.name().parse::<StmTransform>().unwrap(), t);
        }
        assert_eq!(
            "cubic".parse::<StmTransform>(),
            Err(ModelError::UnknownTransform("cubic".into()))
        );
    }

    #[test]
    fn transforms_fix_one() {
        for t in [
            StmTransform::Identity,
            StmTransform::Square,
            StmTransform::Exp,
        ] {
            assert_eq!(t.apply(1.0f64), 1.0);
        }
    }

    #[test]
    fn validation() {
        assert!(ModelConfig::<f64>::default().validate().is_ok());
        let bad = ModelConfig::<f64> {
            r: 1.0,
            ..Default::default()
        };
        assert_eq!(bad.validate(), Err(ModelError::InvalidR(1.0)));
        let bad = ModelConfig::<f64> {
            efficiency_smoothing: 1.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = ModelConfig::<f32> {
            prior_strength: -1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn partial_toml_falls_back_to_defaults() {
        let cfg: ModelConfig<f64> = toml::from_str("r = 3.0\nstm_transform = \"square\"").unwrap();
        assert_eq!(cfg.r, 3.0);
        assert_eq!(cfg.prior_strength, 20.0);
        assert_eq!(cfg.stm_transform, StmTransform::Square);
        assert!(toml::from_str::<ModelConfig<f64>>("stm_transform = \"nope\"").is_err());
    }
}
