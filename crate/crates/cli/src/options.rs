use std::fs;
use std::path::PathBuf;

use clap::Args;
use tmm_core::momentum::StmTransform;
use tmm_core::{MatchFormat, ModelConfig64};

use crate::error::CliError;

/// Model settings: an optional TOML file, then individual overrides.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// TOML file with model settings (r, prior_strength, efficiency_smoothing, ...)
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Efficiency decay base
    #[arg(long)]
    pub r: Option<f64>,
    /// Pseudo-count of the prior on the in-match serve rate
    #[arg(long)]
    pub prior_strength: Option<f64>,
    /// Smoothing factor of the efficiency series
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Let the long-term weight exceed 1 once the match outruns its expected length
    #[arg(long)]
    pub no_clamp: bool,
    /// identity, square or exp
    #[arg(long, value_name = "NAME")]
    pub stm_transform: Option<String>,
}

impl ModelArgs {
    pub fn resolve(&self) -> Result<ModelConfig64, CliError> {
        let mut config = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
                toml::from_str::<ModelConfig64>(&text)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
            }
            None => ModelConfig64::default(),
        };
        if let Some(r) = self.r {
            config.r = r;
        }
        if let Some(m) = self.prior_strength {
            config.prior_strength = m;
        }
        if let Some(alpha) = self.alpha {
            config.efficiency_smoothing = alpha;
        }
        if self.no_clamp {
            config.clamp_weight = false;
        }
        if let Some(name) = &self.stm_transform {
            config.stm_transform = name
                .parse::<StmTransform>()
                .map_err(|e| CliError::Input(format!("--stm-transform: {e}")))?;
        }
        config
            .validate()
            .map_err(|e| CliError::Input(format!("model config: {e}")))?;
        Ok(config)
    }
}

#[derive(Debug, Clone, Args)]
pub struct FormatArgs {
    /// Number of sets in the match (3 or 5)
    #[arg(long, default_value_t = 5)]
    pub best_of: u32,
    /// Play the final set out with advantage instead of a tiebreak
    #[arg(long)]
    pub no_final_set_tiebreak: bool,
}

impl Default for FormatArgs {
    fn default() -> Self {
        Self {
            best_of: 5,
            no_final_set_tiebreak: false,
        }
    }
}

impl FormatArgs {
    pub fn resolve(&self) -> Result<MatchFormat, CliError> {
        let base = MatchFormat::best_of(self.best_of)
            .map_err(|e| CliError::Input(format!("--best-of: {e}")))?;
        Ok(MatchFormat {
            final_set_tiebreak: !self.no_final_set_tiebreak,
            ..base
        })
    }
}
