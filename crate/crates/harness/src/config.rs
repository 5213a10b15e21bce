//! Experiment configuration files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use rpd_core::StageGame;

use crate::agent::AgentConfig;
use crate::elicit::ElicitOptions;
use crate::error::{HarnessError, Result};
use crate::prompt::Treatment;

fn standard_game() -> [f64; 4] {
    [3.0, 0.0, 5.0, 1.0]
}

fn fifty() -> u32 {
    50
}

fn yes() -> bool {
    true
}

/// ```json
/// {"treatment": {"kind": "stopping", "w": 0.1}, "game": [3, 0, 5, 1],
///  "agent": {"kind": "scripted", "strategy": "GRIM"}, "trials": 50, "seed": 1}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub treatment: Treatment,
    #[serde(default = "standard_game")]
    pub game: [f64; 4],
    pub agent: AgentConfig,
    /// Second player for actual-play treatments.
    #[serde(default)]
    pub opponent: Option<AgentConfig>,
    #[serde(default = "fifty")]
    pub trials: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "yes")]
    pub lenient: bool,
    #[serde(default)]
    pub timestamps: bool,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let c: ExperimentConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if matches!(self.treatment, Treatment::ActualPlay { .. }) && self.opponent.is_none() {
            return Err(HarnessError::Config("actual play needs an opponent".into()));
        }
        Ok(())
    }

    /// The game actually played, with equal-gains treatments overriding `game`.
    pub fn stage_game(&self) -> StageGame {
        self.treatment.stage_game(StageGame::from_array(self.game))
    }

    pub fn options(&self) -> ElicitOptions {
        ElicitOptions { trials: self.trials, seed: self.seed, lenient: self.lenient, timestamps: self.timestamps }
    }
}
