//! Prompt rendering, agents, elicitation runs and actual play.

pub mod agent;
pub mod config;
pub mod elicit;
pub mod error;
pub mod limit;
pub mod parse;
pub mod play;
pub mod prompt;

pub use agent::{Agent, AgentConfig, RemoteAgent, RemoteConfig, ScriptedAgent};
pub use config::ExperimentConfig;
pub use elicit::{run_elicitation, ElicitOptions, Elicitation, ExperimentRecord};
pub use error::{HarnessError, Result};
pub use parse::ParsedAction;
pub use play::{run_actual_play, Transcript};
pub use prompt::{render_prompt, render_scenario, Ending, PromptSpec, Treatment};
