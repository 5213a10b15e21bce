//! Agents answer rendered prompts with free text.

use std::time::Duration;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use rpd_core::strategy::StrategyJson;
use rpd_core::Strategy;

use crate::error::{HarnessError, Result};
use crate::limit::RateLimit;
use crate::prompt::PromptSpec;

pub trait Agent: Send + Sync {
    fn id(&self) -> String;

    /// Raw response text. `rng` is the per-query random stream, which remote agents ignore.
    fn respond(&self, prompt: &PromptSpec, rng: &mut ChaCha8Rng) -> Result<String>;
}

/// Answers by sampling a fixed strategy for the scenario the prompt describes.
///
/// The prompt's history is read most recent first; a memory-1 strategy looks only at the
/// last round, so in actual play it responds to the last listed round.
#[derive(Clone, Debug)]
pub struct ScriptedAgent {
    pub name: String,
    pub strategy: Strategy,
}

impl ScriptedAgent {
    pub fn new(name: impl Into<String>, strategy: impl Into<Strategy>) -> Self {
        ScriptedAgent { name: name.into(), strategy: strategy.into() }
    }

    pub fn named(name: &str) -> Option<Self> {
        rpd_core::catalog::named::<f64>(name).map(|s| ScriptedAgent::new(name, s))
    }
}

impl Agent for ScriptedAgent {
    fn id(&self) -> String {
        self.name.clone()
    }

    fn respond(&self, prompt: &PromptSpec, rng: &mut ChaCha8Rng) -> Result<String> {
        let sc = rpd_core::simulate::scenario_for(self.strategy.memory(), &prompt.history);
        let p = self.strategy.cooperation(sc).expect("scenario matches the strategy's memory");
        Ok(if rng.random::<f64>() < p { "L" } else { "R" }.into())
    }
}

/// Sampling parameters used for each model family in the original experiments.
pub fn sampling_preset(name: &str) -> Option<Map<String, Value>> {
    let v = match name.to_ascii_lowercase().as_str() {
        "claude" | "llama" => json!({"temperature": 0, "top_p": 1e-8}),
        "gemini" | "gpt-4o" => json!({"seed": 42, "temperature": 0}),
        "gpt-5" => json!({"seed": 42, "reasoning_effort": "high"}),
        _ => return None,
    };
    v.as_object().cloned()
}

fn default_retries() -> u32 {
    3
}

fn default_interval_ms() -> u64 {
    crate::limit::DEFAULT_INTERVAL.as_millis() as u64
}

fn default_timeout_s() -> u64 {
    120
}

fn default_pointer() -> String {
    "/choices/0/message/content".into()
}

/// A chat-completion endpoint. The API key is read from the environment variable named
/// by `api_key_env` and never stored in configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemoteConfig {
    #[serde(default)]
    pub id: Option<String>,
    pub endpoint: String,
    pub model: String,
    pub api_key_env: String,
    /// Sampling parameters from [`sampling_preset`], overridden by `params`.
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default = "default_retries")]
    pub retries: u32,
    #[serde(default = "default_interval_ms")]
    pub rate_limit_ms: u64,
    #[serde(default = "default_timeout_s")]
    pub timeout_s: u64,
    /// JSON pointer to the reply text in the response body.
    #[serde(default = "default_pointer")]
    pub response_pointer: String,
}

pub struct RemoteAgent {
    config: RemoteConfig,
    params: Map<String, Value>,
    key: String,
    http: ureq::Agent,
    limit: RateLimit,
}

impl std::fmt::Debug for RemoteAgent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RemoteAgent").field("config", &self.config).finish_non_exhaustive()
    }
}

impl RemoteAgent {
    pub fn new(config: RemoteConfig) -> Result<Self> {
        let key = std::env::var(&config.api_key_env).map_err(|_| HarnessError::MissingKey(config.api_key_env.clone()))?;
        let mut params = match &config.preset {
            Some(p) => sampling_preset(p).ok_or_else(|| HarnessError::Config(format!("unknown preset {p}")))?,
            None => Map::new(),
        };
        params.extend(config.params.clone());
        let limit = RateLimit::new(Duration::from_millis(config.rate_limit_ms), 1)
            .ok_or_else(|| HarnessError::Config("rate_limit_ms must be positive".into()))?;
        let http: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(config.timeout_s)))
            .build()
            .into();
        Ok(RemoteAgent { config, params, key, http, limit })
    }

    pub fn request_body(&self, prompt: &PromptSpec) -> Value {
        let mut body = Map::new();
        body.insert("model".into(), json!(self.config.model));
        body.insert(
            "messages".into(),
            json!([
                {"role": "system", "content": prompt.system},
                {"role": "user", "content": prompt.rendered},
            ]),
        );
        body.extend(self.params.clone());
        Value::Object(body)
    }

    fn send(&self, body: &Value) -> Result<String> {
        self.limit.acquire();
        let reply: Value = self
            .http
            .post(&self.config.endpoint)
            .header("Authorization", &format!("Bearer {}", self.key))
            .send_json(body)
            .map_err(|e| HarnessError::Transport(e.to_string()))?
            .body_mut()
            .read_json()
            .map_err(|e| HarnessError::Transport(e.to_string()))?;
        reply
            .pointer(&self.config.response_pointer)
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| HarnessError::Response(format!("no text at {}", self.config.response_pointer)))
    }
}

impl Agent for RemoteAgent {
    fn id(&self) -> String {
        self.config.id.clone().unwrap_or_else(|| self.config.model.clone())
    }

    fn respond(&self, prompt: &PromptSpec, _rng: &mut ChaCha8Rng) -> Result<String> {
        let body = self.request_body(prompt);
        let mut last = None;
        for attempt in 0..=self.config.retries {
            if attempt > 0 {
                std::thread::sleep(Duration::from_millis(500 << attempt.min(6)));
            }
            match self.send(&body) {
                Ok(text) => return Ok(text),
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StrategySpec {
    Named(String),
    Explicit(StrategyJson),
}

impl StrategySpec {
    pub fn resolve(&self) -> Result<Strategy> {
        match self {
            StrategySpec::Named(n) => rpd_core::catalog::named::<f64>(n)
                .ok_or_else(|| HarnessError::Config(format!("unknown strategy {n}"))),
            StrategySpec::Explicit(j) => Ok(Strategy::try_from(j.clone())?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AgentConfig {
    Scripted {
        #[serde(default)]
        name: Option<String>,
        strategy: StrategySpec,
    },
    Remote(RemoteConfig),
}

impl AgentConfig {
    pub fn build(&self) -> Result<Box<dyn Agent>> {
        match self {
            AgentConfig::Scripted { name, strategy } => {
                let s = strategy.resolve()?;
                let name = name.clone().unwrap_or_else(|| match strategy {
                    StrategySpec::Named(n) => n.clone(),
                    StrategySpec::Explicit(_) => "scripted".into(),
                });
                Ok(Box::new(ScriptedAgent::new(name, s)))
            }
            AgentConfig::Remote(c) => Ok(Box::new(RemoteAgent::new(c.clone())?)),
        }
    }
}
