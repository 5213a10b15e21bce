//! Repeated single-turn queries per scenario, tallied into counts.

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rpd_core::inference::{Count, ScenarioCounts};
use rpd_core::StageGame;

use crate::agent::Agent;
use crate::error::{HarnessError, Result};
use crate::parse::{parse_response, ParsedAction};
use crate::prompt::{render_scenario, Treatment};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub treatment: String,
    pub scenario: String,
    pub agent: String,
    pub trial: u32,
    pub response: Option<String>,
    pub parsed: ParsedAction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug)]
pub struct ElicitOptions {
    pub trials: u32,
    pub seed: u64,
    /// Fall back to the first standalone L/R token when the reply is not a bare letter.
    pub lenient: bool,
    /// Stamp records with wall-clock time; off for replayable logs.
    pub timestamps: bool,
}

impl Default for ElicitOptions {
    fn default() -> Self {
        ElicitOptions { trials: 50, seed: 0, lenient: true, timestamps: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioTally {
    pub scenario: String,
    pub l: u32,
    /// Parsed responses only.
    pub n: u32,
    pub unparseable: u32,
    pub failed: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Elicitation {
    pub treatment: Treatment,
    pub game: [f64; 4],
    pub agent: String,
    pub tallies: Vec<ScenarioTally>,
    #[serde(skip)]
    pub records: Vec<ExperimentRecord>,
}

impl Elicitation {
    /// Counts for strategy inference; fails for one-shot runs or scenarios with no parsed reply.
    pub fn scenario_counts(&self) -> Result<ScenarioCounts> {
        let memory = self
            .treatment
            .memory()
            .ok_or_else(|| HarnessError::Treatment("no strategy to infer from this treatment".into()))?;
        let counts = self.tallies.iter().map(|t| Count { l: t.l, n: t.n }).collect();
        Ok(ScenarioCounts::new(memory, counts)?)
    }

    pub fn write_records(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        for r in &self.records {
            serde_json::to_writer(&mut f, r)?;
            f.write_all(b"\n")?;
        }
        f.flush()?;
        Ok(())
    }
}

pub fn read_records(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let text = std::fs::read_to_string(path)?;
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| Ok(serde_json::from_str(l)?)).collect()
}

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

/// Random stream for one query, independent of scheduling order.
pub fn query_rng(seed: u64, scenario: usize, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((scenario as u64) << 32) | trial as u64);
    rng
}

/// Queries `agent` `opts.trials` times per scenario of the treatment.
///
/// Records are ordered by scenario and trial index. Unparseable replies and transport
/// failures are excluded from the counts and tallied separately.
pub fn run_elicitation(t: &Treatment, g: &StageGame, agent: &dyn Agent, opts: &ElicitOptions) -> Result<Elicitation> {
    if opts.trials == 0 {
        return Err(HarnessError::Config("trials must be at least 1".into()));
    }
    let name = t.name();
    let id = agent.id();
    let mut tallies = Vec::new();
    let mut records = Vec::new();
    for (si, sc) in t.scenarios()?.into_iter().enumerate() {
        let prompt = render_scenario(t, g, sc)?;
        let batch: Vec<ExperimentRecord> = (0..opts.trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = query_rng(opts.seed, si, trial);
                let (response, parsed, error) = match agent.respond(&prompt, &mut rng) {
                    Ok(text) => {
                        let parsed = parse_response(&text, opts.lenient);
                        (Some(text), parsed, None)
                    }
                    Err(e) => (None, ParsedAction::Failed, Some(e.to_string())),
                };
                ExperimentRecord {
                    treatment: name.clone(),
                    scenario: prompt.scenario.clone(),
                    agent: id.clone(),
                    trial,
                    response,
                    parsed,
                    error,
                    timestamp_ms: opts.timestamps.then(now_ms),
                }
            })
            .collect();
        let count = |p: ParsedAction| batch.iter().filter(|r| r.parsed == p).count() as u32;
        let l = count(ParsedAction::L);
        tallies.push(ScenarioTally {
            scenario: prompt.scenario.clone(),
            l,
            n: l + count(ParsedAction::R),
            unparseable: count(ParsedAction::Unparseable),
            failed: count(ParsedAction::Failed),
        });
        records.extend(batch);
    }
    Ok(Elicitation { treatment: t.clone(), game: g.to_f64(), agent: id, tallies, records })
}
