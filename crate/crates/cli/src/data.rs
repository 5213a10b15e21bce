//! Published tables bundled with the binary.

use std::collections::BTreeMap;

use serde::Deserialize;

use rpd_core::{Memory1Strategy, StageGame};

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreatmentData {
    Baseline,
    Framing { text: String },
    Stopping { w: f64 },
    EqualGains { x: f64 },
}

#[derive(Clone, Debug, Deserialize)]
pub struct TournamentData {
    pub id: String,
    pub treatment: TreatmentData,
    pub game: [f64; 4],
    pub w: f64,
    pub roster: Vec<String>,
    pub strategies: BTreeMap<String, [f64; 5]>,
    pub labels: BTreeMap<String, String>,
    /// Printed strings, so the printed precision is known.
    pub matrix: Vec<Vec<String>>,
    pub row_sums: Vec<String>,
    pub ranks: Vec<usize>,
}

impl TournamentData {
    pub fn stage_game(&self) -> StageGame {
        StageGame::from_array(self.game)
    }

    pub fn strategy(&self, name: &str) -> Memory1Strategy {
        Memory1Strategy::from_f64(self.strategies[name]).expect("bundled strategies are valid")
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct AggregateData {
    pub id: String,
    pub members: Vec<String>,
    pub roster: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub row_sums: Vec<String>,
    pub ranks: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Tournaments {
    pub tournaments: Vec<TournamentData>,
    pub aggregates: Vec<AggregateData>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct StrategyRow {
    pub name: String,
    /// `[point, lower, upper]` per scenario, as printed.
    pub cells: Vec<[f64; 3]>,
    pub label: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct StrategyTable {
    pub id: String,
    pub tournament: String,
    pub rows: Vec<StrategyRow>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct NashCell {
    pub nash: bool,
    #[serde(default)]
    pub beat: Option<String>,
    pub partner: bool,
    pub rival: bool,
}

#[derive(Clone, Debug, Deserialize)]
pub struct NashRow {
    pub label: String,
    pub tournament: String,
    pub cells: Vec<NashCell>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct NashTable {
    pub id: String,
    /// `None` when each row takes the stopping probability of its tournament.
    pub w: Option<f64>,
    pub rows: Vec<NashRow>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Memory2Data {
    pub roster: Vec<String>,
    pub n: u32,
    pub counts: BTreeMap<String, Vec<u32>>,
    pub intervals: BTreeMap<String, Vec<[f64; 3]>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct OneShotData {
    pub roster: Vec<String>,
    pub n: u32,
    pub counts: BTreeMap<String, u32>,
    pub intervals: BTreeMap<String, [f64; 3]>,
    pub labels: BTreeMap<String, String>,
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> T {
    serde_json::from_str(text).expect("bundled data is valid JSON")
}

pub fn tournaments() -> Tournaments {
    parse(include_str!("../data/tournaments.json"))
}

pub fn strategy_tables() -> Vec<StrategyTable> {
    parse(include_str!("../data/strategy_tables.json"))
}

pub fn nash_tables() -> Vec<NashTable> {
    parse(include_str!("../data/nash.json"))
}

pub fn memory2() -> Memory2Data {
    parse(include_str!("../data/memory2.json"))
}

pub fn one_shot() -> OneShotData {
    parse(include_str!("../data/oneshot.json"))
}
