//! Recompute published tables from bundled inputs and compare cell by cell.

use serde::Serialize;

use rpd_core::classify::{classify, rival_condition, DEFAULT_TOL};
use rpd_core::inference::{infer_strategy, round_display, wilson_interval, ScenarioCounts, Z95};
use rpd_core::tournament::{aggregate_tournaments, run_tournament};
use rpd_core::{Memory2Strategy, StageGame, Strategy, TournamentResult};

use crate::data::{self, AggregateData, NashTable, StrategyTable, TournamentData};
use crate::CliError;

/// Absolute tolerance on printed payoffs.
pub const PAYOFF_TOL: f64 = 5e-4;
/// Absolute tolerance, in percentage points, on printed beat percentages.
pub const BEAT_TOL: f64 = 0.3;
pub const BEAT_SAMPLES: usize = 1_000_000;
pub const BEAT_SEED: u64 = 1;
/// Stopping probability standing in for the infinitely repeated game in memory-2 checks.
pub const MEMORY2_W: f64 = 1e-10;
/// Gains a deviant collects before play settles are worth O(w) per round, far below the
/// default tolerance at [`MEMORY2_W`]; this still sits well above rounding noise.
pub const MEMORY2_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub item: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
    /// Reported but not counted: the printed value follows a judgement call.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub diagnostic: bool,
}

impl Check {
    pub fn status(&self) -> &'static str {
        match (self.pass, self.diagnostic) {
            (true, _) => "pass",
            (false, true) => "differs",
            (false, false) => "FAIL",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub id: String,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(id: &str) -> Self {
        Report { id: id.into(), checks: Vec::new() }
    }

    fn push(&mut self, item: impl Into<String>, expected: impl Into<String>, got: impl Into<String>, pass: bool) {
        self.checks.push(Check { item: item.into(), expected: expected.into(), got: got.into(), pass, diagnostic: false });
    }

    fn note(&mut self, item: impl Into<String>, expected: impl Into<String>, got: impl Into<String>, pass: bool) {
        self.checks.push(Check { item: item.into(), expected: expected.into(), got: got.into(), pass, diagnostic: true });
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass && !c.diagnostic)
    }

    /// Passing and total counted checks.
    pub fn count(&self) -> (usize, usize) {
        let counted = self.checks.iter().filter(|c| !c.diagnostic);
        let (pass, total) = counted.fold((0, 0), |(p, t), c| (p + c.pass as usize, t + 1));
        (pass, total)
    }

    /// Keeps only checks whose item starts with `prefix`.
    pub fn only(mut self, prefix: &str) -> Self {
        self.checks.retain(|c| c.item.starts_with(prefix));
        self
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub samples: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { samples: BEAT_SAMPLES, seed: BEAT_SEED }
    }
}

fn decimals(printed: &str) -> u32 {
    printed.split_once('.').map_or(0, |(_, f)| f.len() as u32)
}

/// A value matches a printed number if it agrees within [`PAYOFF_TOL`] either as is or
/// after rounding to the printed number of decimals.
pub fn matches_printed(v: f64, printed: &str) -> bool {
    let Ok(p) = printed.parse::<f64>() else { return false };
    (round_display(v, decimals(printed)) - p).abs() <= PAYOFF_TOL || (v - p).abs() <= PAYOFF_TOL
}

/// Printed beat percentages: "<0.01", "100" or a number within [`BEAT_TOL`].
pub fn matches_beat(v: f64, printed: &str) -> bool {
    match printed {
        "<0.01" => v < 0.01 + BEAT_TOL,
        "100" | "100.0" => v >= 100.0 - 0.5,
        p => p.parse::<f64>().is_ok_and(|p| (v - p).abs() <= BEAT_TOL),
    }
}

pub fn table_ids() -> Vec<String> {
    let t = data::tournaments();
    let mut ids: Vec<String> = data::strategy_tables().into_iter().map(|s| s.id).collect();
    ids.extend(t.tournaments.into_iter().map(|x| x.id));
    ids.extend(t.aggregates.into_iter().map(|x| x.id));
    ids.extend(data::nash_tables().into_iter().map(|x| x.id));
    ids.extend(["memory2".to_string(), "oneshot".to_string()]);
    ids
}

pub fn slug(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        if c.is_ascii_alphanumeric() || c == '.' {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('-') && !out.is_empty() {
            out.push('-');
        }
    }
    out.trim_end_matches(['-', '.']).to_string()
}

/// Recomputes a table. `S29-claude-baseline` style ids select one model and one row of a
/// Nash table.
pub fn reproduce(id: &str, opts: &Options) -> Result<Report, CliError> {
    let data = data::tournaments();
    if let Some(s) = data::strategy_tables().into_iter().find(|s| s.id == id) {
        return Ok(strategy_table(&s));
    }
    if let Some(t) = data.tournaments.iter().find(|t| t.id == id) {
        return tournament(t);
    }
    if let Some(a) = data.aggregates.iter().find(|a| a.id == id) {
        return aggregate(a, &data.tournaments);
    }
    match id {
        "memory2" => return memory2(),
        "oneshot" => return one_shot(),
        _ => {}
    }
    let tables = data::nash_tables();
    let (table_id, filter) = id.split_once('-').unwrap_or((id, ""));
    if let Some(n) = tables.iter().find(|n| n.id == table_id) {
        let (model, row) = match filter.split_once('-') {
            Some((m, r)) => (Some(m), Some(r)),
            None if filter.is_empty() => (None, None),
            None => (Some(filter), None),
        };
        let r = nash_table(n, &data.tournaments, model, row, opts)?;
        if r.checks.is_empty() {
            return Err(CliError::Usage(format!("nothing in {table_id} matches {filter}")));
        }
        return Ok(r);
    }
    Err(CliError::Usage(format!("unknown table id {id}; try `reproduce list`")))
}

fn strategy_table(s: &StrategyTable) -> Report {
    let mut r = Report::new(&s.id);
    for row in &s.rows {
        let counts: Vec<u32> = row.cells.iter().map(|c| (c[0] * 50.0).round() as u32).collect();
        let inferred = ScenarioCounts::uniform(1, &counts, 50).and_then(|c| infer_strategy::<f64>(&c));
        let Ok(inferred) = inferred else {
            r.push(format!("{} counts", row.name), "valid", "invalid", false);
            continue;
        };
        let entries = match inferred.strategy {
            Strategy::M1(m) => m.entries().to_vec(),
            Strategy::M2(m) => m.entries().to_vec(),
        };
        for (k, (cell, (e, ci))) in row.cells.iter().zip(entries.iter().zip(&inferred.intervals)).enumerate() {
            let got = [round_display(*e, 2), round_display(ci.lower, 2), round_display(ci.upper, 2)];
            let pass = got.iter().zip(cell).all(|(a, b)| (a - b).abs() < 1e-9);
            r.push(
                format!("interval {} {}", row.name, SCENARIOS[k]),
                format!("{:.2} [{:.2}, {:.2}]", cell[0], cell[1], cell[2]),
                format!("{:.2} [{:.2}, {:.2}]", got[0], got[1], got[2]),
                pass,
            );
        }
        let label = inferred.label.to_string();
        r.note(format!("label {}", row.name), row.label.clone(), label.clone(), label == row.label);
    }
    r
}

const SCENARIOS: [&str; 5] = ["R1", "LL", "LR", "RL", "RR"];

fn roster(t: &TournamentData) -> Vec<(String, Strategy)> {
    t.roster.iter().map(|n| (n.clone(), t.strategy(n).into())).collect()
}

pub fn compute_tournament(t: &TournamentData) -> Result<TournamentResult, CliError> {
    Ok(run_tournament(&roster(t), &t.stage_game(), t.w, true)?)
}

fn compare_result(r: &mut Report, got: &TournamentResult, matrix: &[Vec<String>], sums: &[String], ranks: &[usize]) {
    for (i, row) in matrix.iter().enumerate() {
        for (j, printed) in row.iter().enumerate() {
            let v = got.matrix[i][j];
            r.push(
                format!("matrix {} vs {}", got.names[i], got.names[j]),
                printed.clone(),
                format!("{v:.6}"),
                matches_printed(v, printed),
            );
        }
    }
    for (i, printed) in sums.iter().enumerate() {
        let v = got.row_sums[i];
        r.push(format!("row sum {}", got.names[i]), printed.clone(), format!("{v:.6}"), matches_printed(v, printed));
    }
    for (i, want) in ranks.iter().enumerate() {
        let have = got.ranks[i];
        r.push(format!("rank {}", got.names[i]), want.to_string(), have.to_string(), have == *want);
    }
}

fn tournament(t: &TournamentData) -> Result<Report, CliError> {
    let mut r = Report::new(&t.id);
    let got = compute_tournament(t)?;
    compare_result(&mut r, &got, &t.matrix, &t.row_sums, &t.ranks);
    Ok(r)
}

fn aggregate(a: &AggregateData, all: &[TournamentData]) -> Result<Report, CliError> {
    let mut r = Report::new(&a.id);
    let parts = a
        .members
        .iter()
        .map(|m| {
            let t = all.iter().find(|t| &t.id == m).ok_or_else(|| CliError::Usage(format!("missing {m}")))?;
            compute_tournament(t)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let got = aggregate_tournaments(&parts)?;
    compare_result(&mut r, &got, &a.matrix, &a.row_sums, &a.ranks);
    Ok(r)
}

fn nash_table(
    n: &NashTable,
    all: &[TournamentData],
    model: Option<&str>,
    row_filter: Option<&str>,
    opts: &Options,
) -> Result<Report, CliError> {
    let mut r = Report::new(&n.id);
    for row in &n.rows {
        let t = all
            .iter()
            .find(|t| t.id == row.tournament)
            .ok_or_else(|| CliError::Usage(format!("missing {}", row.tournament)))?;
        let row_slug = match t.treatment {
            data::TreatmentData::Baseline => "baseline".to_string(),
            _ => slug(&row.label),
        };
        if row_filter.is_some_and(|f| f != row_slug) {
            continue;
        }
        let w = n.w.unwrap_or(t.w);
        let g = t.stage_game();
        for (name, cell) in t.roster.iter().zip(&row.cells) {
            if model.is_some_and(|m| !name.eq_ignore_ascii_case(m)) {
                continue;
            }
            let sigma: Strategy = t.strategy(name).into();
            let c = classify(&sigma, &g, w, DEFAULT_TOL, opts.samples, opts.seed)?;
            let at = format!("{} | {}", row.label, name);
            r.push(format!("nash {at}"), cell.nash.to_string(), c.is_nash.to_string(), c.is_nash == cell.nash);
            r.push(format!("partner {at}"), cell.partner.to_string(), c.is_partner.to_string(), c.is_partner == cell.partner);
            r.push(format!("rival {at}"), cell.rival.to_string(), c.is_rival.to_string(), c.is_rival == cell.rival);
            if let Some(printed) = &cell.beat {
                match c.beat_percentage {
                    Some(b) => r.push(format!("beat {at}"), printed.clone(), format!("{b:.2}"), matches_beat(b, printed)),
                    None => r.push(format!("beat {at}"), printed.clone(), "Nash".to_string(), false),
                }
            }
        }
    }
    Ok(r)
}

pub fn memory2_strategy(name: &str, d: &data::Memory2Data) -> Result<Memory2Strategy, CliError> {
    let counts = ScenarioCounts::uniform(2, &d.counts[name], d.n)?;
    match infer_strategy::<f64>(&counts)?.strategy {
        Strategy::M2(m) => Ok(m),
        Strategy::M1(_) => unreachable!("memory-2 counts give a memory-2 strategy"),
    }
}

/// Intervals of the memory-2 table, then the equilibrium claims for the infinitely
/// repeated game: three Nash partners and two strategies that are neither Nash,
/// partner nor rival.
fn memory2() -> Result<Report, CliError> {
    let d = data::memory2();
    let mut r = Report::new("memory2");
    for name in &d.roster {
        for (k, (&l, printed)) in d.counts[name].iter().zip(&d.intervals[name]).enumerate() {
            let ci = wilson_interval::<f64>(l, d.n, Z95)?;
            let got = [round_display(l as f64 / d.n as f64, 2), round_display(ci.lower, 2), round_display(ci.upper, 2)];
            let pass = got.iter().zip(printed).all(|(a, b)| (a - b).abs() < 1e-9);
            r.push(format!("interval {name} #{k}"), format!("{printed:?}"), format!("{got:?}"), pass);
        }
    }
    let g = StageGame::standard();
    for name in &d.roster {
        let sigma: Strategy = memory2_strategy(name, &d)?.into();
        let nash = rpd_core::classify::is_nash(&sigma, &g, MEMORY2_W, MEMORY2_TOL)?;
        let partner = rpd_core::classify::partner_condition(&nash, &g, MEMORY2_TOL);
        let cooperative = matches!(name.as_str(), "Claude" | "Gpt-4o" | "Gpt-5");
        r.push(format!("nash {name}"), cooperative.to_string(), nash.is_nash.to_string(), nash.is_nash == cooperative);
        r.push(format!("partner {name}"), cooperative.to_string(), partner.to_string(), partner == cooperative);
        if !cooperative {
            let rival = rival_condition(&sigma, &g, MEMORY2_W, MEMORY2_TOL)?;
            r.push(format!("rival {name}"), "false", rival.to_string(), !rival);
        }
    }
    Ok(r)
}

fn one_shot() -> Result<Report, CliError> {
    let d = data::one_shot();
    let mut r = Report::new("oneshot");
    for name in &d.roster {
        let l = d.counts[name];
        let ci = wilson_interval::<f64>(l, d.n, Z95)?;
        let got = [round_display(l as f64 / d.n as f64, 2), round_display(ci.lower, 2), round_display(ci.upper, 2)];
        let printed = d.intervals[name];
        let pass = got.iter().zip(&printed).all(|(a, b)| (a - b).abs() < 1e-9);
        r.push(format!("interval {name}"), format!("{printed:?}"), format!("{got:?}"), pass);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_number_matching() {
        assert!(matches_printed(2.99996, "3."));
        assert!(matches_printed(3.00000085, "3.00000085"));
        assert!(matches_printed(14.55123, "14.5512"));
        assert!(!matches_printed(3.0111, "3.0011"));
        assert!(!matches_printed(1.0, "x"));
    }

    #[test]
    fn beat_matching() {
        assert!(matches_beat(0.0, "<0.01"));
        assert!(matches_beat(0.2, "<0.01"));
        assert!(!matches_beat(0.5, "<0.01"));
        assert!(matches_beat(99.7, "100"));
        assert!(matches_beat(2.2, "2.01"));
        assert!(!matches_beat(2.4, "2.01"));
    }

    #[test]
    fn slugs() {
        assert_eq!(slug("Try to get more points than the other agent."), "try-to-get-more-points-than-the-other-agent");
        assert_eq!(slug("w=0.01"), "w-0.01");
    }

    #[test]
    fn ids_are_known() {
        let ids = table_ids();
        for id in ["S12", "FigS1B", "FigS12A", "S29", "memory2"] {
            assert!(ids.iter().any(|i| i == id), "{id}");
        }
        assert!(reproduce("nope", &Options::default()).is_err());
    }

    #[test]
    fn baseline_table_and_tournament() {
        let o = Options::default();
        assert!(reproduce("S12", &o).unwrap().only("interval").passed());
        assert!(reproduce("FigS1B", &o).unwrap().passed());
    }

    #[test]
    fn labels_mostly_agree_with_printed_ones() {
        let (mut same, mut all) = (0, 0);
        for t in data::strategy_tables() {
            let r = strategy_table(&t);
            assert!(r.passed(), "{}", t.id);
            for c in r.checks.iter().filter(|c| c.diagnostic) {
                all += 1;
                same += c.pass as usize;
            }
        }
        assert_eq!(all, 125);
        assert!(same * 10 >= all * 9, "{same} of {all}");
    }
}
