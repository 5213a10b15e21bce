//! Argument definitions and subcommand bodies.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use rpd_core::classify::{classify, payoff_region, DEFAULT_TOL};
use rpd_core::inference::{infer_strategy, ScenarioCounts};
use rpd_core::tournament::run_tournament;
use rpd_core::{Scenario, StageGame, Strategy};
use rpd_harness::agent::StrategySpec;
use rpd_harness::{run_actual_play, run_elicitation, Elicitation, ExperimentConfig, Treatment};

use crate::output::{emit, num, Format, Table};
use crate::reproduce::{self, Options};
use crate::spec::{check_w, parse_game, parse_strategy};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "rpd", version, about = "Exact payoffs, equilibrium checks and experiments for the repeated Prisoner's Dilemma")]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    /// Payoffs a_LL,a_LR,a_RL,a_RR.
    #[arg(long, default_value = "3,0,5,1")]
    pub game: String,
    /// Stopping probability; 0 is the limit of means.
    #[arg(long, default_value_t = 0.01)]
    pub w: f64,
    /// Use the equal-gains game (10, 0, 10+x, x) instead of --game.
    #[arg(long)]
    pub x: Option<f64>,
}

impl GameArgs {
    fn resolve(&self) -> Result<(StageGame, f64), CliError> {
        check_w(self.w)?;
        Ok((parse_game(&self.game, self.x)?, self.w))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expected per-round payoffs of two strategies against each other.
    Payoff {
        /// Player 1: a catalog name, GTFT:q, or comma-separated probabilities.
        #[arg(long)]
        q: String,
        /// Player 2.
        #[arg(long)]
        p: String,
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 1)]
        memory: u8,
    },
    /// Nash, partner and rival flags, with a beat percentage for non-equilibria.
    Classify {
        #[arg(long)]
        strategy: String,
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 1)]
        memory: u8,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = reproduce::BEAT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = reproduce::BEAT_SEED)]
        seed: u64,
    },
    /// Payoff pairs against random and deterministic opponents, as CSV by default.
    Region {
        #[arg(long)]
        strategy: String,
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Strategy estimate, Wilson intervals and label from L-counts.
    Infer {
        /// L-counts per scenario, comma-separated (5 or 21 values).
        #[arg(long, conflicts_with = "input")]
        counts: Option<String>,
        /// Trials per scenario for --counts.
        #[arg(long, default_value_t = 50)]
        trials: u32,
        /// Summary JSON written by `elicit`.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Round-robin tournament.
    Tournament {
        /// Entries NAME=STRATEGY, repeatable.
        #[arg(long = "roster", required_unless_present = "config")]
        roster: Vec<String>,
        /// JSON file {"roster": [{"name", "strategy"}], "game", "w", "include_self"}.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        exclude_self: bool,
    },
    /// Run an elicitation experiment from a config file.
    Elicit {
        #[arg(long)]
        config: PathBuf,
        /// Directory for records.jsonl and summary.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Play a full game between two agents from a config file.
    Play {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Recompute a published table; `list` shows ids, `all` runs everything.
    Reproduce {
        id: String,
        #[arg(long, default_value_t = reproduce::BEAT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = reproduce::BEAT_SEED)]
        seed: u64,
    },
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let f = cli.format;
    match &cli.command {
        Command::Payoff { q, p, game, memory } => payoff(out, f, q, p, game, *memory),
        Command::Classify { strategy, game, memory, tol, samples, seed } => {
            classify_cmd(out, f, strategy, game, *memory, *tol, *samples, *seed)
        }
        Command::Region { strategy, game, samples, seed } => region(out, f, strategy, game, *samples, *seed),
        Command::Infer { counts, trials, input } => infer(out, f, counts.as_deref(), *trials, input.as_ref()),
        Command::Tournament { roster, config, game, exclude_self } => {
            tournament(out, f, roster, config.as_ref(), game, *exclude_self)
        }
        Command::Elicit { config, out: dir, trials, seed } => elicit(out, f, config, dir.as_ref(), *trials, *seed),
        Command::Play { config, seed } => play(out, f, config, *seed),
        Command::Reproduce { id, samples, seed } => reproduce_cmd(out, f, id, Options { samples: *samples, seed: *seed }),
    }
}

fn payoff(out: &mut dyn Write, f: Format, q: &str, p: &str, game: &GameArgs, memory: u8) -> Result<(), CliError> {
    let (g, w) = game.resolve()?;
    let (q, p) = (parse_strategy(q, memory)?, parse_strategy(p, memory)?);
    let a = rpd_core::classify::pair_payoff(&q, &p, &g, w)?;
    let b = rpd_core::classify::pair_payoff(&p, &q, &g, w)?;
    let mut t = Table::new(["player", "payoff"]);
    t.row(["q".to_string(), num(a)]);
    t.row(["p".to_string(), num(b)]);
    emit(out, f, &t, &json!({"game": g.to_f64(), "w": w, "q": a, "p": b}))
}

#[allow(clippy::too_many_arguments)]
fn classify_cmd(
    out: &mut dyn Write,
    f: Format,
    strategy: &str,
    game: &GameArgs,
    memory: u8,
    tol: f64,
    samples: usize,
    seed: u64,
) -> Result<(), CliError> {
    let (g, w) = game.resolve()?;
    let sigma = parse_strategy(strategy, memory)?;
    let c = classify(&sigma, &g, w, tol, samples, seed)?;
    let pd = g.is_prisoners_dilemma();
    let report = json!({
        "game": c.game,
        "w": c.w,
        "prisoners_dilemma": pd,
        "is_nash": c.is_nash,
        "is_partner": c.is_partner,
        "is_rival": c.is_rival,
        "beat_percentage": c.beat_percentage,
        "self_payoff": c.self_payoff,
        "worst_deviation": {"strategy": c.worst_deviation.strategy, "payoff": c.worst_deviation.payoff},
    });
    let mut t = Table::new(["property", "value"]);
    let yes = |b: bool| if b { "yes" } else { "no" }.to_string();
    t.row(["nash".to_string(), yes(c.is_nash)]);
    t.row(["partner".to_string(), yes(c.is_partner)]);
    t.row(["rival".to_string(), yes(c.is_rival)]);
    if let Some(b) = c.beat_percentage {
        t.row(["beat %".to_string(), format!("{b:.2}")]);
    }
    t.row(["self payoff".to_string(), num(c.self_payoff)]);
    t.row(["best deviation payoff".to_string(), num(c.worst_deviation.payoff)]);
    if !pd {
        t.row(["note".to_string(), "not a Prisoner's Dilemma; partner and rival are unchecked conditions".to_string()]);
    }
    emit(out, f, &t, &report)
}

fn region(out: &mut dyn Write, f: Format, strategy: &str, game: &GameArgs, samples: usize, seed: u64) -> Result<(), CliError> {
    let (g, w) = game.resolve()?;
    let sigma = match parse_strategy(strategy, 1)? {
        Strategy::M1(m) => m,
        Strategy::M2(_) => return Err(CliError::Usage("region needs a memory-1 strategy".into())),
    };
    let r = payoff_region(&sigma, &g, w, samples, seed)?;
    let mut t = Table::new(["opp_payoff", "self_payoff"]);
    for (a, b) in &r.points {
        t.row([a.to_string(), b.to_string()]);
    }
    // the region is a point cloud; CSV is the natural default even for table output
    let f = if f == Format::Table { Format::Csv } else { f };
    emit(out, f, &t, &r)
}

fn strategy_row(name: &str, counts: &ScenarioCounts) -> Result<(Vec<String>, serde_json::Value), CliError> {
    let s = infer_strategy::<f64>(counts)?;
    let mut row = vec![name.to_string()];
    for ci in &s.intervals {
        row.push(format!("{:.2} [{:.2}, {:.2}]", ci.point, ci.lower, ci.upper));
    }
    row.push(s.label.to_string());
    let json = json!({"name": name, "strategy": s.strategy, "intervals": s.intervals, "label": s.label.to_string()});
    Ok((row, json))
}

fn infer(out: &mut dyn Write, f: Format, counts: Option<&str>, trials: u32, input: Option<&PathBuf>) -> Result<(), CliError> {
    let (name, counts) = match (counts, input) {
        (Some(c), _) => {
            let l = c
                .split(',')
                .map(|v| v.trim().parse::<u32>().map_err(|_| CliError::Usage(format!("bad count {v:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let memory = match l.len() {
                5 => 1,
                21 => 2,
                n => return Err(CliError::Usage(format!("expected 5 or 21 counts, got {n}"))),
            };
            ("counts".to_string(), ScenarioCounts::uniform(memory, &l, trials)?)
        }
        (None, Some(path)) => {
            let e: Elicitation = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            (e.agent.clone(), e.scenario_counts()?)
        }
        (None, None) => return Err(CliError::Usage("give --counts or --input".into())),
    };
    let mut t = Table::new(std::iter::once("name".to_string()).chain(counts.scenarios().iter().map(Scenario::id)).chain(["label".to_string()]));
    let (row, json) = strategy_row(&name, &counts)?;
    t.row(row);
    emit(out, f, &t, &json)
}

#[derive(Debug, Deserialize)]
struct RosterEntry {
    name: String,
    strategy: StrategySpec,
}

#[derive(Debug, Deserialize)]
struct TournamentConfig {
    roster: Vec<RosterEntry>,
    #[serde(default)]
    game: Option<[f64; 4]>,
    #[serde(default)]
    w: Option<f64>,
    #[serde(default)]
    include_self: Option<bool>,
}

#[derive(Serialize)]
struct TournamentSummary<'a> {
    names: &'a [String],
    matrix: &'a [Vec<f64>],
    row_sums: &'a [f64],
    ranks: &'a [usize],
    include_self: bool,
}

fn tournament(
    out: &mut dyn Write,
    f: Format,
    roster: &[String],
    config: Option<&PathBuf>,
    game: &GameArgs,
    exclude_self: bool,
) -> Result<(), CliError> {
    let (mut g, mut w) = game.resolve()?;
    let mut include_self = !exclude_self;
    let mut entries: Vec<(String, Strategy)> = Vec::new();
    if let Some(path) = config {
        let c: TournamentConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if let Some(a) = c.game {
            g = StageGame::from_array(a);
        }
        if let Some(v) = c.w {
            check_w(v)?;
            w = v;
        }
        include_self = c.include_self.unwrap_or(include_self);
        for e in c.roster {
            let s = e.strategy.resolve()?;
            entries.push((e.name, s));
        }
    }
    for r in roster {
        let (name, s) = r.split_once('=').ok_or_else(|| CliError::Usage(format!("expected NAME=STRATEGY, got {r}")))?;
        let parsed = parse_strategy(s, 1).or_else(|_| parse_strategy(s, 2))?;
        entries.push((name.to_string(), parsed));
    }
    if entries.is_empty() {
        return Err(CliError::Usage("empty roster".into()));
    }
    let res = run_tournament(&entries, &g, w, include_self)?;
    let mut t = Table::new(
        std::iter::once(String::new())
            .chain(res.names.iter().cloned())
            .chain(["sum".to_string(), "rank".to_string()]),
    );
    for (i, name) in res.names.iter().enumerate() {
        let mut row = vec![name.clone()];
        row.extend(res.matrix[i].iter().map(|v| num(*v)));
        row.push(num(res.row_sums[i]));
        row.push(res.ranks[i].to_string());
        t.row(row);
    }
    let summary = TournamentSummary {
        names: &res.names,
        matrix: &res.matrix,
        row_sums: &res.row_sums,
        ranks: &res.ranks,
        include_self: res.include_self,
    };
    emit(out, f, &t, &summary)
}

fn tally_table(e: &Elicitation) -> Table {
    let mut t = Table::new(["scenario", "L", "n", "unparseable", "failed"]);
    for s in &e.tallies {
        t.row([s.scenario.clone(), s.l.to_string(), s.n.to_string(), s.unparseable.to_string(), s.failed.to_string()]);
    }
    t
}

fn elicit(
    out: &mut dyn Write,
    f: Format,
    config: &PathBuf,
    dir: Option<&PathBuf>,
    trials: Option<u32>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let mut c = ExperimentConfig::load(config)?;
    if let Some(n) = trials {
        c.trials = n;
    }
    if let Some(s) = seed {
        c.seed = s;
    }
    c.validate()?;
    if matches!(c.treatment, Treatment::ActualPlay { .. }) {
        return Err(CliError::Usage("use `play` for actual-play treatments".into()));
    }
    let agent = c.agent.build()?;
    let e = run_elicitation(&c.treatment, &c.stage_game(), agent.as_ref(), &c.options())?;
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)?;
        e.write_records(&dir.join("records.jsonl"))?;
        std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&e)?)?;
    }
    let mut t = tally_table(&e);
    let mut json = serde_json::to_value(&e)?;
    if let Ok(counts) = e.scenario_counts() {
        let (row, inferred) = strategy_row(&e.agent, &counts)?;
        t.headers.push("estimate".into());
        for (r, cell) in t.rows.iter_mut().zip(&row[1..]) {
            r.push(cell.clone());
        }
        json["inferred"] = inferred;
        emit(out, f, &t, &json)?;
        if f == Format::Table {
            writeln!(out, "\nlabel: {}", row.last().expect("label column"))?;
        }
        return Ok(());
    }
    emit(out, f, &t, &json)
}

fn play(out: &mut dyn Write, f: Format, config: &PathBuf, seed: Option<u64>) -> Result<(), CliError> {
    let c = ExperimentConfig::load(config)?;
    let Treatment::ActualPlay { rounds, ending } = c.treatment else {
        return Err(CliError::Usage("play needs an actual_play treatment".into()));
    };
    let a1 = c.agent.build()?;
    let a2 = c.opponent.as_ref().ok_or_else(|| CliError::Usage("play needs an opponent".into()))?.build()?;
    let tr = run_actual_play(a1.as_ref(), a2.as_ref(), rounds, ending, &c.stage_game(), seed.unwrap_or(c.seed), c.lenient)?;
    let mut t = Table::new(["round", tr.agent1.as_str(), tr.agent2.as_str(), "points 1", "points 2"]);
    for r in &tr.rounds {
        t.row([r.round.to_string(), r.action1.to_string(), r.action2.to_string(), r.points1.to_string(), r.points2.to_string()]);
    }
    t.row(["total".to_string(), String::new(), String::new(), tr.total1.to_string(), tr.total2.to_string()]);
    emit(out, f, &t, &tr)
}

fn reproduce_cmd(out: &mut dyn Write, f: Format, id: &str, opts: Options) -> Result<(), CliError> {
    if id == "list" {
        let mut t = Table::new(["id"]);
        for i in reproduce::table_ids() {
            t.row([i]);
        }
        return emit(out, f, &t, &reproduce::table_ids());
    }
    let ids = if id == "all" { reproduce::table_ids() } else { vec![id.to_string()] };
    let mut t = Table::new(["table", "item", "expected", "got", "result"]);
    let mut reports = Vec::new();
    for i in &ids {
        let r = reproduce::reproduce(i, &opts)?;
        for c in &r.checks {
            t.row([
                r.id.clone(),
                c.item.clone(),
                c.expected.clone(),
                c.got.clone(),
                c.status().to_string(),
            ]);
        }
        reports.push(r);
    }
    emit(out, f, &t, &reports)?;
    let failed: usize = reports.iter().map(|r| r.failures().count()).sum();
    let total: usize = reports.iter().map(|r| r.count().1).sum();
    if failed > 0 {
        return Err(CliError::Mismatch(failed, total));
    }
    Ok(())
}
