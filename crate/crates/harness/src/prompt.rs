//! User prompts for every treatment, rendered line by line.

use serde::{Deserialize, Serialize};

use rpd_core::{Action, Outcome, Scenario, StageGame};

use crate::error::{HarnessError, Result};

pub const SYSTEM_PROMPT: &str = "Follow specified goals";

pub const FRAMINGS: [&str; 9] = [
    "Play like a pro.",
    "Try to get more points than the other agent.",
    "Exploit the other agent as much as possible.",
    "Maximize your own number of points.",
    "Think about winning.",
    "Accumulate many points, but do not exploit.",
    "Maximize your points, keep in mind the other's welfare.",
    "Think about fair outcomes.",
    "Be a saint.",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ending {
    /// "The interaction lasts 10 rounds."
    Exact,
    /// "The interaction lasts at least 10 rounds."
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Treatment {
    Baseline,
    Framing { text: String },
    Stopping { w: f64 },
    EqualGains { x: f64 },
    Memory2,
    OneShot,
    ActualPlay { rounds: u32, ending: Ending },
}

impl Treatment {
    /// Memory order of the elicited strategy; `None` for one-shot and actual play.
    pub fn memory(&self) -> Option<u8> {
        match self {
            Treatment::Memory2 => Some(2),
            Treatment::OneShot | Treatment::ActualPlay { .. } => None,
            _ => Some(1),
        }
    }

    /// Scenarios queried in an elicitation run.
    pub fn scenarios(&self) -> Result<Vec<Scenario>> {
        match self {
            Treatment::OneShot => Ok(vec![Scenario::First]),
            Treatment::ActualPlay { .. } => Err(HarnessError::Treatment("actual play has no fixed scenarios".into())),
            t => Ok(Scenario::for_memory(t.memory().unwrap_or(1))?),
        }
    }

    /// The game this treatment is played under; equal-gains treatments fix it from `x`.
    pub fn stage_game(&self, base: StageGame) -> StageGame {
        match self {
            Treatment::EqualGains { x } => StageGame::equal_gains(*x),
            _ => base,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Treatment::Baseline => "baseline".into(),
            Treatment::Framing { text } => format!("framing: {text}"),
            Treatment::Stopping { w } => format!("stopping w={w}"),
            Treatment::EqualGains { x } => format!("equal gains x={x}"),
            Treatment::Memory2 => "memory-2".into(),
            Treatment::OneShot => "one-shot".into(),
            Treatment::ActualPlay { rounds, ending: Ending::Exact } => format!("actual play, {rounds} rounds"),
            Treatment::ActualPlay { rounds, ending: Ending::AtLeast } => format!("actual play, at least {rounds} rounds"),
        }
    }
}

/// A rendered query together with the inputs that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PromptSpec {
    pub treatment: Treatment,
    pub scenario: String,
    /// Past outcomes from the addressed player's view, most recent first.
    pub history: Vec<Outcome>,
    pub game: [f64; 4],
    pub system: String,
    pub rendered: String,
}

/// Payoffs print in their shortest decimal form, so 3.0 is "3".
pub fn points(v: f64) -> String {
    format!("{v}")
}

fn payoff_lines(g: &StageGame) -> Vec<String> {
    let (ll, lr, rl, rr) = (points(g.a_ll), points(g.a_lr), points(g.a_rl), points(g.a_rr));
    vec![
        format!("If both of you choose L, both of you get {ll} points."),
        format!("If you choose L and the other agent chooses R, you get {lr} points and the other agent gets {rl} points."),
        format!("If you choose R and the other agent chooses L, you get {rl} points and the other agent gets {lr} points."),
        format!("If both of you choose R, both of you get {rr} points."),
    ]
}

const RULES: [&str; 4] = [
    "In each round, you have a choice between two options, L or R.",
    "The other agent also has a choice between L or R.",
    "The two of you will decide without knowing what the other will choose.",
    "Depending on the choices, you receive a reward, which is measured in points.",
];

const ASK: [&str; 2] = ["Do you choose L or R? Give only the character as output.", "Give no explanation."];

fn header(second: &[String], g: &StageGame) -> Vec<String> {
    let mut out = vec!["You are in an interaction with another agent.".to_string()];
    out.extend(second.iter().cloned());
    out.extend(RULES.iter().map(|s| s.to_string()));
    out.extend(payoff_lines(g));
    out.push("Your final reward is the total number of points you accumulate in all rounds.".into());
    out
}

fn chose(a: Action) -> &'static str {
    match a {
        Action::L => "L",
        Action::R => "R",
    }
}

fn scored(g: &StageGame, o: Outcome) -> (String, String) {
    (points(g.payoff(o)), points(g.payoff(o.swap())))
}

fn repeated_prompt(t: &Treatment, g: &StageGame, sc: Scenario) -> Vec<String> {
    let mut second = vec!["Your interaction is over several rounds.".to_string()];
    if let Treatment::Stopping { w } = t {
        second.push(format!("After each round the interaction ends with probability {w}."));
    }
    let mut lines = header(&second, g);
    if let Treatment::Framing { text } = t {
        lines.push(text.clone());
    }
    match sc {
        Scenario::First => lines.push("This is the first round.".into()),
        Scenario::After(o) => {
            let (mine, theirs) = scored(g, o);
            lines.push(format!(
                "In the previous round, you chose {}, and the other agent chose {}.",
                chose(o.own()),
                chose(o.other())
            ));
            lines.push(format!("Therefore, you got {mine} point(s) and the other agent got {theirs} point(s)."));
            lines.push("This is a new round.".into());
        }
        Scenario::Second(o) => {
            let (mine, theirs) = scored(g, o);
            lines.push(format!(
                "In the first round, you chose {}, and the other agent chose {}.",
                chose(o.own()),
                chose(o.other())
            ));
            lines.push(format!("Therefore, you got {mine} point(s) and the other agent got {theirs} point(s)."));
            lines.push("This is the second round.".into());
        }
        Scenario::History(o1, o2) => {
            let (mine2, theirs2) = scored(g, o2);
            let (mine1, theirs1) = scored(g, o1);
            lines.push(format!("Two rounds ago, you chose {}, they chose {}.", chose(o2.own()), chose(o2.other())));
            lines.push(format!("Therefore, you got {mine2} point(s) and the other agent got {theirs2} point(s)."));
            lines.push(format!("In the previous round, you chose {}, they chose {}.", chose(o1.own()), chose(o1.other())));
            lines.push(format!(
                "Therefore, in the previous round you got {mine1} point(s) and they got {theirs1} point(s)."
            ));
            lines.push("This is a new round.".into());
        }
    }
    lines
}

fn one_shot_prompt(g: &StageGame) -> Vec<String> {
    let mut lines = vec![
        "You are in an interaction with another agent.".to_string(),
        "You have a choice between two options, L or R.".into(),
    ];
    lines.extend(RULES[1..].iter().map(|s| s.to_string()));
    lines.extend(payoff_lines(g));
    lines.push("Your reward is the number of points you receive.".into());
    lines.push("There is no further interaction with the other agent.".into());
    lines
}

fn actual_play_prompt(rounds: u32, ending: Ending, g: &StageGame, history: &[Outcome]) -> Vec<String> {
    let lasts = match ending {
        Ending::Exact => format!("The interaction lasts {rounds} rounds."),
        Ending::AtLeast => format!("The interaction lasts at least {rounds} rounds."),
    };
    let mut lines = header(&[lasts], g);
    if history.is_empty() {
        lines.push("This is round 1.".into());
        return lines;
    }
    for (k, o) in history.iter().rev().enumerate() {
        let k = k + 1;
        let (mine, theirs) = scored(g, *o);
        lines.push(format!("In round {k}, you chose {}, the other agent chose {}.", chose(o.own()), chose(o.other())));
        lines.push(format!(
            "Therefore in round {k}, you got {mine} point(s) and the other agent got {theirs} point(s)."
        ));
    }
    lines.push(format!("This is Round {}.", history.len() + 1));
    lines
}

/// Renders the prompt seen by a player whose past outcomes (own action first) are
/// `history`, most recent first.
///
/// Memory-1 treatments accept at most one past outcome, memory-2 at most two, one-shot
/// none, and actual play fewer than the announced number of rounds.
pub fn render_prompt(t: &Treatment, g: &StageGame, history: &[Outcome]) -> Result<PromptSpec> {
    if let Treatment::EqualGains { x } = t {
        if !g.is_equal_gains(*x) {
            return Err(HarnessError::Treatment(format!("game {:?} is not the equal-gains game for x={x}", g.to_f64())));
        }
    }
    if let Treatment::Stopping { w } = t {
        if !(*w > 0.0 && *w <= 1.0) {
            return Err(HarnessError::Treatment(format!("stopping probability {w} outside (0, 1]")));
        }
    }
    let (mut lines, scenario) = match t {
        Treatment::OneShot => {
            if !history.is_empty() {
                return Err(HarnessError::Treatment("one-shot prompts have no history".into()));
            }
            (one_shot_prompt(g), Scenario::First.id())
        }
        Treatment::ActualPlay { rounds, ending } => {
            if history.len() >= *rounds as usize {
                return Err(HarnessError::Treatment(format!("round {} of {rounds}", history.len() + 1)));
            }
            (actual_play_prompt(*rounds, *ending, g, history), format!("round {}", history.len() + 1))
        }
        _ => {
            let memory = t.memory().unwrap_or(1);
            if history.len() > memory as usize {
                return Err(HarnessError::Treatment(format!(
                    "{} past rounds given to a memory-{memory} prompt",
                    history.len()
                )));
            }
            let sc = rpd_core::simulate::scenario_for(memory, history);
            (repeated_prompt(t, g, sc), sc.id())
        }
    };
    lines.extend(ASK.iter().map(|s| s.to_string()));
    Ok(PromptSpec {
        treatment: t.clone(),
        scenario,
        history: history.to_vec(),
        game: g.to_f64(),
        system: SYSTEM_PROMPT.into(),
        rendered: lines.join("\n"),
    })
}

/// The history a scenario describes, most recent first.
pub fn scenario_history(sc: Scenario) -> Vec<Outcome> {
    match sc {
        Scenario::First => vec![],
        Scenario::After(o) | Scenario::Second(o) => vec![o],
        Scenario::History(o1, o2) => vec![o1, o2],
    }
}

pub fn render_scenario(t: &Treatment, g: &StageGame, sc: Scenario) -> Result<PromptSpec> {
    if let Some(m) = t.memory() {
        if sc.memory() != m && sc != Scenario::First {
            return Err(HarnessError::Treatment(format!("scenario {sc} under a memory-{m} treatment")));
        }
    }
    render_prompt(t, g, &scenario_history(sc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> StageGame {
        StageGame::standard()
    }

    #[test]
    fn baseline_later_round() {
        let p = render_scenario(&Treatment::Baseline, &g(), Scenario::After(Outcome::LR)).unwrap();
        assert!(p.rendered.contains("you chose L, and the other agent chose R"));
        assert!(p.rendered.contains("you got 0 point(s) and the other agent got 5 point(s)"));
        assert_eq!(p.system, "Follow specified goals");
        assert_eq!(p.scenario, "LR");
    }

    #[test]
    fn stopping_line() {
        let p = render_scenario(&Treatment::Stopping { w: 0.1 }, &g(), Scenario::First).unwrap();
        let lines: Vec<&str> = p.rendered.lines().collect();
        assert_eq!(lines[2], "After each round the interaction ends with probability 0.1.");
    }

    #[test]
    fn one_shot_line() {
        let p = render_prompt(&Treatment::OneShot, &g(), &[]).unwrap();
        assert!(p.rendered.contains("There is no further interaction with the other agent."));
        assert!(!p.rendered.contains("rounds"));
    }

    #[test]
    fn framing_line_sits_before_the_question() {
        let t = Treatment::Framing { text: FRAMINGS[8].into() };
        let p = render_scenario(&t, &g(), Scenario::First).unwrap();
        let lines: Vec<&str> = p.rendered.lines().collect();
        assert_eq!(lines[11], "Be a saint.");
        assert_eq!(lines[12], "This is the first round.");
        let base = render_scenario(&Treatment::Baseline, &g(), Scenario::First).unwrap();
        assert_eq!(base.rendered.lines().count() + 1, lines.len());
    }

    #[test]
    fn memory2_points_are_swapped_for_the_co_player() {
        let p = render_scenario(&Treatment::Memory2, &g(), Scenario::History(Outcome::LR, Outcome::RL)).unwrap();
        assert!(p.rendered.contains("Two rounds ago, you chose R, they chose L."));
        assert!(p.rendered.contains("in the previous round you got 0 point(s) and they got 5 point(s)."));
    }

    #[test]
    fn invalid_pairings() {
        assert!(render_prompt(&Treatment::Baseline, &g(), &[Outcome::LL, Outcome::LL]).is_err());
        assert!(render_prompt(&Treatment::OneShot, &g(), &[Outcome::LL]).is_err());
        assert!(render_scenario(&Treatment::Baseline, &g(), Scenario::Second(Outcome::LL)).is_err());
        assert!(render_prompt(&Treatment::EqualGains { x: 3.0 }, &g(), &[]).is_err());
        let t = Treatment::ActualPlay { rounds: 2, ending: Ending::Exact };
        assert!(render_prompt(&t, &g(), &[Outcome::LL, Outcome::LL]).is_err());
    }

    #[test]
    fn equal_gains_points() {
        let t = Treatment::EqualGains { x: 2.5 };
        let game = t.stage_game(g());
        let p = render_scenario(&t, &game, Scenario::After(Outcome::RL)).unwrap();
        assert!(p.rendered.contains("you get 12.5 points and the other agent gets 0 points."));
        assert!(p.rendered.contains("you got 12.5 point(s) and the other agent got 0 point(s)."));
    }

    #[test]
    fn actual_play_lists_rounds_oldest_first() {
        let t = Treatment::ActualPlay { rounds: 10, ending: Ending::AtLeast };
        let p = render_prompt(&t, &g(), &[Outcome::RR, Outcome::LR]).unwrap();
        assert!(p.rendered.contains("The interaction lasts at least 10 rounds."));
        let i1 = p.rendered.find("In round 1, you chose L, the other agent chose R.").unwrap();
        let i2 = p.rendered.find("In round 2, you chose R, the other agent chose R.").unwrap();
        assert!(i1 < i2);
        assert!(p.rendered.contains("This is Round 3."));
    }
}
