//! Two agents playing a full game with the growing-history prompt.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rpd_core::{Action, Outcome, StageGame};

use crate::agent::Agent;
use crate::error::{HarnessError, Result};
use crate::parse::parse_response;
use crate::prompt::{render_prompt, Ending, Treatment};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlayRound {
    pub round: u32,
    pub action1: Action,
    pub action2: Action,
    pub response1: String,
    pub response2: String,
    pub points1: f64,
    pub points2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transcript {
    pub agent1: String,
    pub agent2: String,
    pub ending: Ending,
    pub rounds: Vec<PlayRound>,
    pub total1: f64,
    pub total2: f64,
}

impl Transcript {
    pub fn outcomes(&self) -> Vec<Outcome> {
        self.rounds.iter().map(|r| Outcome::new(r.action1, r.action2)).collect()
    }
}

/// Number of queries per move before an unparseable agent aborts the game.
pub const MAX_ATTEMPTS: u32 = 3;

fn ask(agent: &dyn Agent, t: &Treatment, g: &StageGame, history: &[Outcome], rng: &mut ChaCha8Rng, lenient: bool) -> Result<(Action, String)> {
    let prompt = render_prompt(t, g, history)?;
    for _ in 0..MAX_ATTEMPTS {
        let text = agent.respond(&prompt, rng)?;
        if let Some(a) = parse_response(&text, lenient).action() {
            return Ok((a, text));
        }
    }
    Err(HarnessError::Unparseable(MAX_ATTEMPTS))
}

/// Plays `rounds` rounds; each agent sees the full history from its own side.
pub fn run_actual_play(
    agent1: &dyn Agent,
    agent2: &dyn Agent,
    rounds: u32,
    ending: Ending,
    g: &StageGame,
    seed: u64,
    lenient: bool,
) -> Result<Transcript> {
    if rounds == 0 {
        return Err(HarnessError::Config("rounds must be at least 1".into()));
    }
    let t = Treatment::ActualPlay { rounds, ending };
    let mut rng1 = ChaCha8Rng::seed_from_u64(seed);
    rng1.set_stream(1);
    let mut rng2 = ChaCha8Rng::seed_from_u64(seed);
    rng2.set_stream(2);
    // most recent first, from player 1's side
    let mut history: Vec<Outcome> = Vec::new();
    let mut out = Vec::new();
    let (mut total1, mut total2) = (0.0, 0.0);
    for round in 1..=rounds {
        let mirrored: Vec<Outcome> = history.iter().map(|o| o.swap()).collect();
        let (a1, response1) = ask(agent1, &t, g, &history, &mut rng1, lenient)?;
        let (a2, response2) = ask(agent2, &t, g, &mirrored, &mut rng2, lenient)?;
        let o = Outcome::new(a1, a2);
        let (points1, points2) = (g.payoff(o), g.payoff(o.swap()));
        total1 += points1;
        total2 += points2;
        out.push(PlayRound { round, action1: a1, action2: a2, response1, response2, points1, points2 });
        history.insert(0, o);
    }
    Ok(Transcript { agent1: agent1.id(), agent2: agent2.id(), ending, rounds: out, total1, total2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::ScriptedAgent;

    #[test]
    fn grim_against_alld() {
        let grim = ScriptedAgent::named("GRIM").unwrap();
        let alld = ScriptedAgent::named("ALLD").unwrap();
        let t = run_actual_play(&grim, &alld, 10, Ending::Exact, &StageGame::standard(), 0, true).unwrap();
        let mut want = vec![Outcome::LR];
        want.extend([Outcome::RR; 9]);
        assert_eq!(t.outcomes(), want);
        assert_eq!((t.total1, t.total2), (9.0, 14.0));
    }

    #[test]
    fn single_round() {
        let alld = ScriptedAgent::named("ALLD").unwrap();
        let t = run_actual_play(&alld, &alld, 1, Ending::AtLeast, &StageGame::standard(), 0, true).unwrap();
        assert_eq!(t.outcomes(), vec![Outcome::RR]);
        assert_eq!((t.total1, t.total2), (1.0, 1.0));
        assert!(run_actual_play(&alld, &alld, 0, Ending::Exact, &StageGame::standard(), 0, true).is_err());
    }
}
