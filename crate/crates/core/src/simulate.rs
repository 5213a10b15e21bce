//! Monte-Carlo play of repeated games, independent of the matrix formulas.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{Action, Outcome, StageGame};
use crate::real::Real;
use crate::strategy::{Scenario, Strategy};

/// Scenario a strategy of the given memory faces, with history listed most recent first.
pub fn scenario_for(memory: u8, history: &[Outcome]) -> Scenario {
    match (memory, history) {
        (_, []) => Scenario::First,
        (1, [last, ..]) => Scenario::After(*last),
        (_, [only]) => Scenario::Second(*only),
        (_, [a, b, ..]) => Scenario::History(*a, *b),
    }
}

/// Draws the next action of `s` given its own-perspective history (most recent first).
pub fn draw_action<T: Real, R: Rng + ?Sized>(s: &Strategy<T>, history: &[Outcome], rng: &mut R) -> Action {
    let pc = s
        .cooperation(scenario_for(s.memory(), history))
        .and_then(|v| v.to_f64())
        .unwrap_or(0.0);
    Action::from_cooperate(rng.random::<f64>() < pc)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GameSample {
    pub rounds: u64,
    pub total1: f64,
    pub total2: f64,
}

/// Plays one game that ends after each round with probability `w`.
pub fn play_geometric<T: Real, R: Rng + ?Sized>(
    q: &Strategy<T>,
    p: &Strategy<T>,
    g: &StageGame<T>,
    w: f64,
    rng: &mut R,
) -> GameSample {
    let pay = g.to_f64();
    let mut h1: Vec<Outcome> = Vec::with_capacity(2);
    let mut h2: Vec<Outcome> = Vec::with_capacity(2);
    let mut out = GameSample { rounds: 0, total1: 0.0, total2: 0.0 };
    loop {
        let a = draw_action(q, &h1, rng);
        let b = draw_action(p, &h2, rng);
        let o = Outcome::new(a, b);
        out.rounds += 1;
        out.total1 += pay[o.index()];
        out.total2 += pay[o.swap().index()];
        h1.insert(0, o);
        h2.insert(0, o.swap());
        h1.truncate(2);
        h2.truncate(2);
        if rng.random::<f64>() < w {
            return out;
        }
    }
}

/// Mean and standard error of `w * total` over `games` plays, an unbiased estimate of
/// player 1's expected per-round payoff.
pub fn estimate_payoff<T: Real>(
    q: &Strategy<T>,
    p: &Strategy<T>,
    g: &StageGame<T>,
    w: f64,
    games: usize,
    seed: u64,
) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sq = 0.0;
    for _ in 0..games {
        let x = w * play_geometric(q, p, g, w, &mut rng).total1;
        sum += x;
        sq += x * x;
    }
    let n = games as f64;
    let mean = sum / n;
    let var = (sq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}
