//! Expected per-round payoffs between two memory-1 strategies.
//!
//! Player 1 uses `q`, player 2 uses `p`. States are the outcomes LL, LR, RL, RR
//! seen from player 1.

use crate::error::{Error, Result};
use crate::game::{Outcome, StageGame};
use crate::linalg::{dot, resolvent_solve, Matrix};
use crate::markov;
use crate::real::Real;
use crate::strategy::Memory1Strategy;

pub type TransitionMatrix4<T> = Matrix<T, 4>;
pub type InitialDistribution4<T> = [T; 4];

fn joint<T: Real>(a: T, b: T) -> [T; 4] {
    let one = T::one();
    [a * b, a * (one - b), (one - a) * b, (one - a) * (one - b)]
}

pub fn initial_distribution_m1<T: Real>(q: &Memory1Strategy<T>, p: &Memory1Strategy<T>) -> InitialDistribution4<T> {
    joint(q.p0, p.p0)
}

/// Row `o` holds the next-outcome distribution after outcome `o`; player 2 reads its entry at `o.swap()`.
pub fn transition_matrix_m1<T: Real>(q: &Memory1Strategy<T>, p: &Memory1Strategy<T>) -> TransitionMatrix4<T> {
    let mut m = [[T::zero(); 4]; 4];
    for o in Outcome::ALL {
        m[o.index()] = joint(q.after(o), p.after(o.swap()));
    }
    m
}

pub(crate) fn check_w<T: Real>(w: T) -> Result<()> {
    if w > T::zero() && w <= T::one() {
        Ok(())
    } else {
        Err(Error::StoppingProbability(w.to_f64().unwrap_or(f64::NAN)))
    }
}

/// Expected share of rounds spent in each state: `w v0 (I - (1-w) M)^-1`, rescaled to sum to one.
pub fn discounted_occupancy<T: Real, const N: usize>(v0: &[T; N], m: &Matrix<T, N>, w: T) -> Result<[T; N]> {
    check_w(w)?;
    if w == T::one() {
        return Ok(*v0);
    }
    let rhs = v0.map(|v| w * v);
    let mut y = resolvent_solve(m, &rhs, w);
    let s: T = y.iter().copied().sum();
    if !(s > T::zero()) || !s.is_finite() {
        return Err(Error::Singular);
    }
    for v in y.iter_mut() {
        *v /= s;
    }
    Ok(y)
}

/// Player 1's expected outcome distribution over a game with stopping probability `w`.
pub fn outcome_distribution_m1<T: Real>(
    q: &Memory1Strategy<T>,
    p: &Memory1Strategy<T>,
    w: T,
) -> Result<[T; 4]> {
    discounted_occupancy(&initial_distribution_m1(q, p), &transition_matrix_m1(q, p), w)
}

/// Player 1's expected payoff per round; `w` in (0, 1].
pub fn payoff_m1<T: Real>(q: &Memory1Strategy<T>, p: &Memory1Strategy<T>, g: &StageGame<T>, w: T) -> Result<T> {
    Ok(dot(&outcome_distribution_m1(q, p, w)?, &g.payoff_vector()))
}

/// Player 1's long-run average payoff in the infinitely repeated game.
pub fn payoff_m1_limit<T: Real>(q: &Memory1Strategy<T>, p: &Memory1Strategy<T>, g: &StageGame<T>) -> T {
    let m = transition_matrix_m1(q, p);
    let v0 = initial_distribution_m1(q, p);
    markov::limit_average(&m, &v0, &g.payoff_vector())
        .expect("class systems of a stochastic matrix are nonsingular")
}

/// Dispatches on `w`: the limit of means at zero, the discounted sum otherwise.
pub fn payoff_m1_any<T: Real>(q: &Memory1Strategy<T>, p: &Memory1Strategy<T>, g: &StageGame<T>, w: T) -> Result<T> {
    if w == T::zero() {
        Ok(payoff_m1_limit(q, p, g))
    } else {
        payoff_m1(q, p, g, w)
    }
}
