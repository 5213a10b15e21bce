//! Expected per-round payoffs between two memory-2 strategies.
//!
//! States are pairs `(o_-1, o_-2)` of the last two outcomes seen from player 1,
//! flattened as `4 * o_-1 + o_-2`. The chain starts in round two, so round one is
//! paid separately: `pi = w <d1, g> + (1 - w) <occupancy, G>` where `d1` is the
//! round-one outcome distribution and `G` pays each state the stage payoff of `o_-1`.

use crate::error::Result;
use crate::game::{Outcome, StageGame};
use crate::linalg::{dot, Matrix};
use crate::payoff_m1::{check_w, discounted_occupancy};
use crate::real::Real;
use crate::strategy::{h2_index, h2_outcomes, Memory2Strategy};

pub type TransitionMatrix16<T> = Matrix<T, 16>;
pub type InitialDistribution16<T> = [T; 16];

fn joint<T: Real>(a: T, b: T) -> [T; 4] {
    let one = T::one();
    [a * b, a * (one - b), (one - a) * b, (one - a) * (one - b)]
}

pub fn round_one_distribution<T: Real>(q: &Memory2Strategy<T>, p: &Memory2Strategy<T>) -> [T; 4] {
    joint(q.p0, p.p0)
}

/// Distribution of the state after round two: `(round-2 outcome, round-1 outcome)`.
pub fn initial_distribution_m2<T: Real>(q: &Memory2Strategy<T>, p: &Memory2Strategy<T>) -> InitialDistribution16<T> {
    let d1 = round_one_distribution(q, p);
    let mut v0 = [T::zero(); 16];
    for o1 in Outcome::ALL {
        let next = joint(q.r2[o1.index()], p.r2[o1.swap().index()]);
        for o2 in Outcome::ALL {
            v0[h2_index(o2, o1)] = d1[o1.index()] * next[o2.index()];
        }
    }
    v0
}

pub fn transition_matrix_m2<T: Real>(q: &Memory2Strategy<T>, p: &Memory2Strategy<T>) -> TransitionMatrix16<T> {
    let mut m = [[T::zero(); 16]; 16];
    for (s, row) in m.iter_mut().enumerate() {
        let (a, b) = h2_outcomes(s);
        let next = joint(q.history(a, b), p.history(a.swap(), b.swap()));
        for o in Outcome::ALL {
            row[h2_index(o, a)] = next[o.index()];
        }
    }
    m
}

/// Stage payoff credited to each state (that of its most recent outcome).
pub fn collapsed_payoffs<T: Real>(g: &StageGame<T>) -> [T; 16] {
    let v = g.payoff_vector();
    let mut out = [T::zero(); 16];
    for (s, o) in out.iter_mut().enumerate() {
        *o = v[s / 4];
    }
    out
}

/// Player 1's expected payoff per round; `w` in (0, 1].
pub fn payoff_m2<T: Real>(q: &Memory2Strategy<T>, p: &Memory2Strategy<T>, g: &StageGame<T>, w: T) -> Result<T> {
    check_w(w)?;
    let first = dot(&round_one_distribution(q, p), &g.payoff_vector());
    if w == T::one() {
        return Ok(first);
    }
    let y = discounted_occupancy(&initial_distribution_m2(q, p), &transition_matrix_m2(q, p), w)?;
    let later = dot(&y, &collapsed_payoffs(g));
    // equals w * first + (1 - w) * later, and stays exact when the two agree
    Ok(first + (T::one() - w) * (later - first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{memory1, memory2};
    use crate::payoff_m1::payoff_m1;

    #[test]
    fn alld_pair_starts_in_rr_rr() {
        let s = memory1::<f64>("ALLD").unwrap().lift();
        let v0 = initial_distribution_m2(&s, &s);
        assert_eq!(v0[h2_index(Outcome::RR, Outcome::RR)], 1.0);
        assert_eq!(v0.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn grim_pair_starts_in_ll_ll() {
        let s = memory1::<f64>("GRIM").unwrap().lift();
        assert_eq!(initial_distribution_m2(&s, &s)[0], 1.0);
    }

    #[test]
    fn allc_rows() {
        let s = memory1::<f64>("ALLC").unwrap().lift();
        let m = transition_matrix_m2(&s, &s);
        for (k, row) in m.iter().enumerate() {
            let (a, _) = h2_outcomes(k);
            assert_eq!(row[h2_index(Outcome::LL, a)], 1.0);
            assert_eq!(row.iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn aon2_pair_rows() {
        let s = memory2::<f64>("AON-2").unwrap();
        let m = transition_matrix_m2(&s, &s);
        assert_eq!(m[h2_index(Outcome::LL, Outcome::LL)][h2_index(Outcome::LL, Outcome::LL)], 1.0);
        assert_eq!(m[h2_index(Outcome::LR, Outcome::RL)][h2_index(Outcome::RR, Outcome::LR)], 1.0);
    }

    #[test]
    fn sparsity() {
        let q = Memory2Strategy::<f64>::from_rule(|_| 0.37).unwrap();
        let p = Memory2Strategy::<f64>::from_rule(|_| 0.81).unwrap();
        for row in transition_matrix_m2(&q, &p) {
            assert!(row.iter().filter(|&&v| v > 0.0).count() <= 4);
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lift_matches_memory1() {
        let g = StageGame::standard();
        let q = crate::strategy::Memory1Strategy::from_f64([0.82, 1.0, 0.0, 0.02, 0.42]).unwrap();
        let p = memory1::<f64>("GRIM").unwrap();
        for w in [1.0, 0.5, 0.01, 1e-10] {
            let a = payoff_m1(&q, &p, &g, w).unwrap();
            let b = payoff_m2(&q.lift(), &p.lift(), &g, w).unwrap();
            assert!((a - b).abs() < 1e-9, "w={w}: {a} vs {b}");
        }
    }

    #[test]
    fn forgiver_pair_cooperates() {
        let f = memory1::<f64>("Forgiver").unwrap().lift();
        let v = payoff_m2(&f, &f, &StageGame::standard(), 1e-10).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
    }
}
