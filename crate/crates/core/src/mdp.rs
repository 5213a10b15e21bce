//! Best response to a fixed strategy by policy iteration on the induced decision process.
//!
//! Decision points are round one, and then the deviant's view of the recent history
//! (one outcome for memory-1, round two plus sixteen two-outcome histories for memory-2).
//! Deterministic stationary policies over these points are exactly the deterministic
//! strategies of the same memory.

use crate::error::{Error, Result};
use crate::game::{Action, Outcome, StageGame};
use crate::linalg::solve_dyn;
use crate::real::Real;
use crate::strategy::{h2_index, Memory1Strategy, Memory2Strategy, Strategy};

struct Process<T> {
    /// `next[s][o]` is the decision point after outcome `o` was played from `s`.
    next: Vec<[usize; 4]>,
    /// Probability that the fixed strategy cooperates at each decision point.
    coop: Vec<T>,
}

fn process<T: Real>(sigma: &Strategy<T>) -> Process<T> {
    match sigma {
        Strategy::M1(s) => {
            let mut next = vec![[1, 2, 3, 4]; 5];
            next[0] = [1, 2, 3, 4];
            let mut coop = vec![s.p0];
            coop.extend(Outcome::ALL.iter().map(|o| s.after(o.swap())));
            Process { next, coop }
        }
        Strategy::M2(s) => {
            // 0: round one, 1..5: round two by round-one outcome, 5..21: histories
            let mut next = Vec::with_capacity(21);
            let mut coop = Vec::with_capacity(21);
            next.push([1, 2, 3, 4]);
            coop.push(s.p0);
            for o1 in Outcome::ALL {
                next.push(Outcome::ALL.map(|o| 5 + h2_index(o, o1)));
                coop.push(s.r2[o1.swap().index()]);
            }
            for k in 0..16 {
                let (a, b) = crate::strategy::h2_outcomes(k);
                next.push(Outcome::ALL.map(|o| 5 + h2_index(o, a)));
                coop.push(s.history(a.swap(), b.swap()));
            }
            Process { next, coop }
        }
    }
}

fn outcome_probs<T: Real>(a: Action, coop: T) -> [(Outcome, T); 2] {
    [(Outcome::new(a, Action::L), coop), (Outcome::new(a, Action::R), T::one() - coop)]
}

fn evaluate<T: Real>(p: &Process<T>, policy: &[Action], g: &StageGame<T>, c: T) -> Result<Vec<T>> {
    let n = policy.len();
    let mut a = vec![vec![T::zero(); n]; n];
    let mut b = vec![T::zero(); n];
    for s in 0..n {
        a[s][s] += T::one();
        for (o, pr) in outcome_probs(policy[s], p.coop[s]) {
            b[s] += pr * g.payoff(o);
            a[s][p.next[s][o.index()]] -= c * pr;
        }
    }
    solve_dyn(a, b).ok_or(Error::Singular)
}

fn q_value<T: Real>(p: &Process<T>, v: &[T], s: usize, act: Action, g: &StageGame<T>, c: T) -> T {
    outcome_probs(act, p.coop[s])
        .iter()
        .map(|&(o, pr)| pr * (g.payoff(o) + c * v[p.next[s][o.index()]]))
        .sum()
}

/// Highest per-round payoff any deviant of the same memory earns against `sigma`,
/// with a deterministic deviant that attains it. Requires `w > 0`.
pub fn best_response<T: Real>(sigma: &Strategy<T>, g: &StageGame<T>, w: T) -> Result<(T, Strategy<T>)> {
    crate::payoff_m1::check_w(w)?;
    let c = T::one() - w;
    let p = process(sigma);
    let n = p.coop.len();
    let mut policy = vec![Action::L; n];
    let mut v = evaluate(&p, &policy, g, c)?;
    for _ in 0..100 * n {
        let mut changed = false;
        for s in 0..n {
            let cur = q_value(&p, &v, s, policy[s], g, c);
            let alt = q_value(&p, &v, s, policy[s].flip(), g, c);
            let scale = T::one() + cur.abs();
            if alt > cur + T::lit(1e-12) * scale {
                policy[s] = policy[s].flip();
                changed = true;
            }
        }
        if !changed {
            break;
        }
        v = evaluate(&p, &policy, g, c)?;
    }
    let bits: Vec<T> = policy.iter().map(|a| if a.is_cooperate() { T::one() } else { T::zero() }).collect();
    let strategy = match sigma {
        Strategy::M1(_) => Strategy::M1(Memory1Strategy::from_entries([bits[0], bits[1], bits[2], bits[3], bits[4]])?),
        Strategy::M2(_) => Strategy::M2(Memory2Strategy::from_entries(&bits)?),
    };
    Ok((w * v[0], strategy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::memory1;
    use crate::classify::{is_nash, pair_payoff};

    #[test]
    fn matches_enumeration_on_catalog() {
        let g = StageGame::standard();
        for name in ["ALLC", "ALLD", "TFT", "WSLS", "GRIM", "Forgiver", "SGRIM"] {
            let s: Strategy<f64> = memory1(name).unwrap().into();
            for w in [0.5, 0.1, 0.01] {
                let (v, dev) = best_response(&s, &g, w).unwrap();
                let nash = is_nash(&s, &g, w, 1e-9).unwrap();
                assert!((v - nash.worst_deviation.payoff).abs() < 1e-9, "{name} {w}");
                assert!((pair_payoff(&dev, &s, &g, w).unwrap() - v).abs() < 1e-9);
            }
        }
    }
}
