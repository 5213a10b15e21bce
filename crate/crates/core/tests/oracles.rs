use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rpd_core::classify::{is_nash, pair_payoff};
use rpd_core::mdp::best_response;
use rpd_core::payoff_m2::{initial_distribution_m2, payoff_m2};
use rpd_core::strategy::h2_index;
use rpd_core::{Action, Memory1Strategy, Memory2Strategy, Outcome, Scenario, StageGame, Strategy};

/// Probability a player cooperates, looked up by scenario from that player's own view.
fn coop(s: &Strategy, history: &[Outcome]) -> f64 {
    let sc = match (history, s.memory()) {
        ([], _) => Scenario::First,
        ([o, ..], 1) => Scenario::After(*o),
        ([o], _) => Scenario::Second(*o),
        ([o1, o2, ..], _) => Scenario::History(*o1, *o2),
    };
    s.cooperation(sc).unwrap()
}

fn branch(q: &Strategy, p: &Strategy, hist: &[Outcome]) -> [(Outcome, f64); 4] {
    let mirrored: Vec<Outcome> = hist.iter().map(|o| o.swap()).collect();
    let a = coop(q, hist);
    let b = coop(p, &mirrored);
    let pr = |x: Action, y: Action| {
        (if x == Action::L { a } else { 1.0 - a }) * (if y == Action::L { b } else { 1.0 - b })
    };
    Outcome::ALL.map(|o| (o, pr(o.own(), o.other())))
}

/// Expected per-round payoff by forward propagation over the last two outcomes, truncated
/// once the survival probability is negligible.
fn forward_payoff(q: &Strategy, p: &Strategy, g: &StageGame, w: f64) -> f64 {
    let mut dist: HashMap<Vec<Outcome>, f64> = HashMap::from([(vec![], 1.0)]);
    let mut survive = 1.0;
    let mut total = 0.0;
    while survive > 1e-18 {
        let mut next = HashMap::new();
        for (hist, mass) in &dist {
            for (o, pr) in branch(q, p, hist) {
                total += survive * mass * pr * g.payoff(o);
                let mut h = vec![o];
                h.extend(hist.iter().take(1));
                *next.entry(h).or_insert(0.0) += mass * pr;
            }
        }
        dist = next;
        survive *= 1.0 - w;
    }
    w * total
}

fn random_m2(rng: &mut ChaCha8Rng, pure: bool) -> Memory2Strategy {
    let e: Vec<f64> = (0..21)
        .map(|_| if pure { f64::from(rng.random_bool(0.5)) } else { rng.random() })
        .collect();
    Memory2Strategy::from_entries(&e).unwrap()
}

#[test]
fn memory2_payoff_matches_forward_propagation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = StageGame::standard();
    for i in 0..20 {
        let q = random_m2(&mut rng, i % 2 == 0);
        let p = random_m2(&mut rng, i % 3 == 0);
        for w in [0.9, 0.3, 0.05] {
            let exact = payoff_m2(&q, &p, &g, w).unwrap();
            let oracle = forward_payoff(&q.into(), &p.into(), &g, w);
            assert!((exact - oracle).abs() < 1e-10, "{exact} vs {oracle} at w={w}");
        }
    }
}

#[test]
fn memory2_initial_distribution_by_tree_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let q = random_m2(&mut rng, false);
        let p = random_m2(&mut rng, false);
        let v0 = initial_distribution_m2(&q, &p);
        let (qs, ps): (Strategy, Strategy) = (q.into(), p.into());
        for (o1, p1) in branch(&qs, &ps, &[]) {
            for (o2, p2) in branch(&qs, &ps, &[o1]) {
                assert!((v0[h2_index(o2, o1)] - p1 * p2).abs() < 1e-15);
            }
        }
        assert!((v0.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn deterministic_deviants_dominate_stochastic_ones() {
    let g = StageGame::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..50 {
        let e: [f64; 5] = std::array::from_fn(|_| rng.random());
        let s: Strategy = Memory1Strategy::from_entries(e).unwrap().into();
        let w = [0.5, 0.1, 0.01][i % 3];
        let check = is_nash(&s, &g, w, 1e-9).unwrap();
        for _ in 0..10_000 {
            let d: [f64; 5] = std::array::from_fn(|_| rng.random());
            let dev: Strategy = Memory1Strategy::from_entries(d).unwrap().into();
            assert!(pair_payoff(&dev, &s, &g, w).unwrap() <= check.worst_deviation.payoff + 1e-9);
        }
    }
}

#[test]
fn nash_strategies_resist_stochastic_deviants() {
    let g = StageGame::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let gtft = Memory1Strategy::from_f64([1.0, 1.0, 0.1, 1.0, 0.1]).unwrap();
    for w in [0.5, 0.1, 0.01] {
        for s in ["TFT", "GRIM", "ALLD"]
            .iter()
            .map(|n| Strategy::M1(rpd_core::catalog::memory1::<f64>(n).unwrap()))
            .chain([Strategy::M1(gtft)])
        {
            let check = is_nash(&s, &g, w, 1e-9).unwrap();
            if !check.is_nash {
                continue;
            }
            for _ in 0..1000 {
                let d: [f64; 5] = std::array::from_fn(|_| rng.random());
                let dev: Strategy = Memory1Strategy::from_entries(d).unwrap().into();
                assert!(pair_payoff(&dev, &s, &g, w).unwrap() <= check.self_payoff + 1e-9);
            }
        }
    }
}

#[test]
fn best_response_matches_enumeration_for_random_memory1() {
    let g = StageGame::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let e: [f64; 5] = std::array::from_fn(|_| rng.random());
        let s: Strategy = Memory1Strategy::from_entries(e).unwrap().into();
        let w = rng.random_range(0.005..0.9);
        let (v, _) = best_response(&s, &g, w).unwrap();
        let nash = is_nash(&s, &g, w, 1e-9).unwrap();
        assert!((v - nash.worst_deviation.payoff).abs() < 1e-9);
    }
}

#[test]
fn best_response_matches_enumeration_for_random_memory2() {
    let g = StageGame::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..20 {
        let s: Strategy = random_m2(&mut rng, i % 4 == 0).into();
        let w = [0.3, 0.05, 0.01, 1e-4][i % 4];
        let (v, dev) = best_response(&s, &g, w).unwrap();
        let nash = is_nash(&s, &g, w, 1e-9).unwrap();
        assert!((v - nash.worst_deviation.payoff).abs() < 1e-9, "{v} vs {:?}", nash.worst_deviation.payoff);
        assert!((pair_payoff(&dev, &s, &g, w).unwrap() - v).abs() < 1e-9);
    }
}
