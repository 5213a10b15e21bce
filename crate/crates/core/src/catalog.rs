//! Well-known memory-1 and memory-2 strategies.

use crate::game::{Action, Outcome};
use crate::real::Real;
use crate::strategy::{Memory1Strategy, Memory2Strategy, Scenario};

#[derive(Clone, Copy, Debug)]
pub enum Pattern {
    /// Pure memory-1 profile `(p0; p_LL, p_LR, p_RL, p_RR)`.
    Memory1([u8; 5]),
    /// `(1; 1, q, 1, q)` with a small forgiveness probability `q`.
    Generous,
    /// Pure memory-2 rule over scenarios.
    Memory2(fn(Scenario) -> bool),
}

#[derive(Clone, Copy, Debug)]
pub struct NamedStrategy {
    pub name: &'static str,
    pub pattern: Pattern,
}

pub const MEMORY1: [(&str, [u8; 5]); 7] = [
    ("ALLC", [1, 1, 1, 1, 1]),
    ("ALLD", [0, 0, 0, 0, 0]),
    ("TFT", [1, 1, 0, 1, 0]),
    ("WSLS", [1, 1, 0, 0, 1]),
    ("GRIM", [1, 1, 0, 0, 0]),
    ("Forgiver", [1, 1, 0, 1, 1]),
    ("SGRIM", [0, 1, 0, 0, 0]),
];

pub fn catalog() -> Vec<NamedStrategy> {
    let mut out: Vec<NamedStrategy> = MEMORY1
        .iter()
        .map(|&(name, p)| NamedStrategy { name, pattern: Pattern::Memory1(p) })
        .collect();
    out.push(NamedStrategy { name: "GTFT", pattern: Pattern::Generous });
    out.push(NamedStrategy { name: "TF2T", pattern: Pattern::Memory2(tf2t_rule) });
    out.push(NamedStrategy { name: "AON-2", pattern: Pattern::Memory2(aon2_rule) });
    out.push(NamedStrategy { name: "TFT-ATFT", pattern: Pattern::Memory2(tft_atft_rule) });
    out
}

fn bit<T: Real>(b: bool) -> T {
    if b {
        T::one()
    } else {
        T::zero()
    }
}

pub fn memory1<T: Real>(name: &str) -> Option<Memory1Strategy<T>> {
    MEMORY1.iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(_, p)| {
        Memory1Strategy::from_entries(p.map(|b| bit(b == 1))).expect("catalog entries are valid")
    })
}

pub fn gtft<T: Real>(q: T) -> Option<Memory1Strategy<T>> {
    Memory1Strategy::new(T::one(), [T::one(), q, T::one(), q]).ok()
}

pub fn memory2<T: Real>(name: &str) -> Option<Memory2Strategy<T>> {
    let rule: fn(Scenario) -> bool = match name.to_ascii_uppercase().as_str() {
        "TF2T" => tf2t_rule,
        "AON-2" | "AON2" => aon2_rule,
        "TFT-ATFT" => tft_atft_rule,
        _ => return memory1::<T>(name).map(|s| s.lift()),
    };
    Some(Memory2Strategy::from_rule(|sc| bit(rule(sc))).expect("catalog entries are valid"))
}

/// Any catalog entry by name, memory-1 names returned lifted when `memory` is 2.
pub fn named<T: Real>(name: &str) -> Option<crate::strategy::Strategy<T>> {
    memory1::<T>(name)
        .map(Into::into)
        .or_else(|| memory2::<T>(name).map(Into::into))
}

/// Defect only after the co-player defected twice in a row.
fn tf2t_rule(sc: Scenario) -> bool {
    match sc {
        Scenario::History(o1, o2) => !(o1.other() == Action::R && o2.other() == Action::R),
        _ => true,
    }
}

/// Cooperate only if both players chose the same action in each of the last two rounds.
fn aon2_rule(sc: Scenario) -> bool {
    let same = |o: Outcome| o == Outcome::LL || o == Outcome::RR;
    match sc {
        Scenario::First => true,
        Scenario::After(o) | Scenario::Second(o) => same(o),
        Scenario::History(o1, o2) => same(o1) && same(o2),
    }
}

/// Tit-for-tat that switches to anti-tit-for-tat after a unilateral move,
/// returning to tit-for-tat after mutual cooperation or two co-player defections.
fn tft_atft_rule(sc: Scenario) -> bool {
    match sc {
        Scenario::First => true,
        Scenario::After(o) | Scenario::Second(o) => o.other() == Action::L,
        Scenario::History(o1, o2) => {
            if o1 == Outcome::LL {
                return true;
            }
            if o1.other() == Action::R && o2.other() == Action::R {
                return false;
            }
            let was_tft = o1.own() == o2.other();
            let unilateral = o1 == Outcome::LR || o1 == Outcome::RL;
            if was_tft && !unilateral {
                o1.other() == Action::L
            } else {
                o1.other() == Action::R
            }
        }
    }
}
