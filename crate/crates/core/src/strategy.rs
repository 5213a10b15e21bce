use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Outcome;
use crate::real::Real;

fn check_prob<T: Real>(index: usize, v: T) -> Result<T> {
    let eps = T::prob_eps();
    if !(v >= -eps && v <= T::one() + eps) {
        return Err(Error::Probability { index, value: v.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(v.max(T::zero()).min(T::one()))
}

fn is_pure<T: Real>(v: T) -> bool {
    v == T::zero() || v == T::one()
}

/// `(p0; p_LL, p_LR, p_RL, p_RR)`: cooperation probability in round one and after each outcome.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Memory1Strategy<T> {
    pub p0: T,
    pub p: [T; 4],
}

impl<T: Real> Memory1Strategy<T> {
    pub fn new(p0: T, p: [T; 4]) -> Result<Self> {
        let p0 = check_prob(0, p0)?;
        let mut out = [T::zero(); 4];
        for (i, v) in p.into_iter().enumerate() {
            out[i] = check_prob(i + 1, v)?;
        }
        Ok(Memory1Strategy { p0, p: out })
    }

    /// Builds from the five entries in display order `p0, p_LL, p_LR, p_RL, p_RR`.
    pub fn from_entries(e: [T; 5]) -> Result<Self> {
        Self::new(e[0], [e[1], e[2], e[3], e[4]])
    }

    pub fn from_f64(e: [f64; 5]) -> Result<Self> {
        Self::from_entries(e.map(T::lit))
    }

    pub fn entries(&self) -> [T; 5] {
        [self.p0, self.p[0], self.p[1], self.p[2], self.p[3]]
    }

    pub fn after(&self, o: Outcome) -> T {
        self.p[o.index()]
    }

    pub fn is_deterministic(&self) -> bool {
        self.entries().into_iter().all(is_pure)
    }

    /// Same strategy with a different opening move probability.
    pub fn with_p0(mut self, p0: T) -> Result<Self> {
        self.p0 = check_prob(0, p0)?;
        Ok(self)
    }

    pub fn lift(&self) -> Memory2Strategy<T> {
        let mut h2 = [T::zero(); 16];
        for o1 in Outcome::ALL {
            for o2 in Outcome::ALL {
                h2[h2_index(o1, o2)] = self.after(o1);
            }
        }
        Memory2Strategy { p0: self.p0, r2: self.p, h2 }
    }

    pub fn cast<U: Real>(&self) -> Memory1Strategy<U> {
        let c = |v: T| U::lit(v.to_f64().unwrap_or(f64::NAN));
        Memory1Strategy { p0: c(self.p0), p: self.p.map(c) }
    }
}

impl<T: Real> fmt::Display for Memory1Strategy<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}, {}, {}, {})", self.p0, self.p[0], self.p[1], self.p[2], self.p[3])
    }
}

/// Flat position of the history entry for last outcome `o1` and the one before it `o2`.
pub fn h2_index(o1: Outcome, o2: Outcome) -> usize {
    4 * o1.index() + o2.index()
}

/// Inverse of [`h2_index`].
pub fn h2_outcomes(k: usize) -> (Outcome, Outcome) {
    (Outcome::from_index(k / 4), Outcome::from_index(k % 4))
}

/// 21 cooperation probabilities: round one, round two by round-one outcome,
/// then by the last two outcomes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Memory2Strategy<T> {
    pub p0: T,
    pub r2: [T; 4],
    pub h2: [T; 16],
}

impl<T: Real> Memory2Strategy<T> {
    pub fn new(p0: T, r2: [T; 4], h2: [T; 16]) -> Result<Self> {
        let mut e = [T::zero(); 21];
        e[0] = p0;
        e[1..5].copy_from_slice(&r2);
        e[5..].copy_from_slice(&h2);
        Self::from_entries(&e)
    }

    /// Builds from all 21 entries: `p0`, the four round-two entries, then the sixteen history entries.
    pub fn from_entries(e: &[T]) -> Result<Self> {
        if e.len() != 21 {
            return Err(Error::Length { expected: 21, got: e.len() });
        }
        let mut v = [T::zero(); 21];
        for (i, x) in e.iter().enumerate() {
            v[i] = check_prob(i, *x)?;
        }
        let mut r2 = [T::zero(); 4];
        let mut h2 = [T::zero(); 16];
        r2.copy_from_slice(&v[1..5]);
        h2.copy_from_slice(&v[5..]);
        Ok(Memory2Strategy { p0: v[0], r2, h2 })
    }

    pub fn from_f64(e: &[f64]) -> Result<Self> {
        Self::from_entries(&e.iter().map(|&x| T::lit(x)).collect::<Vec<_>>())
    }

    /// Fills every entry from a rule on the scenario.
    pub fn from_rule(rule: impl Fn(Scenario) -> T) -> Result<Self> {
        let e: Vec<T> = Scenario::memory2().map(rule).collect();
        Self::from_entries(&e)
    }

    pub fn entries(&self) -> [T; 21] {
        let mut e = [T::zero(); 21];
        e[0] = self.p0;
        e[1..5].copy_from_slice(&self.r2);
        e[5..].copy_from_slice(&self.h2);
        e
    }

    pub fn history(&self, o1: Outcome, o2: Outcome) -> T {
        self.h2[h2_index(o1, o2)]
    }

    pub fn is_deterministic(&self) -> bool {
        self.entries().into_iter().all(is_pure)
    }

    pub fn cast<U: Real>(&self) -> Memory2Strategy<U> {
        let c = |v: T| U::lit(v.to_f64().unwrap_or(f64::NAN));
        Memory2Strategy { p0: c(self.p0), r2: self.r2.map(c), h2: self.h2.map(c) }
    }
}

/// A situation in which a strategy is asked for its next move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    /// Round one.
    First,
    /// A later round with only the last outcome known.
    After(Outcome),
    /// Round two of a memory-2 elicitation, given round one's outcome.
    Second(Outcome),
    /// A later round with the last two outcomes known, most recent first.
    History(Outcome, Outcome),
}

impl Scenario {
    pub fn memory1() -> impl Iterator<Item = Scenario> {
        std::iter::once(Scenario::First).chain(Outcome::ALL.into_iter().map(Scenario::After))
    }

    pub fn memory2() -> impl Iterator<Item = Scenario> {
        std::iter::once(Scenario::First)
            .chain(Outcome::ALL.into_iter().map(Scenario::Second))
            .chain((0..16).map(|k| {
                let (a, b) = h2_outcomes(k);
                Scenario::History(a, b)
            }))
    }

    pub fn for_memory(memory: u8) -> Result<Vec<Scenario>> {
        match memory {
            1 => Ok(Self::memory1().collect()),
            2 => Ok(Self::memory2().collect()),
            m => Err(Error::Memory(m)),
        }
    }

    pub fn memory(&self) -> u8 {
        match self {
            Scenario::First => 1,
            Scenario::After(_) => 1,
            Scenario::Second(_) | Scenario::History(..) => 2,
        }
    }

    pub fn id(&self) -> String {
        match self {
            Scenario::First => "R1".into(),
            Scenario::After(o) => o.to_string(),
            Scenario::Second(o) => format!("R2:{o}"),
            Scenario::History(a, b) => format!("{a}:{b}"),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "R1" {
            return Ok(Scenario::First);
        }
        if let Some(rest) = s.strip_prefix("R2:") {
            return Ok(Scenario::Second(rest.parse()?));
        }
        match s.split_once(':') {
            Some((a, b)) => Ok(Scenario::History(a.parse()?, b.parse()?)),
            None => Ok(Scenario::After(s.parse()?)),
        }
    }
}

/// A memory-1 or memory-2 strategy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StrategyJson", into = "StrategyJson", bound = "T: Real")]
pub enum Strategy<T> {
    M1(Memory1Strategy<T>),
    M2(Memory2Strategy<T>),
}

impl<T: Real> Strategy<T> {
    pub fn memory(&self) -> u8 {
        match self {
            Strategy::M1(_) => 1,
            Strategy::M2(_) => 2,
        }
    }

    pub fn to_memory2(&self) -> Memory2Strategy<T> {
        match self {
            Strategy::M1(s) => s.lift(),
            Strategy::M2(s) => *s,
        }
    }

    pub fn is_deterministic(&self) -> bool {
        match self {
            Strategy::M1(s) => s.is_deterministic(),
            Strategy::M2(s) => s.is_deterministic(),
        }
    }

    /// Cooperation probability in a scenario, `None` if the scenario does not fit the memory order.
    pub fn cooperation(&self, sc: Scenario) -> Option<T> {
        match (self, sc) {
            (Strategy::M1(s), Scenario::First) => Some(s.p0),
            (Strategy::M1(s), Scenario::After(o)) => Some(s.after(o)),
            (Strategy::M2(s), Scenario::First) => Some(s.p0),
            (Strategy::M2(s), Scenario::Second(o)) => Some(s.r2[o.index()]),
            (Strategy::M2(s), Scenario::History(a, b)) => Some(s.history(a, b)),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("strategy serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))
    }
}

impl<T> From<Memory1Strategy<T>> for Strategy<T> {
    fn from(s: Memory1Strategy<T>) -> Self {
        Strategy::M1(s)
    }
}

impl<T> From<Memory2Strategy<T>> for Strategy<T> {
    fn from(s: Memory2Strategy<T>) -> Self {
        Strategy::M2(s)
    }
}

/// Wire form: `{"memory": 1|2, "p0": f, "entries": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyJson {
    pub memory: u8,
    pub p0: f64,
    pub entries: Vec<f64>,
}

impl<T: Real> From<Strategy<T>> for StrategyJson {
    fn from(s: Strategy<T>) -> Self {
        let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
        match s {
            Strategy::M1(m) => StrategyJson { memory: 1, p0: f(m.p0), entries: m.p.map(f).to_vec() },
            Strategy::M2(m) => StrategyJson {
                memory: 2,
                p0: f(m.p0),
                entries: m.entries()[1..].iter().copied().map(f).collect(),
            },
        }
    }
}

impl<T: Real> TryFrom<StrategyJson> for Strategy<T> {
    type Error = Error;

    fn try_from(j: StrategyJson) -> Result<Self> {
        match j.memory {
            1 => {
                let p: [f64; 4] = j
                    .entries
                    .as_slice()
                    .try_into()
                    .map_err(|_| Error::Length { expected: 4, got: j.entries.len() })?;
                Ok(Strategy::M1(Memory1Strategy::new(T::lit(j.p0), p.map(T::lit))?))
            }
            2 => {
                if j.entries.len() != 20 {
                    return Err(Error::Length { expected: 20, got: j.entries.len() });
                }
                let mut e = vec![j.p0];
                e.extend_from_slice(&j.entries);
                Ok(Strategy::M2(Memory2Strategy::from_f64(&e)?))
            }
            m => Err(Error::Memory(m)),
        }
    }
}
