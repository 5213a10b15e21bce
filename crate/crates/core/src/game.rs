use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// A stage-game action. `L` is the cooperative action, `R` the defective one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    L,
    R,
}

impl Action {
    /// Cooperate/defect alias used in the main-text notation.
    pub fn alias(self) -> char {
        match self {
            Action::L => 'C',
            Action::R => 'D',
        }
    }

    pub fn from_cooperate(c: bool) -> Self {
        if c {
            Action::L
        } else {
            Action::R
        }
    }

    pub fn is_cooperate(self) -> bool {
        self == Action::L
    }

    pub fn flip(self) -> Self {
        match self {
            Action::L => Action::R,
            Action::R => Action::L,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::L => "L",
            Action::R => "R",
        })
    }
}

impl FromStr for Action {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "L" | "l" | "C" | "c" => Ok(Action::L),
            "R" | "r" | "D" | "d" => Ok(Action::R),
            other => Err(Error::Invalid(format!("unknown action {other:?}"))),
        }
    }
}

/// Joint outcome of one round, focal player's action first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    LL,
    LR,
    RL,
    RR,
}

impl Outcome {
    pub const ALL: [Outcome; 4] = [Outcome::LL, Outcome::LR, Outcome::RL, Outcome::RR];

    pub fn new(own: Action, other: Action) -> Self {
        match (own, other) {
            (Action::L, Action::L) => Outcome::LL,
            (Action::L, Action::R) => Outcome::LR,
            (Action::R, Action::L) => Outcome::RL,
            (Action::R, Action::R) => Outcome::RR,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }

    /// The same round seen from the co-player's side.
    pub fn swap(self) -> Self {
        match self {
            Outcome::LR => Outcome::RL,
            Outcome::RL => Outcome::LR,
            o => o,
        }
    }

    pub fn own(self) -> Action {
        match self {
            Outcome::LL | Outcome::LR => Action::L,
            Outcome::RL | Outcome::RR => Action::R,
        }
    }

    pub fn other(self) -> Action {
        self.swap().own()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.own(), self.other())
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(a), Some(b), None) => Ok(Outcome::new(
                a.to_string().parse()?,
                b.to_string().parse()?,
            )),
            _ => Err(Error::Invalid(format!("unknown outcome {s:?}"))),
        }
    }
}

/// Symmetric 2x2 stage game, payoffs from the focal player's side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageGame<T> {
    pub a_ll: T,
    pub a_lr: T,
    pub a_rl: T,
    pub a_rr: T,
}

impl<T: Real> StageGame<T> {
    pub fn new(a_ll: T, a_lr: T, a_rl: T, a_rr: T) -> Self {
        StageGame { a_ll, a_lr, a_rl, a_rr }
    }

    /// The (3, 0, 5, 1) game.
    pub fn standard() -> Self {
        Self::from_array([3.0, 0.0, 5.0, 1.0].map(T::lit))
    }

    /// The (10, 0, 10 + x, x) family.
    pub fn equal_gains(x: T) -> Self {
        let ten = T::lit(10.0);
        StageGame::new(ten, T::zero(), ten + x, x)
    }

    pub fn from_array(a: [T; 4]) -> Self {
        StageGame::new(a[0], a[1], a[2], a[3])
    }

    pub fn payoff_vector(&self) -> [T; 4] {
        [self.a_ll, self.a_lr, self.a_rl, self.a_rr]
    }

    pub fn payoff(&self, o: Outcome) -> T {
        self.payoff_vector()[o.index()]
    }

    pub fn is_prisoners_dilemma(&self) -> bool {
        self.a_rl > self.a_ll
            && self.a_ll > self.a_rr
            && self.a_rr > self.a_lr
            && self.a_ll + self.a_ll > self.a_rl + self.a_lr
    }

    pub fn is_equal_gains(&self, x: T) -> bool {
        *self == Self::equal_gains(x)
    }

    /// The x of an equal-gains game, if it is one.
    pub fn equal_gains_x(&self) -> Option<T> {
        let x = self.a_rr;
        self.is_equal_gains(x).then_some(x)
    }

    pub fn min(&self) -> T {
        self.payoff_vector().into_iter().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.payoff_vector().into_iter().fold(T::neg_infinity(), T::max)
    }

    pub fn to_f64(&self) -> [f64; 4] {
        self.payoff_vector().map(|v| v.to_f64().unwrap_or(f64::NAN))
    }
}

impl<T: Real> FromStr for StageGame<T> {
    type Err = Error;

    /// Parses `a,b,c,d`.
    fn from_str(s: &str) -> Result<Self> {
        let vals = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Invalid(format!("bad payoff {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let arr: [f64; 4] = vals
            .try_into()
            .map_err(|v: Vec<f64>| Error::Length { expected: 4, got: v.len() })?;
        if arr.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("payoffs must be finite".into()));
        }
        Ok(Self::from_array(arr.map(T::lit)))
    }
}
