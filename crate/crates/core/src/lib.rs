//! Exact payoffs, equilibrium checks, strategy inference and tournaments for the
//! repeated Prisoner's Dilemma with memory-1 and memory-2 strategies.
//!
//! Outcomes are ordered LL, LR, RL, RR with the focal player's action first; `L` is the
//! cooperative action. A stopping probability `w` ends the game after each round, so a game
//! lasts `1/w` rounds on average and `w = 0` means the limit of means. Elsewhere this is
//! sometimes written as a continuation probability `delta = 1 - w`.
//!
//! The numerics are generic over [`Real`] (`f32` or `f64`); the aliases below fix `f64`.

pub mod catalog;
pub mod classify;
pub mod error;
pub mod game;
pub mod inference;
pub mod linalg;
pub mod markov;
pub mod mdp;
pub mod payoff_m1;
pub mod payoff_m2;
pub mod real;
pub mod simulate;
pub mod strategy;
pub mod tournament;

pub use error::{Error, Result};
pub use game::{Action, Outcome};
pub use real::Real;
pub use strategy::Scenario;

pub type StageGame = game::StageGame<f64>;
pub type Memory1Strategy = strategy::Memory1Strategy<f64>;
pub type Memory2Strategy = strategy::Memory2Strategy<f64>;
pub type Strategy = strategy::Strategy<f64>;
pub type Classification = classify::Classification<f64>;
pub type TournamentResult = tournament::TournamentResult<f64>;
pub type InferredStrategy = inference::InferredStrategy<f64>;
pub type WilsonInterval = inference::WilsonInterval<f64>;
