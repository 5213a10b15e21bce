use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("probability {value} at index {index} is outside [0, 1]")]
    Probability { index: usize, value: f64 },
    #[error("expected {expected} entries, got {got}")]
    Length { expected: usize, got: usize },
    #[error("stopping probability must lie in (0, 1], got {0}")]
    StoppingProbability(f64),
    #[error("game {0:?} is not a Prisoner's Dilemma")]
    NotPrisonersDilemma([f64; 4]),
    #[error("singular linear system")]
    Singular,
    #[error("invalid counts: {0}")]
    Counts(String),
    #[error("rosters differ: {0}")]
    RosterMismatch(String),
    #[error("unsupported memory order {0}")]
    Memory(u8),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
