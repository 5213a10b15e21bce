use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Scalar type used throughout the payoff engine. Implemented for `f32` and `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Entries below this magnitude are structural zeros in a transition matrix.
    fn support_eps() -> Self;

    /// Slack allowed when validating probabilities and stochastic rows.
    fn prob_eps() -> Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal fits the scalar type")
    }
}

impl Real for f64 {
    fn support_eps() -> Self {
        1e-15
    }
    fn prob_eps() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn support_eps() -> Self {
        1e-7
    }
    fn prob_eps() -> Self {
        1e-6
    }
}
