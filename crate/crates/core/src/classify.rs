//! Nash, partner and rival checks against deterministic deviants, plus sampling-based
//! measures against random memory-1 opponents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::StageGame;
use crate::payoff_m1::payoff_m1_any;
use crate::payoff_m2::payoff_m2;
use crate::real::Real;
use crate::strategy::{Memory1Strategy, Memory2Strategy, Strategy};

pub const DEFAULT_TOL: f64 = 1e-9;

const SAMPLE_CHUNK: usize = 1 << 14;

fn bit<T: Real>(k: u32, pos: u32, width: u32) -> T {
    if (k >> (width - 1 - pos)) & 1 == 1 {
        T::one()
    } else {
        T::zero()
    }
}

/// The `k`-th deterministic memory-1 strategy; `p0` is the most significant bit.
pub fn deterministic_m1<T: Real>(k: u32) -> Memory1Strategy<T> {
    let e: [T; 5] = std::array::from_fn(|i| bit(k, i as u32, 5));
    Memory1Strategy::from_entries(e).expect("pure entries are valid")
}

/// The `k`-th deterministic memory-2 strategy in entry order.
pub fn deterministic_m2<T: Real>(k: u32) -> Memory2Strategy<T> {
    let e: [T; 21] = std::array::from_fn(|i| bit(k, i as u32, 21));
    Memory2Strategy::from_entries(&e).expect("pure entries are valid")
}

pub fn deterministic_count(memory: u8) -> Result<u32> {
    match memory {
        1 => Ok(1 << 5),
        2 => Ok(1 << 21),
        m => Err(Error::Memory(m)),
    }
}

/// Every deterministic strategy of the given memory, from all-defect to all-cooperate.
pub fn enumerate_deterministic<T: Real>(memory: u8) -> Result<impl Iterator<Item = Strategy<T>>> {
    let n = deterministic_count(memory)?;
    Ok((0..n).map(move |k| deterministic(memory, k)))
}

fn deterministic<T: Real>(memory: u8, k: u32) -> Strategy<T> {
    if memory == 1 {
        deterministic_m1(k).into()
    } else {
        deterministic_m2(k).into()
    }
}

/// Player 1's per-round payoff; memory-1 pairs support `w = 0`, mixed pairs are lifted.
pub fn pair_payoff<T: Real>(a: &Strategy<T>, b: &Strategy<T>, g: &StageGame<T>, w: T) -> Result<T> {
    match (a, b) {
        (Strategy::M1(x), Strategy::M1(y)) => payoff_m1_any(x, y, g, w),
        _ => {
            if w == T::zero() {
                return Err(Error::Invalid("memory-2 payoffs need w > 0".into()));
            }
            payoff_m2(&a.to_memory2(), &b.to_memory2(), g, w)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct Deviation<T> {
    pub strategy: Strategy<T>,
    pub payoff: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct NashCheck<T> {
    pub is_nash: bool,
    pub self_payoff: T,
    /// The deterministic deviant that earns most against the strategy.
    pub worst_deviation: Deviation<T>,
}

fn check_memory2_w<T: Real>(sigma: &Strategy<T>, w: T) -> Result<()> {
    if sigma.memory() == 2 && !(w > T::zero()) {
        return Err(Error::Invalid("memory-2 checks need w > 0".into()));
    }
    Ok(())
}

/// No deterministic deviant of the same memory earns more than `tol` above the self-payoff.
pub fn is_nash<T: Real>(sigma: &Strategy<T>, g: &StageGame<T>, w: T, tol: T) -> Result<NashCheck<T>> {
    check_memory2_w(sigma, w)?;
    let self_payoff = pair_payoff(sigma, sigma, g, w)?;
    let memory = sigma.memory();
    let n = deterministic_count(memory)?;
    let (k, payoff) = (0..n)
        .into_par_iter()
        .map(|k| pair_payoff(&deterministic(memory, k), sigma, g, w).map(|v| (k, v)))
        .try_reduce(
            || (u32::MAX, T::neg_infinity()),
            |a, b| Ok(if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a }),
        )?;
    Ok(NashCheck {
        is_nash: payoff <= self_payoff + tol,
        self_payoff,
        worst_deviation: Deviation { strategy: deterministic(memory, k), payoff },
    })
}

fn require_pd<T: Real>(g: &StageGame<T>) -> Result<()> {
    if g.is_prisoners_dilemma() {
        Ok(())
    } else {
        Err(Error::NotPrisonersDilemma(g.to_f64()))
    }
}

/// The partner condition without the Prisoner's Dilemma precondition.
pub fn partner_condition<T: Real>(nash: &NashCheck<T>, g: &StageGame<T>, tol: T) -> bool {
    nash.is_nash && (nash.self_payoff - g.a_ll).abs() <= tol
}

/// A Nash strategy that earns the mutual-cooperation payoff against itself.
pub fn is_partner<T: Real>(sigma: &Strategy<T>, g: &StageGame<T>, w: T, tol: T) -> Result<bool> {
    require_pd(g)?;
    let nash = is_nash(sigma, g, w, tol)?;
    Ok(partner_condition(&nash, g, tol))
}

/// The rival condition without the Prisoner's Dilemma precondition: no deterministic
/// deviant outscores the strategy in their pairwise game.
pub fn rival_condition<T: Real>(sigma: &Strategy<T>, g: &StageGame<T>, w: T, tol: T) -> Result<bool> {
    check_memory2_w(sigma, w)?;
    let memory = sigma.memory();
    let n = deterministic_count(memory)?;
    let beaten = (0..n).into_par_iter().map(|k| -> Result<bool> {
        let d = deterministic(memory, k);
        let mine = pair_payoff(sigma, &d, g, w)?;
        let theirs = pair_payoff(&d, sigma, g, w)?;
        Ok(mine < theirs - tol)
    });
    let found = beaten.find_any(|r| !matches!(r, Ok(false)));
    match found {
        None => Ok(true),
        Some(Ok(_)) => Ok(false),
        Some(Err(e)) => Err(e),
    }
}

pub fn is_rival<T: Real>(sigma: &Strategy<T>, g: &StageGame<T>, w: T, tol: T) -> Result<bool> {
    require_pd(g)?;
    rival_condition(sigma, g, w, tol)
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

fn random_m1<T: Real, R: Rng>(rng: &mut R) -> Memory1Strategy<T> {
    let e: [T; 5] = std::array::from_fn(|_| T::lit(rng.random::<f64>()));
    Memory1Strategy::from_entries(e).expect("uniform draws are probabilities")
}

/// `n` opponents with i.i.d. uniform entries, drawn in fixed-size chunks with one
/// generator stream per chunk so that parallel consumers see the same sequence.
pub fn random_opponents<T: Real>(n: usize, seed: u64) -> Vec<Memory1Strategy<T>> {
    (0..n.div_ceil(SAMPLE_CHUNK))
        .flat_map(|c| {
            let mut rng = chunk_rng(seed, c);
            let len = SAMPLE_CHUNK.min(n - c * SAMPLE_CHUNK);
            (0..len).map(move |_| random_m1::<T, _>(&mut rng))
        })
        .collect()
}

/// Percentage of random memory-1 opponents that earn strictly more against `sigma`
/// than `sigma` earns against itself.
pub fn beat_percentage<T: Real>(sigma: &Memory1Strategy<T>, g: &StageGame<T>, w: T, n: usize, seed: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("need at least one sample".into()));
    }
    let base = payoff_m1_any(sigma, sigma, g, w)?;
    let chunks = n.div_ceil(SAMPLE_CHUNK);
    let wins = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<usize> {
            let mut rng = chunk_rng(seed, c);
            let len = SAMPLE_CHUNK.min(n - c * SAMPLE_CHUNK);
            let mut wins = 0;
            for _ in 0..len {
                let opp = random_m1::<T, _>(&mut rng);
                if payoff_m1_any(&opp, sigma, g, w)? > base {
                    wins += 1;
                }
            }
            Ok(wins)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(100.0 * wins as f64 / n as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct Classification<T> {
    pub game: [f64; 4],
    pub w: f64,
    pub is_nash: bool,
    pub is_partner: bool,
    pub is_rival: bool,
    /// Present exactly when the strategy is not a Nash equilibrium.
    pub beat_percentage: Option<f64>,
    pub self_payoff: T,
    pub worst_deviation: Deviation<T>,
}

/// Full report. Partner and rival flags use the unchecked conditions so that non-dilemma
/// games still get a report; call [`is_partner`] or [`is_rival`] for the strict versions.
pub fn classify<T: Real>(
    sigma: &Strategy<T>,
    g: &StageGame<T>,
    w: T,
    tol: T,
    samples: usize,
    seed: u64,
) -> Result<Classification<T>> {
    let nash = is_nash(sigma, g, w, tol)?;
    let is_rival = rival_condition(sigma, g, w, tol)?;
    let beat = match (nash.is_nash, sigma) {
        (true, _) => None,
        (false, Strategy::M1(s)) => Some(beat_percentage(s, g, w, samples, seed)?),
        (false, Strategy::M2(_)) => None,
    };
    Ok(Classification {
        game: g.to_f64(),
        w: w.to_f64().unwrap_or(f64::NAN),
        is_partner: partner_condition(&nash, g, tol),
        is_nash: nash.is_nash,
        is_rival,
        beat_percentage: beat,
        self_payoff: nash.self_payoff,
        worst_deviation: nash.worst_deviation,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PayoffRegionSample<T> {
    /// `(opponent payoff against sigma, sigma payoff against opponent)`.
    pub points: Vec<(T, T)>,
    pub opponent_range: (T, T),
    pub sigma_range: (T, T),
}

/// Payoff pairs against the 32 deterministic memory-1 strategies and `n` random ones.
pub fn payoff_region<T: Real>(sigma: &Memory1Strategy<T>, g: &StageGame<T>, w: T, n: usize, seed: u64) -> Result<PayoffRegionSample<T>> {
    let corners: Vec<Memory1Strategy<T>> = (0..32).map(deterministic_m1).collect();
    let mut opponents = random_opponents::<T>(n, seed);
    opponents.extend(corners);
    let points = opponents
        .par_iter()
        .map(|o| Ok((payoff_m1_any(o, sigma, g, w)?, payoff_m1_any(sigma, o, g, w)?)))
        .collect::<Result<Vec<_>>>()?;
    let range = |f: fn(&(T, T)) -> T| {
        points.iter().map(f).fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    Ok(PayoffRegionSample { opponent_range: range(|p| p.0), sigma_range: range(|p| p.1), points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::memory1;

    fn named(n: &str) -> Strategy<f64> {
        memory1::<f64>(n).unwrap().into()
    }

    const TOL: f64 = DEFAULT_TOL;

    #[test]
    fn enumeration_order() {
        let all: Vec<Strategy<f64>> = enumerate_deterministic(1).unwrap().collect();
        assert_eq!(all.len(), 32);
        assert_eq!(all[0], named("ALLD"));
        assert_eq!(all[31], named("ALLC"));
        assert_eq!(all.iter().filter(|s| **s == named("GRIM")).count(), 1);
        assert_eq!(deterministic_count(2).unwrap(), 2_097_152);
        assert!(enumerate_deterministic::<f64>(3).is_err());
    }

    #[test]
    fn nash_examples() {
        let g = StageGame::standard();
        assert!(is_nash(&named("ALLD"), &g, 0.01, TOL).unwrap().is_nash);
        assert!(is_nash(&named("Forgiver"), &g, 0.0, TOL).unwrap().is_nash);
        let f = is_nash(&named("Forgiver"), &g, 0.01, TOL).unwrap();
        assert!(!f.is_nash);
        assert!(f.worst_deviation.payoff > f.self_payoff);
    }

    #[test]
    fn partner_and_rival_examples() {
        let g = StageGame::standard();
        assert!(is_partner(&named("GRIM"), &g, 0.01, TOL).unwrap());
        assert!(!is_partner(&named("ALLD"), &g, 0.01, TOL).unwrap());
        assert!(is_rival(&named("ALLD"), &g, 0.01, TOL).unwrap());
        assert!(is_rival(&named("GRIM"), &g, 0.0, TOL).unwrap());
        assert!(!is_rival(&named("ALLC"), &g, 0.01, TOL).unwrap());
        let x10 = StageGame::equal_gains(10.0);
        assert!(matches!(is_partner(&named("WSLS"), &x10, 0.01, TOL), Err(Error::NotPrisonersDilemma(_))));
        assert!(is_rival(&named("WSLS"), &x10, 0.01, TOL).is_err());
    }

    #[test]
    fn nash_strategy_is_never_beaten() {
        let g = StageGame::standard();
        let v = beat_percentage(&memory1("ALLD").unwrap(), &g, 0.01, 5000, 7).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn beat_percentage_is_seed_deterministic() {
        let g = StageGame::standard();
        let s = memory1::<f64>("Forgiver").unwrap();
        let a = beat_percentage(&s, &g, 0.01, 40_000, 3).unwrap();
        let b = beat_percentage(&s, &g, 0.01, 40_000, 3).unwrap();
        assert_eq!(a, b);
        assert!(a > 0.0 && a < 10.0);
    }

    #[test]
    fn classification_shape() {
        let g = StageGame::standard();
        let c = classify(&named("ALLC"), &g, 0.01, TOL, 2000, 1).unwrap();
        assert!(!c.is_nash && !c.is_partner && !c.is_rival);
        assert!(c.beat_percentage.unwrap() > 99.0);
        let c = classify(&named("GRIM"), &g, 0.01, TOL, 2000, 1).unwrap();
        assert!(c.is_nash && c.is_partner && c.beat_percentage.is_none());
    }

    #[test]
    fn region_of_alld_and_allc() {
        let g = StageGame::standard();
        let r = payoff_region(&memory1::<f64>("ALLC").unwrap(), &g, 0.01, 200, 5).unwrap();
        assert!((r.sigma_range.0 - 0.0).abs() < 1e-12);
        let r = payoff_region(&memory1("ALLD").unwrap(), &g, 0.01, 200, 5).unwrap();
        assert!(r.opponent_range.0 >= 0.0 && r.opponent_range.1 <= 1.0 + 1e-12);
        assert!(r.sigma_range.0 >= 1.0 - 1e-12 && r.sigma_range.1 <= 5.0 + 1e-12);
        for (a, b) in r.points {
            assert!((0.0..=5.0).contains(&a) && (0.0..=5.0).contains(&b));
        }
    }
}
