//! Strategy estimates from per-scenario trial counts.

use serde::{Deserialize, Serialize};

use crate::catalog::{self, Pattern};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::strategy::{Memory1Strategy, Memory2Strategy, Scenario, Strategy};

/// 95% two-sided normal quantile.
pub const Z95: f64 = 1.959964;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Count {
    pub l: u32,
    pub n: u32,
}

/// Observed L-counts for every scenario of one memory order, in scenario order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioCounts {
    pub memory: u8,
    pub counts: Vec<Count>,
}

impl ScenarioCounts {
    pub fn new(memory: u8, counts: Vec<Count>) -> Result<Self> {
        let want = Scenario::for_memory(memory)?.len();
        if counts.len() != want {
            return Err(Error::Length { expected: want, got: counts.len() });
        }
        for (i, c) in counts.iter().enumerate() {
            if c.n == 0 || c.l > c.n {
                return Err(Error::Counts(format!("scenario {i}: {} of {}", c.l, c.n)));
            }
        }
        Ok(ScenarioCounts { memory, counts })
    }

    /// Same trial count `n` everywhere.
    pub fn uniform(memory: u8, l: &[u32], n: u32) -> Result<Self> {
        Self::new(memory, l.iter().map(|&l| Count { l, n }).collect())
    }

    pub fn scenarios(&self) -> Vec<Scenario> {
        Scenario::for_memory(self.memory).expect("memory validated on construction")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WilsonInterval<T> {
    pub point: T,
    pub lower: T,
    pub upper: T,
}

pub fn wilson_interval<T: Real>(l: u32, n: u32, z: T) -> Result<WilsonInterval<T>> {
    if n == 0 {
        return Err(Error::Counts("no trials".into()));
    }
    if l > n {
        return Err(Error::Counts(format!("{l} successes in {n} trials")));
    }
    if !(z > T::zero()) {
        return Err(Error::Invalid("z must be positive".into()));
    }
    let (lf, nf) = (T::lit(l as f64), T::lit(n as f64));
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let z2 = z * z;
    let center = (lf + z2 / two) / (nf + z2);
    let half = z * (lf * (nf - lf) / nf + z2 / four).sqrt() / (nf + z2);
    Ok(WilsonInterval {
        point: lf / nf,
        lower: (center - half).max(T::zero()),
        upper: (center + half).min(T::one()),
    })
}

/// Rounds half away from zero to `decimals` places, as printed tables do.
pub fn round_display(x: f64, decimals: u32) -> f64 {
    let s = 10f64.powi(decimals as i32);
    let y = x * s;
    // nudge values that sit on a tie only because of binary representation
    let r = (y + y.signum() * 1e-9).round();
    r / s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Label {
    pub name: String,
    pub approx: bool,
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.approx {
            write!(f, "~{}", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InferredStrategy<T> {
    pub strategy: Strategy<T>,
    pub intervals: Vec<WilsonInterval<T>>,
    pub label: Label,
}

fn rounded<T: Real>(e: &[T]) -> Vec<u8> {
    e.iter().map(|&v| u8::from(v >= T::lit(0.5))).collect()
}

fn bitstring(bits: &[u8]) -> String {
    bits.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
}

fn pure<T: Real>(e: &[T]) -> bool {
    e.iter().all(|&v| v == T::zero() || v == T::one())
}

/// Nearest catalog name after rounding each entry at 0.5; `approx` unless every entry is already pure.
pub fn label_strategy<T: Real>(s: &Strategy<T>) -> Label {
    match s {
        Strategy::M1(m) => label_memory1(m),
        Strategy::M2(m) => label_memory2(m),
    }
}

fn label_memory1<T: Real>(m: &Memory1Strategy<T>) -> Label {
    let e = m.entries();
    let bits = rounded(&e);
    let approx = !pure(&e);
    let half = T::lit(0.5);
    let generous = |v: T| v > T::zero() && v <= half;
    if bits == [1, 1, 0, 1, 0] && generous(m.p[1]) && generous(m.p[3]) {
        return Label { name: "GTFT".into(), approx: true };
    }
    let name = catalog::catalog()
        .into_iter()
        .find_map(|c| match c.pattern {
            Pattern::Memory1(p) if p[..] == bits[..] => Some(c.name.to_string()),
            _ => None,
        })
        .unwrap_or_else(|| bitstring(&bits));
    Label { name, approx }
}

fn label_memory2<T: Real>(m: &Memory2Strategy<T>) -> Label {
    let e = m.entries();
    let bits = rounded(&e);
    let approx = !pure(&e);
    let as_bits = |s: &Memory2Strategy<f64>| rounded(&s.entries());
    let name = catalog::catalog()
        .into_iter()
        .find_map(|c| {
            let s = match c.pattern {
                Pattern::Memory1(_) => catalog::memory1::<f64>(c.name).map(|s| s.lift()),
                Pattern::Memory2(_) => catalog::memory2::<f64>(c.name),
                Pattern::Generous => None,
            }?;
            (as_bits(&s) == bits).then(|| c.name.to_string())
        })
        .unwrap_or_else(|| bitstring(&bits));
    Label { name, approx }
}

/// Entrywise L-frequencies with Wilson intervals and a catalog label.
pub fn infer_strategy<T: Real>(counts: &ScenarioCounts) -> Result<InferredStrategy<T>> {
    let z = T::lit(Z95);
    let intervals = counts
        .counts
        .iter()
        .map(|c| wilson_interval(c.l, c.n, z))
        .collect::<Result<Vec<_>>>()?;
    let e: Vec<T> = counts.counts.iter().map(|c| T::lit(c.l as f64) / T::lit(c.n as f64)).collect();
    let strategy: Strategy<T> = match counts.memory {
        1 => Memory1Strategy::from_entries([e[0], e[1], e[2], e[3], e[4]])?.into(),
        2 => Memory2Strategy::from_entries(&e)?.into(),
        m => return Err(Error::Memory(m)),
    };
    let label = label_strategy(&strategy);
    Ok(InferredStrategy { strategy, intervals, label })
}
