//! Round-robin tournaments among a roster of strategies.

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::pair_payoff;
use crate::error::{Error, Result};
use crate::game::StageGame;
use crate::real::Real;
use crate::strategy::Strategy;

/// Row sums closer than this share a rank.
pub const RANK_TIE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct TournamentResult<T> {
    pub names: Vec<String>,
    #[serde(skip)]
    pub roster: Vec<Strategy<T>>,
    /// `matrix[i][j]` is the payoff of row strategy `i` against column strategy `j`.
    pub matrix: Vec<Vec<T>>,
    pub include_self: bool,
    pub row_sums: Vec<T>,
    pub ranks: Vec<usize>,
}

/// Rank 1 for the largest value; tied values share the best rank and the following
/// rank is skipped (1, 1, 3).
pub fn rank_descending<T: Real>(values: &[T]) -> Vec<usize> {
    let tol = T::lit(RANK_TIE_TOL);
    values
        .iter()
        .map(|&v| 1 + values.iter().filter(|&&u| u > v + tol).count())
        .collect()
}

fn row_sums<T: Real>(matrix: &[Vec<T>], include_self: bool) -> Vec<T> {
    matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| include_self || *j != i)
                .map(|(_, v)| *v)
                .sum()
        })
        .collect()
}

pub fn run_tournament<T: Real>(
    roster: &[(String, Strategy<T>)],
    g: &StageGame<T>,
    w: T,
    include_self: bool,
) -> Result<TournamentResult<T>> {
    if roster.is_empty() {
        return Err(Error::Invalid("empty roster".into()));
    }
    let mixed = roster.iter().any(|(_, s)| s.memory() == 2);
    let strategies: Vec<Strategy<T>> = roster
        .iter()
        .map(|(_, s)| if mixed { Strategy::M2(s.to_memory2()) } else { *s })
        .collect();
    let n = strategies.len();
    let flat = (0..n * n)
        .into_par_iter()
        .map(|k| pair_payoff(&strategies[k / n], &strategies[k % n], g, w))
        .collect::<Result<Vec<T>>>()?;
    let matrix: Vec<Vec<T>> = flat.chunks(n).map(|r| r.to_vec()).collect();
    let sums = row_sums(&matrix, include_self);
    Ok(TournamentResult {
        names: roster.iter().map(|(n, _)| n.clone()).collect(),
        roster: strategies,
        ranks: rank_descending(&sums),
        row_sums: sums,
        matrix,
        include_self,
    })
}

/// Entrywise sum of tournaments over the same roster, re-ranked.
pub fn aggregate_tournaments<T: Real>(results: &[TournamentResult<T>]) -> Result<TournamentResult<T>> {
    let first = results.first().ok_or_else(|| Error::Invalid("nothing to aggregate".into()))?;
    for r in &results[1..] {
        if r.names != first.names {
            return Err(Error::RosterMismatch(format!("{:?} vs {:?}", first.names, r.names)));
        }
        if r.include_self != first.include_self {
            return Err(Error::RosterMismatch("self-play settings differ".into()));
        }
    }
    let n = first.names.len();
    let mut matrix = vec![vec![T::zero(); n]; n];
    for r in results {
        for (i, row) in r.matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                matrix[i][j] += *v;
            }
        }
    }
    let sums = row_sums(&matrix, first.include_self);
    Ok(TournamentResult {
        names: first.names.clone(),
        roster: first.roster.clone(),
        ranks: rank_descending(&sums),
        row_sums: sums,
        matrix,
        include_self: first.include_self,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::memory1;

    fn roster(names: &[&str]) -> Vec<(String, Strategy<f64>)> {
        names.iter().map(|n| (n.to_string(), memory1::<f64>(n).unwrap().into())).collect()
    }

    #[test]
    fn ranking_with_ties() {
        assert_eq!(rank_descending(&[3.0, 5.0, 5.0, 1.0]), vec![3, 1, 1, 4]);
        assert_eq!(rank_descending(&[15.0; 5]), vec![1; 5]);
    }

    #[test]
    fn single_alld() {
        let t = run_tournament(&roster(&["ALLD"]), &StageGame::standard(), 0.01, true).unwrap();
        assert_eq!(t.matrix, vec![vec![1.0]]);
        assert_eq!(t.ranks, vec![1]);
    }

    #[test]
    fn exclude_self() {
        let t = run_tournament(&roster(&["ALLD", "ALLC"]), &StageGame::standard(), 1.0, false).unwrap();
        assert_eq!(t.row_sums, vec![5.0, 0.0]);
        assert_eq!(t.ranks, vec![1, 2]);
    }

    #[test]
    fn aggregate_rules() {
        let g = StageGame::standard();
        let a = run_tournament(&roster(&["ALLD", "TFT"]), &g, 0.1, true).unwrap();
        let b = run_tournament(&roster(&["TFT", "ALLD"]), &g, 0.1, true).unwrap();
        assert!(aggregate_tournaments(&[a.clone(), b]).is_err());
        assert_eq!(aggregate_tournaments(std::slice::from_ref(&a)).unwrap(), a);
        let twice = aggregate_tournaments(&[a.clone(), a.clone()]).unwrap();
        assert_eq!(twice.row_sums, a.row_sums.iter().map(|v| 2.0 * v).collect::<Vec<_>>());
    }

    #[test]
    fn mixed_memory_is_lifted() {
        let mut r = roster(&["TFT"]);
        r.push(("TF2T".into(), crate::catalog::memory2::<f64>("TF2T").unwrap().into()));
        let t = run_tournament(&r, &StageGame::standard(), 0.1, true).unwrap();
        assert!(t.roster.iter().all(|s| s.memory() == 2));
        assert!((t.matrix[0][1] - 3.0).abs() < 1e-12);
    }
}
