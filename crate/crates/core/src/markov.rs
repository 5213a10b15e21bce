//! Recurrent-class analysis of small finite Markov chains.

use crate::linalg::{solve_dyn, Matrix};
use crate::real::Real;

/// Closed communicating classes, transient states, and per-class data of a chain.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub closed: Vec<Vec<usize>>,
    pub transient: Vec<usize>,
}

fn support<T: Real, const N: usize>(m: &Matrix<T, N>) -> [[bool; N]; N] {
    let eps = T::support_eps();
    let mut s = [[false; N]; N];
    for i in 0..N {
        for j in 0..N {
            s[i][j] = m[i][j] > eps;
        }
    }
    s
}

/// Splits the states into closed classes and transient states using the support graph of `m`.
pub fn decompose<T: Real, const N: usize>(m: &Matrix<T, N>) -> Decomposition {
    let mut reach = support(m);
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..N {
        for i in 0..N {
            if reach[i][k] {
                for j in 0..N {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut seen = [false; N];
    let mut closed = Vec::new();
    let mut transient = Vec::new();
    for i in 0..N {
        if seen[i] {
            continue;
        }
        let class: Vec<usize> = (0..N).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &class {
            seen[j] = true;
        }
        let is_closed = class.iter().all(|&a| (0..N).all(|b| !reach[a][b] || class.contains(&b)));
        if is_closed {
            closed.push(class);
        } else {
            transient.extend(class);
        }
    }
    transient.sort_unstable();
    Decomposition { closed, transient }
}

/// Stationary distribution of the chain restricted to an irreducible class,
/// which is also its long-run time average when the class is periodic.
pub fn class_stationary<T: Real, const N: usize>(m: &Matrix<T, N>, class: &[usize]) -> Option<Vec<T>> {
    let k = class.len();
    // pi (I - P) = 0 with the last equation replaced by sum(pi) = 1, written as A pi = b
    let mut a = vec![vec![T::zero(); k]; k];
    for (r, &j) in class.iter().enumerate() {
        for (c, &i) in class.iter().enumerate() {
            let id = if i == j { T::one() } else { T::zero() };
            a[r][c] = id - m[i][j];
        }
    }
    for v in a[k - 1].iter_mut() {
        *v = T::one();
    }
    let mut b = vec![T::zero(); k];
    b[k - 1] = T::one();
    solve_dyn(a, b)
}

/// Probability of ending up in each closed class when started from `v0`.
pub fn absorption<T: Real, const N: usize>(
    m: &Matrix<T, N>,
    d: &Decomposition,
    v0: &[T; N],
) -> Option<Vec<T>> {
    let t = &d.transient;
    let mut weights: Vec<T> = d.closed.iter().map(|c| c.iter().map(|&i| v0[i]).sum()).collect();
    if t.is_empty() {
        return Some(weights);
    }
    let n = t.len();
    let mut a = vec![vec![T::zero(); n]; n];
    for (r, &i) in t.iter().enumerate() {
        for (c, &j) in t.iter().enumerate() {
            let id = if i == j { T::one() } else { T::zero() };
            a[r][c] = id - m[i][j];
        }
    }
    for (k, class) in d.closed.iter().enumerate() {
        let b: Vec<T> = t.iter().map(|&i| class.iter().map(|&j| m[i][j]).sum()).collect();
        let h = solve_dyn(a.clone(), b)?;
        weights[k] += t.iter().zip(&h).map(|(&i, &hi)| v0[i] * hi).sum();
    }
    Some(weights)
}

/// Long-run average of `reward` per step when started from `v0`.
pub fn limit_average<T: Real, const N: usize>(m: &Matrix<T, N>, v0: &[T; N], reward: &[T; N]) -> Option<T> {
    let d = decompose(m);
    let w = absorption(m, &d, v0)?;
    let mut total = T::zero();
    for (class, wk) in d.closed.iter().zip(w) {
        if wk == T::zero() {
            continue;
        }
        let pi = class_stationary(m, class)?;
        let r: T = class.iter().zip(&pi).map(|(&i, &p)| p * reward[i]).sum();
        total += wk * r;
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_class_time_average() {
        let m = [[0.0f64, 1.0], [1.0, 0.0]];
        let d = decompose(&m);
        assert_eq!(d.closed, vec![vec![0, 1]]);
        let avg = limit_average(&m, &[1.0, 0.0], &[0.0, 5.0]).unwrap();
        assert!((avg - 2.5).abs() < 1e-15);
    }

    #[test]
    fn absorbing_split() {
        // state 0 transient, 1 and 2 absorbing
        let m = [[0.5f64, 0.3, 0.2], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let d = decompose(&m);
        assert_eq!(d.transient, vec![0]);
        assert_eq!(d.closed.len(), 2);
        let w = absorption(&m, &d, &[1.0, 0.0, 0.0]).unwrap();
        assert!((w[0] - 0.6).abs() < 1e-12 && (w[1] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn float_noise_is_not_an_edge() {
        let m = [[1.0 - 1e-17, 1e-17], [0.0, 1.0]];
        assert_eq!(decompose(&m).closed.len(), 2);
    }
}
