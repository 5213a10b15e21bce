//! Dense LU with partial pivoting for the small fixed-size systems of the payoff engine.

use crate::real::Real;

pub type Matrix<T, const N: usize> = [[T; N]; N];

/// Row-pivoted LU factors of a square matrix.
pub struct Lu<T, const N: usize> {
    lu: Matrix<T, N>,
    perm: [usize; N],
}

impl<T: Real, const N: usize> Lu<T, N> {
    /// Returns `None` when a pivot vanishes.
    pub fn factor(mut a: Matrix<T, N>) -> Option<Self> {
        let mut perm = [0usize; N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        for k in 0..N {
            let mut piv = k;
            let mut best = a[k][k].abs();
            for (i, row) in a.iter().enumerate().skip(k + 1) {
                if row[k].abs() > best {
                    best = row[k].abs();
                    piv = i;
                }
            }
            if !(best > T::zero()) {
                return None;
            }
            if piv != k {
                a.swap(piv, k);
                perm.swap(piv, k);
            }
            let d = a[k][k];
            for i in k + 1..N {
                let f = a[i][k] / d;
                a[i][k] = f;
                if f != T::zero() {
                    for j in k + 1..N {
                        let t = a[k][j];
                        a[i][j] -= f * t;
                    }
                }
            }
        }
        Some(Lu { lu: a, perm })
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[T; N]) -> [T; N] {
        let mut x = [T::zero(); N];
        for i in 0..N {
            let mut s = b[self.perm[i]];
            for j in 0..i {
                s -= self.lu[i][j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..N).rev() {
            let mut s = x[i];
            for j in i + 1..N {
                s -= self.lu[i][j] * x[j];
            }
            x[i] = s / self.lu[i][i];
        }
        x
    }
}

pub fn transpose<T: Copy, const N: usize>(a: &Matrix<T, N>) -> Matrix<T, N> {
    let mut t = *a;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            t[j][i] = *v;
        }
    }
    t
}

/// Solves `A x = b`.
pub fn solve<T: Real, const N: usize>(a: Matrix<T, N>, b: &[T; N]) -> Option<[T; N]> {
    Lu::factor(a).map(|lu| lu.solve(b))
}

/// Solves the row-vector system `y A = b`.
pub fn solve_left<T: Real, const N: usize>(a: &Matrix<T, N>, b: &[T; N]) -> Option<[T; N]> {
    solve(transpose(a), b)
}

pub fn vec_mat<T: Real, const N: usize>(v: &[T; N], a: &Matrix<T, N>) -> [T; N] {
    let mut out = [T::zero(); N];
    for (i, vi) in v.iter().enumerate() {
        if *vi == T::zero() {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += *vi * a[i][j];
        }
    }
    out
}

pub fn dot<T: Real, const N: usize>(a: &[T; N], b: &[T; N]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

/// Solves `A x = b` for a runtime-sized system by Gaussian elimination with partial pivoting.
pub fn solve_dyn<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| {
            a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if !(a[piv][k].abs() > T::zero()) {
            return None;
        }
        a.swap(piv, k);
        b.swap(piv, k);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            if f == T::zero() {
                continue;
            }
            for j in k..n {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
            let t = b[k];
            b[i] -= f * t;
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}

/// Solves `y (I - (1 - w) M) = b` for a row-stochastic `M` and `w` in (0, 1].
///
/// Elimination runs on the transposed system without pivoting and rebuilds every pivot
/// from tracked column sums, so no step subtracts nearly equal numbers. This keeps full
/// relative accuracy even when `w` is tiny and the chain has several closed classes.
pub fn resolvent_solve<T: Real, const N: usize>(m: &Matrix<T, N>, b: &[T; N], w: T) -> [T; N] {
    let c = T::one() - w;
    let mut a = [[T::zero(); N]; N];
    for i in 0..N {
        for j in 0..N {
            if i != j {
                a[i][j] = -(c * m[j][i]);
            }
        }
    }
    let mut sums = [w; N];
    let mut rhs = *b;
    for k in 0..N {
        let mut d = sums[k];
        for row in a.iter().skip(k + 1) {
            d -= row[k];
        }
        a[k][k] = d;
        for j in k + 1..N {
            let t = a[k][j] * sums[k] / d;
            sums[j] -= t;
        }
        for i in k + 1..N {
            let f = a[i][k] / d;
            if f == T::zero() {
                continue;
            }
            for j in k + 1..N {
                if j != i {
                    let t = f * a[k][j];
                    a[i][j] -= t;
                }
            }
            let t = f * rhs[k];
            rhs[i] -= t;
        }
    }
    let mut y = [T::zero(); N];
    for k in (0..N).rev() {
        let mut s = rhs[k];
        for j in k + 1..N {
            s -= a[k][j] * y[j];
        }
        y[k] = s / a[k][k];
    }
    y
}
