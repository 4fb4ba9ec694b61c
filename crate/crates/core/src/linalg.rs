//! Small dense solvers for the per-degree radial problems.

use num_traits::Float;

use crate::error::{Result, RotwaveError};
use crate::Real;

/// LU factorisation with partial pivoting of a row-major `n × n` matrix.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    n: usize,
    a: Vec<T>,
    piv: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn new(mut a: Vec<T>, n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let scale = a.iter().map(|v| Float::abs(*v)).fold(T::zero(), T::max);
        let mut piv = (0..n).collect::<Vec<_>>();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| {
                    Float::abs(a[i * n + k])
                        .partial_cmp(&Float::abs(a[j * n + k]))
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(k);
            if !(Float::abs(a[p * n + k]) > scale * T::epsilon()) {
                return Err(RotwaveError::NumericFailure {
                    time: 0.0,
                    detail: format!("singular matrix at pivot {k}"),
                });
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                piv.swap(k, p);
            }
            let d = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / d;
                a[i * n + k] = f;
                for j in k + 1..n {
                    let v = a[k * n + j];
                    a[i * n + j] -= f * v;
                }
            }
        }
        Ok(Self { n, a, piv })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut x: Vec<T> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.a[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.a[i * n + j] * x[j];
            }
            x[i] = s / self.a[i * n + i];
        }
        x
    }
}

/// Least-squares solution of `A x ≈ b` for row-major `m × n` `A` (full column rank).
pub fn lstsq<T: Real>(a: &[T], m: usize, n: usize, b: &[T]) -> Result<Vec<T>> {
    assert!(m >= n && a.len() == m * n && b.len() == m);
    let mut r = a.to_vec();
    let mut y = b.to_vec();
    for k in 0..n {
        let norm = (k..m).map(|i| r[i * n + k] * r[i * n + k]).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(RotwaveError::NumericFailure {
                time: 0.0,
                detail: format!("rank-deficient least-squares column {k}"),
            });
        }
        let alpha = if r[k * n + k] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = (k..m).map(|i| r[i * n + k]).collect();
        v[0] -= alpha;
        let vv: T = v.iter().map(|&x| x * x).sum();
        if vv > T::zero() {
            let beta = T::of(2.0) / vv;
            for j in k..n {
                let s: T = (k..m).map(|i| v[i - k] * r[i * n + j]).sum::<T>() * beta;
                for i in k..m {
                    r[i * n + j] -= s * v[i - k];
                }
            }
            let s: T = (k..m).map(|i| v[i - k] * y[i]).sum::<T>() * beta;
            for i in k..m {
                y[i] -= s * v[i - k];
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for j in i + 1..n {
            s -= r[i * n + j] * x[j];
        }
        x[i] = s / r[i * n + i];
    }
    Ok(x)
}
