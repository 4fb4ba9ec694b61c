//! Box norms. `H^σ` uses the weights `(1 + |ξ|²)^σ`; `W^{m,p}` sums
//! `‖∂^α v‖_{L^p}` over `|α| ≤ m` with pointwise Euclidean length and
//! grid quadrature. All norms are integrals over the full box.

use num_traits::Float;

use super::{BoxGrid, BoxVector};
use crate::{Complex, Real};

pub fn sobolev_norm<T: Real>(v: &BoxVector<T>, sigma: T, grid: &BoxGrid<T>) -> T {
    let mut s = T::zero();
    for q in 0..grid.len() {
        let k = grid.xi_real(q);
        let w = (T::one() + k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).powf(sigma);
        s += w * v.iter().map(|c| c[q].norm_sqr()).sum::<T>();
    }
    (s * grid.volume()).sqrt()
}

/// Copy the modes of `v` into a finer grid.
pub fn pad<T: Real>(v: &BoxVector<T>, from: &BoxGrid<T>, to: &BoxGrid<T>) -> BoxVector<T> {
    let mut out = to.zeros();
    let nyq = from.n() as i64 / 2;
    for q in 0..from.len() {
        let xi = from.xi(q);
        if xi.iter().any(|&x| x == -nyq) {
            continue;
        }
        let p = to.index(xi);
        for d in 0..3 {
            out[d][p] = v[d][q];
        }
    }
    out
}

pub fn multi_indices(m: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 0..=m {
        for b in 0..=m - a {
            for c in 0..=m - a - b {
                out.push([a, b, c]);
            }
        }
    }
    out
}

pub fn derivative<T: Real>(v: &BoxVector<T>, alpha: [u32; 3], grid: &BoxGrid<T>) -> BoxVector<T> {
    let mut out = v.clone();
    for q in 0..grid.len() {
        let k = grid.xi_real(q);
        let mut f = Complex::new(T::one(), T::zero());
        for d in 0..3 {
            f *= Complex::new(T::zero(), k[d]).powu(alpha[d]);
        }
        for c in out.iter_mut() {
            c[q] *= f;
        }
    }
    out
}

/// Pointwise `|v(x)|` on the grid.
pub fn magnitude<T: Real>(v: &BoxVector<T>, grid: &BoxGrid<T>) -> Vec<T> {
    let phys: [Vec<T>; 3] = std::array::from_fn(|d| grid.to_physical(&v[d]));
    (0..grid.len())
        .map(|q| (phys[0][q] * phys[0][q] + phys[1][q] * phys[1][q] + phys[2][q] * phys[2][q]).sqrt())
        .collect()
}

pub fn lp_norm<T: Real>(f: &[T], p: T, grid: &BoxGrid<T>) -> T {
    if p.is_infinite() {
        return f.iter().fold(T::zero(), |m, &x| m.max(Float::abs(x)));
    }
    let h3 = grid.volume() / T::of_usize(grid.len());
    let mx = f.iter().fold(T::zero(), |m, &x| m.max(Float::abs(x)));
    if mx == T::zero() {
        return T::zero();
    }
    // scaled to keep |f|^p in range
    let s: T = f.iter().map(|&x| (Float::abs(x) / mx).powf(p)).sum();
    mx * (s * h3).powf(T::one() / p)
}

pub fn w_p_norm<T: Real>(v: &BoxVector<T>, m: u32, p: T, grid: &BoxGrid<T>) -> T {
    multi_indices(m)
        .into_iter()
        .map(|a| lp_norm(&magnitude(&derivative(v, a, grid), grid), p, grid))
        .sum()
}

pub fn w_inf_norm<T: Real>(v: &BoxVector<T>, m: u32, grid: &BoxGrid<T>) -> T {
    w_p_norm(v, m, T::infinity(), grid)
}

/// `‖b‖_{L^s} / (‖curl b‖_{L²}^{2/p} ‖curl b‖_{L^∞}^{1−2/p})` with `s = 3p/(3−p)`.
pub fn hls_ratio<T: Real>(b: &BoxVector<T>, curl_b: &BoxVector<T>, s: T, grid: &BoxGrid<T>) -> T {
    let p = T::of(3.0) * s / (s + T::of(3.0));
    let e = T::of(2.0) / p;
    let num = lp_norm(&magnitude(b, grid), s, grid);
    let c = magnitude(curl_b, grid);
    let den = lp_norm(&c, T::of(2.0), grid).powf(e) * lp_norm(&c, T::infinity(), grid).powf(T::one() - e);
    if den > T::zero() { num / den } else { T::zero() }
}
