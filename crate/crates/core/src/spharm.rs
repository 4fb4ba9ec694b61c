//! Gauss–Legendre grids, orthonormal spherical-harmonic transforms and
//! spectral Sobolev norms on the unit sphere.
//!
//! Harmonics are `Y_l^m = P̄_l^m(cos θ) e^{imφ} / √(2π)` with
//! `∫_{-1}^{1} P̄² dμ = 1` and the Condon–Shortley phase, so that
//! `Y_l^{-m} = (-1)^m conj(Y_l^m)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_traits::{Float, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Result, RotwaveError};
use crate::Real;

/// Smallest `2^a 3^b 5^c` that is at least `min`.
pub fn fft_size(min: usize) -> usize {
    let mut n = min.max(1);
    loop {
        let mut k = n;
        for p in [2, 3, 5] {
            while k % p == 0 {
                k /= p;
            }
        }
        if k == 1 {
            return n;
        }
        n += 1;
    }
}

/// Gauss–Legendre nodes `x_j = cos θ_j` (descending, so θ ascends) and weights.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fully normalised `P̄_l^m(cos θ)` and `dP̄_l^m/dθ` for `0 ≤ m ≤ l ≤ lmax`,
/// indexed by `tri_index(lmax, l, m)`.
pub fn normalized_legendre(lmax: usize, theta: f64) -> (Vec<f64>, Vec<f64>) {
    let x = theta.cos();
    let s = theta.sin();
    let n = tri_len(lmax);
    let mut p = vec![0.0; n];
    let mut dp = vec![0.0; n];
    let mut pmm = std::f64::consts::FRAC_1_SQRT_2;
    for m in 0..=lmax {
        if m > 0 {
            let mf = m as f64;
            pmm *= -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
        }
        p[tri_index(lmax, m, m)] = pmm;
        if m < lmax {
            p[tri_index(lmax, m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * x * pmm;
        }
        for l in m + 2..=lmax {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let l1 = lf - 1.0;
            let b = ((l1 * l1 - mf * mf) / (4.0 * l1 * l1 - 1.0)).sqrt();
            p[tri_index(lmax, l, m)] =
                a * (x * p[tri_index(lmax, l - 1, m)] - b * p[tri_index(lmax, l - 2, m)]);
        }
        for l in m..=lmax {
            let lf = l as f64;
            let mf = m as f64;
            let lower = if l > m {
                ((2.0 * lf + 1.0) * (lf * lf - mf * mf) / (2.0 * lf - 1.0)).sqrt()
                    * p[tri_index(lmax, l - 1, m)]
            } else {
                0.0
            };
            dp[tri_index(lmax, l, m)] = (lf * x * p[tri_index(lmax, l, m)] - lower) / s;
        }
    }
    (p, dp)
}

fn tri_len(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 2) / 2
}

/// Position of `(l, m)`, `0 ≤ m ≤ l`, in an m-major triangular table.
fn tri_index(lmax: usize, l: usize, m: usize) -> usize {
    m * (lmax + 1) - m * (m.saturating_sub(1)) / 2 + (l - m)
}

/// Gauss–Legendre × equispaced-longitude grid with cached Legendre tables.
#[derive(Clone)]
pub struct GaussGrid<T: Real> {
    lmax: usize,
    nlat: usize,
    nlon: usize,
    theta: Vec<T>,
    cos_theta: Vec<T>,
    sin_theta: Vec<T>,
    weights: Vec<T>,
    phi: Vec<T>,
    plm: Vec<T>,
    dplm: Vec<T>,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
}

impl<T: Real> fmt::Debug for GaussGrid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaussGrid")
            .field("lmax", &self.lmax)
            .field("nlat", &self.nlat)
            .field("nlon", &self.nlon)
            .finish()
    }
}

/// Default grid for truncation `lmax`: `lmax + 1` latitudes and an FFT-friendly
/// longitude count of at least `2 lmax + 2`.
pub fn build_grid<T: Real>(lmax: usize) -> Result<GaussGrid<T>> {
    GaussGrid::new(lmax)
}

impl<T: Real> GaussGrid<T> {
    pub fn new(lmax: usize) -> Result<Self> {
        Self::with_resolution(lmax, lmax + 1, fft_size(2 * lmax + 2))
    }

    /// Grid with extra quadrature headroom, e.g. for alias-free products.
    pub fn with_resolution(lmax: usize, nlat: usize, nlon: usize) -> Result<Self> {
        if lmax < 1 {
            return invalid("lmax must be at least 1");
        }
        if nlat < lmax + 1 {
            return invalid(format!("nlat = {nlat} < lmax + 1 = {}", lmax + 1));
        }
        if nlon < 2 * lmax + 1 {
            return invalid(format!("nlon = {nlon} < 2 lmax + 1 = {}", 2 * lmax + 1));
        }
        let (x, w) = gauss_legendre(nlat);
        let rows = tri_len(lmax);
        let mut plm = vec![T::zero(); rows * nlat];
        let mut dplm = vec![T::zero(); rows * nlat];
        let mut theta = Vec::with_capacity(nlat);
        for (j, &xj) in x.iter().enumerate() {
            let th = xj.acos();
            theta.push(th);
            let (p, dp) = normalized_legendre(lmax, th);
            for r in 0..rows {
                plm[r * nlat + j] = T::of(p[r]);
                dplm[r * nlat + j] = T::of(dp[r]);
            }
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            lmax,
            nlat,
            nlon,
            cos_theta: x.iter().map(|&v| T::of(v)).collect(),
            sin_theta: theta.iter().map(|&v| T::of(v.sin())).collect(),
            theta: theta.into_iter().map(T::of).collect(),
            weights: w.into_iter().map(T::of).collect(),
            phi: (0..nlon)
                .map(|k| T::of(2.0 * PI * k as f64 / nlon as f64))
                .collect(),
            plm,
            dplm,
            fwd: planner.plan_fft_forward(nlon),
            inv: planner.plan_fft_inverse(nlon),
        })
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }
    pub fn nlat(&self) -> usize {
        self.nlat
    }
    pub fn nlon(&self) -> usize {
        self.nlon
    }
    pub fn len(&self) -> usize {
        self.nlat * self.nlon
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn theta(&self) -> &[T] {
        &self.theta
    }
    pub fn cos_theta(&self) -> &[T] {
        &self.cos_theta
    }
    pub fn sin_theta(&self) -> &[T] {
        &self.sin_theta
    }
    pub fn weights(&self) -> &[T] {
        &self.weights
    }
    pub fn phi(&self) -> &[T] {
        &self.phi
    }

    /// `P̄_l^m(cos θ_j)` over all latitudes, `0 ≤ m ≤ l ≤ lmax`.
    pub fn plm(&self, l: usize, m: usize) -> &[T] {
        let r = tri_index(self.lmax, l, m);
        &self.plm[r * self.nlat..(r + 1) * self.nlat]
    }

    /// `dP̄_l^m/dθ` at all latitudes.
    pub fn dplm(&self, l: usize, m: usize) -> &[T] {
        let r = tri_index(self.lmax, l, m);
        &self.dplm[r * self.nlat..(r + 1) * self.nlat]
    }

    /// Longitude-by-longitude quadrature weight `2π/nlon`.
    pub fn dphi(&self) -> T {
        T::of(2.0 * PI / self.nlon as f64)
    }

    /// `∫_{S²} f` by quadrature over a grid-shaped array.
    pub fn integrate(&self, values: &[T]) -> T {
        let mut total = T::zero();
        for j in 0..self.nlat {
            let row: T = values[j * self.nlon..(j + 1) * self.nlon].iter().copied().sum();
            total += self.weights[j] * row;
        }
        total * self.dphi()
    }

    pub(crate) fn width(&self) -> usize {
        2 * self.lmax + 1
    }

    /// Per-latitude Fourier coefficients `F_j(m) = (1/√2π) ∫ f e^{-imφ} dφ`
    /// for `|m| ≤ lmax`, row width `2 lmax + 1` centred on `m = 0`.
    pub(crate) fn fourier_forward(&self, values: &[Complex<T>]) -> Vec<Complex<T>> {
        let (nlon, w, lm) = (self.nlon, self.width(), self.lmax);
        let scale = T::of((2.0 * PI).sqrt() / nlon as f64);
        let mut out = vec![Complex::zero(); self.nlat * w];
        let mut buf = vec![Complex::zero(); nlon];
        for j in 0..self.nlat {
            buf.copy_from_slice(&values[j * nlon..(j + 1) * nlon]);
            self.fwd.process(&mut buf);
            for m in 0..=lm {
                out[j * w + lm + m] = buf[m] * scale;
                if m > 0 {
                    out[j * w + lm - m] = buf[nlon - m] * scale;
                }
            }
        }
        out
    }

    /// Inverse of `fourier_forward`: `f(φ_k) = (1/√2π) Σ_m F(m) e^{imφ_k}`.
    pub(crate) fn fourier_inverse(&self, fm: &[Complex<T>]) -> Vec<Complex<T>> {
        let (nlon, w, lm) = (self.nlon, self.width(), self.lmax);
        let scale = T::of(1.0 / (2.0 * PI).sqrt());
        let mut out = vec![Complex::zero(); self.nlat * nlon];
        let mut buf = vec![Complex::zero(); nlon];
        for j in 0..self.nlat {
            buf.iter_mut().for_each(|b| *b = Complex::zero());
            for m in 0..=lm {
                buf[m] += fm[j * w + lm + m];
                if m > 0 {
                    buf[nlon - m] += fm[j * w + lm - m];
                }
            }
            self.inv.process(&mut buf);
            for k in 0..nlon {
                out[j * nlon + k] = buf[k] * scale;
            }
        }
        out
    }

    /// Legendre synthesis into per-latitude Fourier rows.
    pub(crate) fn legendre_synth(&self, c: &SpectralScalar<T>, kind: Synth) -> Vec<Complex<T>> {
        let (w, lg, nlat) = (self.width(), self.lmax, self.nlat);
        let mut out = vec![Complex::zero(); nlat * w];
        let lc = c.lmax.min(lg);
        for m in 0..=lc {
            let sign = if m % 2 == 0 { T::one() } else { -T::one() };
            let mf = T::of_usize(m);
            for l in m..=lc {
                let cp = c.get(l, m as i64);
                let cn = if m > 0 { c.get(l, -(m as i64)) * sign } else { Complex::zero() };
                if cp.is_zero() && cn.is_zero() {
                    continue;
                }
                let (table, imag) = match kind {
                    Synth::Value => (self.plm(l, m), false),
                    Synth::DTheta => (self.dplm(l, m), false),
                    Synth::DPhiOverSin => (self.plm(l, m), true),
                };
                for j in 0..nlat {
                    let mut t = table[j];
                    if imag {
                        t = t * mf / self.sin_theta[j];
                    }
                    if imag {
                        // i m P / sin θ for +m, -i m P / sin θ for -m
                        out[j * w + lg + m] += Complex::new(-cp.im * t, cp.re * t);
                        if m > 0 {
                            out[j * w + lg - m] += Complex::new(cn.im * t, -cn.re * t);
                        }
                    } else {
                        out[j * w + lg + m] += cp * t;
                        if m > 0 {
                            out[j * w + lg - m] += cn * t;
                        }
                    }
                }
            }
        }
        out
    }

    /// Legendre analysis of Fourier rows: `ψ_l^m = Σ_j w_j P̄_l^m(θ_j) F_j(m)`.
    pub(crate) fn legendre_analyze(&self, fm: &[Complex<T>]) -> SpectralScalar<T> {
        let (w, lg) = (self.width(), self.lmax);
        let mut c = SpectralScalar::zeros(lg);
        for m in 0..=lg {
            let sign = if m % 2 == 0 { T::one() } else { -T::one() };
            for l in m..=lg {
                let p = self.plm(l, m);
                let mut sp = Complex::zero();
                let mut sn = Complex::zero();
                for j in 0..self.nlat {
                    let wp = self.weights[j] * p[j];
                    sp += fm[j * w + lg + m] * wp;
                    if m > 0 {
                        sn += fm[j * w + lg - m] * wp;
                    }
                }
                c.set(l, m as i64, sp);
                if m > 0 {
                    c.set(l, -(m as i64), sn * sign);
                }
            }
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Synth {
    Value,
    DTheta,
    DPhiOverSin,
}

/// Spherical-harmonic coefficients `ψ_l^m`, `|m| ≤ l ≤ lmax`, stored at `l² + l + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralScalar<T> {
    lmax: usize,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> SpectralScalar<T> {
    pub fn zeros(lmax: usize) -> Self {
        Self {
            lmax,
            coeffs: vec![Complex::zero(); (lmax + 1) * (lmax + 1)],
        }
    }

    pub fn from_coeffs(lmax: usize, coeffs: Vec<Complex<T>>) -> Result<Self> {
        let n = (lmax + 1) * (lmax + 1);
        if coeffs.len() != n {
            return Err(RotwaveError::ShapeMismatch {
                expected: format!("{n} coefficients"),
                got: format!("{}", coeffs.len()),
            });
        }
        Ok(Self { lmax, coeffs })
    }

    /// Single harmonic `Y_l^m` with unit coefficient.
    pub fn unit(lmax: usize, l: usize, m: i64) -> Self {
        let mut c = Self::zeros(lmax);
        c.set(l, m, Complex::new(T::one(), T::zero()));
        c
    }

    /// Random real field with independent normal coefficients on `lmin ≤ l ≤ lhi`.
    pub fn random_real<R: Rng + ?Sized>(lmax: usize, lmin: usize, lhi: usize, rng: &mut R) -> Self {
        let mut c = Self::zeros(lmax);
        let half = std::f64::consts::FRAC_1_SQRT_2;
        for l in lmin..=lhi.min(lmax) {
            let g: f64 = rng.sample(StandardNormal);
            c.set(l, 0, Complex::new(T::of(g), T::zero()));
            for m in 1..=l as i64 {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                c.set_real_pair(l, m, Complex::new(T::of(re * half), T::of(im * half)));
            }
        }
        c
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn index(l: usize, m: i64) -> usize {
        idx(l, m)
    }

    pub fn get(&self, l: usize, m: i64) -> Complex<T> {
        if l > self.lmax || m.unsigned_abs() as usize > l {
            return Complex::zero();
        }
        self.coeffs[idx(l, m)]
    }

    pub fn set(&mut self, l: usize, m: i64, v: Complex<T>) {
        self.coeffs[idx(l, m)] = v;
    }

    /// Set `ψ_l^m = v` and `ψ_l^{-m} = (-1)^m conj(v)`.
    pub fn set_real_pair(&mut self, l: usize, m: i64, v: Complex<T>) {
        self.set(l, m, v);
        if m != 0 {
            let s = if m % 2 == 0 { T::one() } else { -T::one() };
            self.set(l, -m, v.conj() * s);
        }
    }

    /// Copy into truncation `lmax`, dropping or zero-padding degrees.
    pub fn resized(&self, lmax: usize) -> Self {
        let mut c = Self::zeros(lmax);
        let n = (lmax.min(self.lmax) + 1).pow(2);
        c.coeffs[..n].copy_from_slice(&self.coeffs[..n]);
        c
    }

    /// Multiply each coefficient by `f(l, m)`.
    pub fn map_lm(&self, f: impl Fn(usize, i64) -> Complex<T>) -> Self {
        let mut c = self.clone();
        for l in 0..=self.lmax {
            for m in -(l as i64)..=l as i64 {
                let i = idx(l, m);
                c.coeffs[i] = c.coeffs[i] * f(l, m);
            }
        }
        c
    }

    pub fn scale(&self, a: T) -> Self {
        Self {
            lmax: self.lmax,
            coeffs: self.coeffs.iter().map(|&c| c * a).collect(),
        }
    }

    /// `self + a · other` (truncations must agree).
    pub fn axpy(&self, a: T, other: &Self) -> Self {
        assert_eq!(self.lmax, other.lmax, "truncation mismatch");
        Self {
            lmax: self.lmax,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&x, &y)| x + y * a)
                .collect(),
        }
    }

    /// `⟨self, other⟩_{L²(S²)} = Σ ψ conj(χ)`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        let n = (self.lmax.min(other.lmax) + 1).pow(2);
        self.coeffs[..n]
            .iter()
            .zip(&other.coeffs[..n])
            .fold(Complex::zero(), |acc, (&a, &b)| acc + a * b.conj())
    }

    pub fn norm_l2(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    pub fn mean_coeff(&self) -> Complex<T> {
        self.coeffs[0]
    }

    pub fn zero_mean(&self) -> Self {
        let mut c = self.clone();
        c.coeffs[0] = Complex::zero();
        c
    }

    /// Largest violation of `ψ_l^{-m} = (-1)^m conj(ψ_l^m)`.
    pub fn real_symmetry_defect(&self) -> T {
        let mut worst = T::zero();
        for l in 0..=self.lmax {
            worst = worst.max(Float::abs(self.get(l, 0).im));
            for m in 1..=l as i64 {
                let s = if m % 2 == 0 { T::one() } else { -T::one() };
                let d = self.get(l, -m) - self.get(l, m).conj() * s;
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Restriction to the `m = 0` coefficients.
    pub fn zonal_part(&self) -> Self {
        let mut c = Self::zeros(self.lmax);
        for l in 0..=self.lmax {
            c.set(l, 0, self.get(l, 0));
        }
        c
    }
}

#[inline]
fn idx(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

/// `Δ_h`: `ψ_l^m ↦ -l(l+1) ψ_l^m`.
pub fn laplace_beltrami<T: Real>(c: &SpectralScalar<T>) -> SpectralScalar<T> {
    c.map_lm(|l, _| Complex::new(-T::of_usize(l * (l + 1)), T::zero()))
}

/// `Δ_h^{-1}` on zero-mean scalars; the `l = 0` coefficient is set to zero.
pub fn inverse_laplace_beltrami<T: Real>(c: &SpectralScalar<T>) -> SpectralScalar<T> {
    c.map_lm(|l, _| {
        if l == 0 {
            Complex::zero()
        } else {
            Complex::new(-T::one() / T::of_usize(l * (l + 1)), T::zero())
        }
    })
}

/// `(Σ_{l≥1} (l²+l)^α |ψ_l^m|²)^{1/2}`.
pub fn scalar_sobolev_norm<T: Real>(c: &SpectralScalar<T>, alpha: T) -> Result<T> {
    if alpha != T::zero() && c.mean_coeff().norm() > mean_tolerance(c) {
        return invalid("H^alpha norm with alpha != 0 needs a zero-mean scalar");
    }
    Ok(weighted_sum(c, alpha).sqrt())
}

pub(crate) fn mean_tolerance<T: Real>(c: &SpectralScalar<T>) -> T {
    T::epsilon().sqrt() * (T::one() + c.norm_l2())
}

pub(crate) fn weighted_sum<T: Real>(c: &SpectralScalar<T>, alpha: T) -> T {
    let mut total = T::zero();
    for l in 1..=c.lmax() {
        let wl = T::of_usize(l * l + l).powf(alpha);
        let s: T = (-(l as i64)..=l as i64).map(|m| c.get(l, m).norm_sqr()).sum();
        total += wl * s;
    }
    total
}

/// Values on the `nlat × nlon` nodes of a grid, row `j` = colatitude `θ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridScalar<T> {
    nlat: usize,
    nlon: usize,
    values: Vec<T>,
}

impl<T: Real> GridScalar<T> {
    pub fn new(grid: &GaussGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(RotwaveError::ShapeMismatch {
                expected: format!("{} x {}", grid.nlat(), grid.nlon()),
                got: format!("{} values", values.len()),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("grid values must be finite");
        }
        Ok(Self {
            nlat: grid.nlat(),
            nlon: grid.nlon(),
            values,
        })
    }

    pub fn zeros(grid: &GaussGrid<T>) -> Self {
        Self {
            nlat: grid.nlat(),
            nlon: grid.nlon(),
            values: vec![T::zero(); grid.len()],
        }
    }

    /// Sample `f(θ, φ)` at every node.
    pub fn from_fn(grid: &GaussGrid<T>, f: impl Fn(T, T) -> T) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for &th in grid.theta() {
            for &ph in grid.phi() {
                values.push(f(th, ph));
            }
        }
        Self {
            nlat: grid.nlat(),
            nlon: grid.nlon(),
            values,
        }
    }

    pub(crate) fn from_raw(nlat: usize, nlon: usize, values: Vec<T>) -> Self {
        Self { nlat, nlon, values }
    }

    pub fn nlat(&self) -> usize {
        self.nlat
    }
    pub fn nlon(&self) -> usize {
        self.nlon
    }
    pub fn values(&self) -> &[T] {
        &self.values
    }
    pub fn into_values(self) -> Vec<T> {
        self.values
    }
    pub fn get(&self, j: usize, k: usize) -> T {
        self.values[j * self.nlon + k]
    }

    pub fn check(&self, grid: &GaussGrid<T>) -> Result<()> {
        if self.nlat != grid.nlat() || self.nlon != grid.nlon() {
            return Err(RotwaveError::ShapeMismatch {
                expected: format!("{} x {}", grid.nlat(), grid.nlon()),
                got: format!("{} x {}", self.nlat, self.nlon),
            });
        }
        Ok(())
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().map(|v| Float::abs(*v)).fold(T::zero(), T::max)
    }
}

/// Spectral coefficients of a real grid field by Gauss quadrature.
pub fn analyze<T: Real>(f: &GridScalar<T>, grid: &GaussGrid<T>) -> Result<SpectralScalar<T>> {
    f.check(grid)?;
    let z: Vec<Complex<T>> = f.values.iter().map(|&v| Complex::new(v, T::zero())).collect();
    Ok(grid.legendre_analyze(&grid.fourier_forward(&z)))
}

/// Spectral coefficients of a complex grid field.
pub fn analyze_complex<T: Real>(
    values: &[Complex<T>],
    grid: &GaussGrid<T>,
) -> Result<SpectralScalar<T>> {
    if values.len() != grid.len() {
        return Err(RotwaveError::ShapeMismatch {
            expected: format!("{}", grid.len()),
            got: format!("{}", values.len()),
        });
    }
    Ok(grid.legendre_analyze(&grid.fourier_forward(values)))
}

fn check_capacity<T: Real>(c: &SpectralScalar<T>, grid: &GaussGrid<T>) -> Result<()> {
    if c.lmax() > grid.lmax() {
        return invalid(format!(
            "truncation {} exceeds grid capacity {}",
            c.lmax(),
            grid.lmax()
        ));
    }
    Ok(())
}

/// Real part of `Σ ψ_l^m Y_l^m` at every node.
pub fn synthesize<T: Real>(c: &SpectralScalar<T>, grid: &GaussGrid<T>) -> Result<GridScalar<T>> {
    synthesize_kind(c, grid, Synth::Value)
}

/// Complex-valued `Σ ψ_l^m Y_l^m`.
pub fn synthesize_complex<T: Real>(
    c: &SpectralScalar<T>,
    grid: &GaussGrid<T>,
) -> Result<Vec<Complex<T>>> {
    check_capacity(c, grid)?;
    Ok(grid.fourier_inverse(&grid.legendre_synth(c, Synth::Value)))
}

pub(crate) fn synthesize_kind<T: Real>(
    c: &SpectralScalar<T>,
    grid: &GaussGrid<T>,
    kind: Synth,
) -> Result<GridScalar<T>> {
    check_capacity(c, grid)?;
    let z = grid.fourier_inverse(&grid.legendre_synth(c, kind));
    Ok(GridScalar::from_raw(
        grid.nlat(),
        grid.nlon(),
        z.into_iter().map(|v| v.re).collect(),
    ))
}
