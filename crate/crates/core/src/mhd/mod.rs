//! Rotating MHD on the periodic box `[0, 2π)³`.
//!
//! Fields are stored as full complex Fourier arrays with
//! `v(x) = Σ_ξ v̂(ξ) e^{iξ·x}`, index `(i·n + j)·n + k` for `(ξ₁, ξ₂, ξ₃)`.

mod fft;
pub mod nash;
pub mod norms;
mod solver;
mod wave;


use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::invalid;
use crate::{Complex, Real, Result, RotwaveError};

pub use fft::Fft3;
pub use solver::{mhd_nonlinear, mhd_rhs, run_mhd, MhdConfig, MhdRecord, MhdRun, MhdSolver};
pub use wave::{apply_wave_operator, ModeBasis, WaveBasis};

/// Three Fourier components of a vector field.
pub type BoxVector<T> = [Vec<Complex<T>>; 3];

#[derive(Debug, Clone)]
pub struct BoxGrid<T: Real> {
    n: usize,
    fft: Arc<Fft3<T>>,
}

impl<T: Real> BoxGrid<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return invalid(format!("box size must be even and at least 4, got {n}"));
        }
        Ok(Self { n, fft: Arc::new(Fft3::new(n)) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn fft(&self) -> &Fft3<T> {
        &self.fft
    }

    /// Signed wavenumber of array position `i`; the Nyquist slot maps to `−n/2`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i < self.n / 2 { i as i64 } else { i as i64 - self.n as i64 }
    }

    pub fn xi(&self, q: usize) -> [i64; 3] {
        let n = self.n;
        [self.wavenumber(q / (n * n)), self.wavenumber((q / n) % n), self.wavenumber(q % n)]
    }

    pub fn xi_real(&self, q: usize) -> [T; 3] {
        self.xi(q).map(T::of_i64)
    }

    pub fn index(&self, xi: [i64; 3]) -> usize {
        let n = self.n as i64;
        let w = |k: i64| k.rem_euclid(n) as usize;
        (w(xi[0]) * self.n + w(xi[1])) * self.n + w(xi[2])
    }

    /// Position of `−ξ`.
    pub fn mirror(&self, q: usize) -> usize {
        let xi = self.xi(q);
        self.index([-xi[0], -xi[1], -xi[2]])
    }

    /// Largest retained wavenumber under the two-thirds rule.
    pub fn dealias_cutoff(&self) -> i64 {
        ((self.n - 1) / 3) as i64
    }

    pub fn is_resolved(&self, q: usize) -> bool {
        let k = self.dealias_cutoff();
        self.xi(q).iter().all(|x| x.abs() <= k)
    }

    pub fn zeros(&self) -> BoxVector<T> {
        std::array::from_fn(|_| vec![Complex::zero(); self.len()])
    }

    pub fn check(&self, v: &BoxVector<T>) -> Result<()> {
        for c in v {
            if c.len() != self.len() {
                return Err(RotwaveError::ShapeMismatch { expected: format!("{} coefficients", self.len()), got: c.len().to_string() });
            }
        }
        Ok(())
    }

    /// Physical values of one Fourier component.
    pub fn to_physical(&self, c: &[Complex<T>]) -> Vec<T> {
        let mut buf = c.to_vec();
        self.fft.inverse(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }

    pub fn to_spectral(&self, f: &[T]) -> Vec<Complex<T>> {
        let mut buf: Vec<Complex<T>> = f.iter().map(|&x| Complex::new(x, T::zero())).collect();
        self.fft.forward(&mut buf);
        let s = T::one() / T::of_usize(self.len());
        buf.iter_mut().for_each(|z| *z = *z * s);
        buf
    }

    pub fn from_fn(&self, f: impl Fn(T, T, T) -> [T; 3]) -> BoxVector<T> {
        let n = self.n;
        let h = T::of(2.0) * T::PI() / T::of_usize(n);
        let mut phys: [Vec<T>; 3] = std::array::from_fn(|_| vec![T::zero(); self.len()]);
        for q in 0..self.len() {
            let x = T::of_usize(q / (n * n)) * h;
            let y = T::of_usize((q / n) % n) * h;
            let z = T::of_usize(q % n) * h;
            let v = f(x, y, z);
            for d in 0..3 {
                phys[d][q] = v[d];
            }
        }
        phys.map(|c| self.to_spectral(&c))
    }

    /// `(2π)³ Σ ⟨a, b⟩` over all modes and components; the `L²` pairing.
    pub fn inner(&self, a: &BoxVector<T>, b: &BoxVector<T>) -> Complex<T> {
        let mut s = Complex::zero();
        for d in 0..3 {
            for (x, y) in a[d].iter().zip(&b[d]) {
                s += x * y.conj();
            }
        }
        s * self.volume()
    }

    pub fn volume(&self) -> T {
        (T::of(2.0) * T::PI()).powi(3)
    }

    pub fn norm_l2(&self, a: &BoxVector<T>) -> T {
        self.inner(a, a).re.sqrt()
    }
}

pub fn axpy<T: Real>(x: &BoxVector<T>, alpha: T, y: &BoxVector<T>) -> BoxVector<T> {
    std::array::from_fn(|d| x[d].iter().zip(&y[d]).map(|(a, b)| a + b * alpha).collect())
}

pub fn scale<T: Real>(x: &BoxVector<T>, alpha: T) -> BoxVector<T> {
    std::array::from_fn(|d| x[d].iter().map(|a| a * alpha).collect())
}

pub fn max_abs<T: Real>(x: &BoxVector<T>) -> T {
    x.iter().flatten().fold(T::zero(), |m, z| m.max(z.norm()))
}

/// `P̂v(ξ) = v̂ − ξ(ξ·v̂)/|ξ|²`, and zero at `ξ = 0`.
pub fn project_leray_box<T: Real>(v: &BoxVector<T>, grid: &BoxGrid<T>) -> BoxVector<T> {
    let mut out = v.clone();
    for q in 0..grid.len() {
        let xi = grid.xi_real(q);
        let k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if k2 == T::zero() {
            for c in out.iter_mut() {
                c[q] = Complex::zero();
            }
            continue;
        }
        let dot = v[0][q] * xi[0] + v[1][q] * xi[1] + v[2][q] * xi[2];
        for d in 0..3 {
            out[d][q] = v[d][q] - dot * (xi[d] / k2);
        }
    }
    out
}

/// `iξ × v̂`
pub fn curl_box<T: Real>(v: &BoxVector<T>, grid: &BoxGrid<T>) -> BoxVector<T> {
    let mut out = grid.zeros();
    let i = Complex::new(T::zero(), T::one());
    for q in 0..grid.len() {
        let k = grid.xi_real(q);
        out[0][q] = i * (v[2][q] * k[1] - v[1][q] * k[2]);
        out[1][q] = i * (v[0][q] * k[2] - v[2][q] * k[0]);
        out[2][q] = i * (v[1][q] * k[0] - v[0][q] * k[1]);
    }
    out
}

/// `∂_z`
pub fn dz_box<T: Real>(v: &BoxVector<T>, grid: &BoxGrid<T>) -> BoxVector<T> {
    let mut out = v.clone();
    for q in 0..grid.len() {
        let f = Complex::new(T::zero(), grid.xi_real(q)[2]);
        for c in out.iter_mut() {
            c[q] *= f;
        }
    }
    out
}

/// Drop the `ξ₃ = 0` modes, the discrete kernel of the wave operator.
pub fn kernel_excluded<T: Real>(v: &BoxVector<T>, grid: &BoxGrid<T>) -> BoxVector<T> {
    let mut out = v.clone();
    for q in 0..grid.len() {
        if grid.xi(q)[2] == 0 {
            for c in out.iter_mut() {
                c[q] = Complex::zero();
            }
        }
    }
    out
}

pub fn kernel_part<T: Real>(v: &BoxVector<T>, grid: &BoxGrid<T>) -> BoxVector<T> {
    axpy(v, -T::one(), &kernel_excluded(v, grid))
}

/// `max_ξ |ξ·v̂(ξ)|`
pub fn divergence_defect<T: Real>(v: &BoxVector<T>, grid: &BoxGrid<T>) -> T {
    (0..grid.len()).fold(T::zero(), |m, q| {
        let k = grid.xi_real(q);
        m.max((v[0][q] * k[0] + v[1][q] * k[1] + v[2][q] * k[2]).norm())
    })
}

/// `max_ξ |v̂(−ξ) − conj v̂(ξ)|`
pub fn symmetry_defect<T: Real>(v: &BoxVector<T>, grid: &BoxGrid<T>) -> T {
    let mut m = T::zero();
    for q in 0..grid.len() {
        let p = grid.mirror(q);
        for c in v {
            m = m.max((c[p] - c[q].conj()).norm());
        }
    }
    m
}

/// Replace `v̂(ξ)` by the Hermitian average with `conj v̂(−ξ)`.
pub fn symmetrize<T: Real>(v: &mut BoxVector<T>, grid: &BoxGrid<T>) {
    let half = T::of(0.5);
    for q in 0..grid.len() {
        let p = grid.mirror(q);
        if p < q {
            continue;
        }
        for c in v.iter_mut() {
            let a = (c[q] + c[p].conj()) * half;
            c[q] = a;
            c[p] = a.conj();
        }
    }
}

/// Random real, zero-mean, divergence-free field with Gaussian coefficients
/// on `1 ≤ max|ξ_i| ≤ kmax` under a `e^{−|ξ|²/kmax²}` envelope.
pub fn random_solenoidal<T: Real, R: Rng + ?Sized>(grid: &BoxGrid<T>, kmax: i64, rng: &mut R) -> BoxVector<T> {
    let mut v = grid.zeros();
    let k2max = (kmax * kmax) as f64;
    for q in 0..grid.len() {
        let xi = grid.xi(q);
        let inf = xi.iter().map(|x| x.abs()).max().unwrap_or(0);
        if inf == 0 || inf > kmax || xi.iter().any(|&x| x == -(grid.n() as i64) / 2) {
            continue;
        }
        let k2 = xi.iter().map(|x| (x * x) as f64).sum::<f64>();
        let env = (-k2 / k2max).exp();
        for c in v.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c[q] = Complex::new(T::of(re * env), T::of(im * env));
        }
    }
    symmetrize(&mut v, grid);
    project_leray_box(&v, grid)
}

#[derive(Debug, Clone)]
pub struct MhdState<T: Real> {
    pub u_hat: BoxVector<T>,
    pub b_hat: BoxVector<T>,
    pub epsilon: T,
    pub t: T,
    pub accum_u: BoxVector<T>,
    pub accum_b: BoxVector<T>,
}

impl<T: Real> MhdState<T> {
    pub fn new(u_hat: BoxVector<T>, b_hat: BoxVector<T>, epsilon: T, grid: &BoxGrid<T>) -> Result<Self> {
        grid.check(&u_hat)?;
        grid.check(&b_hat)?;
        if !(epsilon > T::zero()) {
            return invalid("epsilon must be positive");
        }
        let s = Self { u_hat, b_hat, epsilon, t: T::zero(), accum_u: grid.zeros(), accum_b: grid.zeros() };
        s.check_invariants(grid, T::of(1e-12))?;
        Ok(s)
    }

    /// Divergence, conjugate symmetry and zero mean, relative to the largest coefficient.
    pub fn check_invariants(&self, grid: &BoxGrid<T>, tol: T) -> Result<()> {
        let scale = T::one().max(max_abs(&self.u_hat)).max(max_abs(&self.b_hat));
        for (name, v) in [("u", &self.u_hat), ("b", &self.b_hat)] {
            let d = divergence_defect(v, grid);
            let s = symmetry_defect(v, grid);
            let m = v.iter().fold(T::zero(), |m, c| m.max(c[0].norm()));
            if d > tol * scale || s > tol * scale || m > tol * scale {
                return invalid(format!("{name}: divergence {d}, symmetry {s}, mean {m}"));
            }
        }
        Ok(())
    }

    pub fn energy(&self, grid: &BoxGrid<T>) -> T {
        let u = grid.norm_l2(&self.u_hat);
        let b = grid.norm_l2(&self.b_hat);
        u * u + b * b
    }
}
