//! The wave operator `𝓛(u, b) = (−curl Δ⁻¹∂_z u + ∂_z b, ∂_z u)` per Fourier mode.
//!
//! On a mode `ξ ≠ 0` with helical vectors `h_s`, `ξ̂ × h_s = −i s h_s`, the
//! operator acts on `(h_s·u, h_s·b)` as `iξ₃ A_s` with the real symmetric
//! `A_s = [[s/|ξ|, 1], [1, 0]]`. Its eigenvalues are
//! `λ = (s/|ξ| ± √(1/|ξ|² + 4))/2`.

use num_traits::{Float, Zero};

use super::{BoxGrid, BoxVector};
use crate::{Complex, Real};

/// `𝓛` applied mode by mode to divergence-free fields.
pub fn apply_wave_operator<T: Real>(
    u: &BoxVector<T>,
    b: &BoxVector<T>,
    grid: &BoxGrid<T>,
) -> (BoxVector<T>, BoxVector<T>) {
    let mut lu = grid.zeros();
    let mut lb = grid.zeros();
    let i = Complex::new(T::zero(), T::one());
    for q in 0..grid.len() {
        let k = grid.xi_real(q);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == T::zero() || k[2] == T::zero() {
            continue;
        }
        let uq = [u[0][q], u[1][q], u[2][q]];
        let cross = [
            uq[2] * k[1] - uq[1] * k[2],
            uq[0] * k[2] - uq[2] * k[0],
            uq[1] * k[0] - uq[0] * k[1],
        ];
        let dz = i * k[2];
        for d in 0..3 {
            lu[d][q] = -cross[d] * (k[2] / k2) + b[d][q] * dz;
            lb[d][q] = uq[d] * dz;
        }
    }
    (lu, lb)
}

/// Eigen-decomposition of the wave operator on one mode.
#[derive(Debug, Clone, Copy)]
pub struct ModeBasis<T> {
    /// Helical vectors for `s = +1, −1`.
    pub helical: [[Complex<T>; 3]; 2],
    /// `λ` for `(s, ±)` in the order `(+,+), (+,−), (−,+), (−,−)`.
    pub lambda: [T; 4],
    /// Unit eigenvectors `(λ, 1)/√(λ² + 1)` of `A_s`.
    pub vectors: [[T; 2]; 4],
    pub xi3: T,
}

impl<T: Real> ModeBasis<T> {
    pub fn new(xi: [T; 3]) -> Self {
        let norm = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        let k = xi.map(|x| x / norm);
        let a = if Float::abs(k[2]) < T::of(0.9) { [T::zero(), T::zero(), T::one()] } else { [T::one(), T::zero(), T::zero()] };
        let e1 = normalize(cross(k, a));
        let e2 = cross(k, e1);
        let r = T::FRAC_1_SQRT_2();
        let helical = [1.0, -1.0].map(|s| {
            let s = T::of(s);
            std::array::from_fn(|d| Complex::new(e1[d] * r, e2[d] * s * r))
        });
        let mut lambda = [T::zero(); 4];
        let mut vectors = [[T::zero(); 2]; 4];
        let disc = (T::one() / (norm * norm) + T::of(4.0)).sqrt();
        for (j, (s, pm)) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)].into_iter().enumerate() {
            let l = (T::of(s) / norm + T::of(pm) * disc) / T::of(2.0);
            let len = (l * l + T::one()).sqrt();
            lambda[j] = l;
            vectors[j] = [l / len, T::one() / len];
        }
        Self { helical, lambda, vectors, xi3: xi[2] }
    }

    /// Eigen-coordinates `c_j` of a transverse pair `(u, b)`.
    pub fn coords(&self, u: [Complex<T>; 3], b: [Complex<T>; 3]) -> [Complex<T>; 4] {
        let mut c = [Complex::zero(); 4];
        for s in 0..2 {
            let h = &self.helical[s];
            let us = dot_conj(h, &u);
            let bs = dot_conj(h, &b);
            for p in 0..2 {
                let v = self.vectors[2 * s + p];
                c[2 * s + p] = us * v[0] + bs * v[1];
            }
        }
        c
    }

    pub fn reconstruct(&self, c: &[Complex<T>; 4]) -> ([Complex<T>; 3], [Complex<T>; 3]) {
        let mut u = [Complex::zero(); 3];
        let mut b = [Complex::zero(); 3];
        for s in 0..2 {
            let mut us = Complex::zero();
            let mut bs = Complex::zero();
            for p in 0..2 {
                let v = self.vectors[2 * s + p];
                us += c[2 * s + p] * v[0];
                bs += c[2 * s + p] * v[1];
            }
            for d in 0..3 {
                u[d] += self.helical[s][d] * us;
                b[d] += self.helical[s][d] * bs;
            }
        }
        (u, b)
    }

    /// Rates `iξ₃λ_j` of `𝓛` in eigen-coordinates.
    pub fn rates(&self) -> [Complex<T>; 4] {
        self.lambda.map(|l| Complex::new(T::zero(), self.xi3 * l))
    }
}


fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize<T: Real>(a: [T; 3]) -> [T; 3] {
    let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    a.map(|x| x / n)
}

fn dot_conj<T: Real>(h: &[Complex<T>; 3], v: &[Complex<T>; 3]) -> Complex<T> {
    h[0].conj() * v[0] + h[1].conj() * v[1] + h[2].conj() * v[2]
}

/// Per-mode bases for every nonzero wavevector of a grid.
#[derive(Debug, Clone)]
pub struct WaveBasis<T> {
    modes: Vec<Option<ModeBasis<T>>>,
}

impl<T: Real> WaveBasis<T> {
    pub fn new(grid: &BoxGrid<T>) -> Self {
        let modes = (0..grid.len())
            .map(|q| {
                let xi = grid.xi(q);
                (xi != [0, 0, 0]).then(|| ModeBasis::new(grid.xi_real(q)))
            })
            .collect();
        Self { modes }
    }

    pub fn mode(&self, q: usize) -> Option<&ModeBasis<T>> {
        self.modes[q].as_ref()
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// `(u, b) ↦ Σ_j f(rate_j) c_j` on every mode.
    pub fn apply(
        &self,
        u: &BoxVector<T>,
        b: &BoxVector<T>,
        mut f: impl FnMut(usize, usize, Complex<T>) -> Complex<T>,
    ) -> (BoxVector<T>, BoxVector<T>) {
        let n = self.modes.len();
        let mut ou: BoxVector<T> = std::array::from_fn(|_| vec![Complex::zero(); n]);
        let mut ob: BoxVector<T> = std::array::from_fn(|_| vec![Complex::zero(); n]);
        for (q, m) in self.modes.iter().enumerate() {
            let Some(m) = m else { continue };
            let uq = [u[0][q], u[1][q], u[2][q]];
            let bq = [b[0][q], b[1][q], b[2][q]];
            let mut c = m.coords(uq, bq);
            for (j, cj) in c.iter_mut().enumerate() {
                *cj = f(q, j, *cj);
            }
            let (a, bb) = m.reconstruct(&c);
            for d in 0..3 {
                ou[d][q] = a[d];
                ob[d][q] = bb[d];
            }
        }
        (ou, ob)
    }
}
