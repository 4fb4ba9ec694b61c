//! Fields on the spherical shell `(1−δ, 1+δ) × S²`: Chebyshev collocation in
//! `r`, Gauss–Legendre/Fourier on each sphere.

mod calculus;
pub mod fields;
mod identities;
mod leray;
mod navier;

pub use calculus::{
    barotropic_average, barotropic_average_scalar, cartesian_gradient, energy_report,
    shell_vector_calculus, vector_laplacian, EnergyReport,
};
pub use identities::{commutation_residual, viscosity_identity_residual};
pub use leray::{shell_leray_project, shell_leray_split};
pub use navier::{
    lift_boundary_data, lifted_field, lifting_matrix, navier_traction, BoundaryData, Side,
    Traction,
};

use num_traits::Float;

use crate::chebyshev::Cgl;
use crate::error::{invalid, Result, RotwaveError};
use crate::sphere_ops::{hodge_decompose, synthesize_tangent, GridTangent, TangentField};
use crate::spharm::{analyze, synthesize, GaussGrid, GridScalar, SpectralScalar};
use crate::Real;

/// Shell `r ∈ [1−δ, 1+δ]` with `nr` CGL radial nodes and a surface grid.
#[derive(Debug, Clone)]
pub struct ShellGeometry<T: Real> {
    delta: T,
    r: Vec<T>,
    rw: Vec<T>,
    dr: Vec<T>,
    grid: GaussGrid<T>,
}

impl<T: Real> ShellGeometry<T> {
    pub fn new(delta: T, nr: usize, lmax: usize) -> Result<Self> {
        Self::with_grid(delta, nr, GaussGrid::new(lmax)?)
    }

    pub fn with_grid(delta: T, nr: usize, grid: GaussGrid<T>) -> Result<Self> {
        if !(delta > T::zero() && delta < T::of(0.5)) {
            return invalid(format!("shell half-thickness {delta} must lie in (0, 1/2)"));
        }
        if nr < 3 {
            return invalid("need at least 3 radial nodes");
        }
        let d = delta.f64();
        let cgl = Cgl::new(nr, 1.0 - d, 1.0 + d);
        let mut r: Vec<T> = cgl.nodes.iter().map(|&v| T::of(v)).collect();
        r[0] = T::one() - delta;
        r[nr - 1] = T::one() + delta;
        Ok(Self {
            delta,
            r,
            rw: cgl.weights.iter().map(|&v| T::of(v)).collect(),
            dr: cgl.diff.iter().map(|&v| T::of(v)).collect(),
            grid,
        })
    }

    pub fn delta(&self) -> T {
        self.delta
    }
    pub fn nr(&self) -> usize {
        self.r.len()
    }
    pub fn r(&self) -> &[T] {
        &self.r
    }
    /// Clenshaw–Curtis weights for `∫ dr`.
    pub fn radial_weights(&self) -> &[T] {
        &self.rw
    }
    /// Row-major radial differentiation matrix.
    pub fn diff_matrix(&self) -> &[T] {
        &self.dr
    }
    pub fn grid(&self) -> &GaussGrid<T> {
        &self.grid
    }
    pub fn npts(&self) -> usize {
        self.grid.len()
    }

    pub fn boundary_index(&self, side: Side) -> usize {
        match side {
            Side::Inner => 0,
            Side::Outer => self.nr() - 1,
        }
    }

    /// `∂_r` of a layer-stacked array (`nr × npts`).
    pub fn d_r(&self, v: &[T]) -> Vec<T> {
        let (nr, np) = (self.nr(), self.npts());
        let mut out = vec![T::zero(); nr * np];
        for i in 0..nr {
            let o = &mut out[i * np..(i + 1) * np];
            for j in 0..nr {
                let d = self.dr[i * nr + j];
                if d == T::zero() {
                    continue;
                }
                for (x, &y) in o.iter_mut().zip(&v[j * np..(j + 1) * np]) {
                    *x += d * y;
                }
            }
        }
        out
    }

    /// `∂_r` at a single radial node.
    pub fn d_r_at(&self, v: &[T], i: usize) -> Vec<T> {
        let (nr, np) = (self.nr(), self.npts());
        let mut out = vec![T::zero(); np];
        for j in 0..nr {
            let d = self.dr[i * nr + j];
            for (x, &y) in out.iter_mut().zip(&v[j * np..(j + 1) * np]) {
                *x += d * y;
            }
        }
        out
    }

    /// `∫_Ω f = ∫ r² (∫_{S²} f dΩ) dr`.
    pub fn integrate(&self, v: &[T]) -> T {
        let np = self.npts();
        (0..self.nr())
            .map(|i| self.rw[i] * self.r[i] * self.r[i] * self.grid.integrate(&v[i * np..(i + 1) * np]))
            .sum()
    }
}

/// Scalar on the shell nodes, layer-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellScalar<T> {
    pub values: Vec<T>,
}

impl<T: Real> ShellScalar<T> {
    pub fn layer<'a>(&'a self, geom: &ShellGeometry<T>, i: usize) -> &'a [T] {
        let np = geom.npts();
        &self.values[i * np..(i + 1) * np]
    }

    pub fn norm_l2(&self, geom: &ShellGeometry<T>) -> T {
        let sq: Vec<T> = self.values.iter().map(|&v| v * v).collect();
        geom.integrate(&sq).max(T::zero()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().map(|v| Float::abs(*v)).fold(T::zero(), T::max)
    }
}

/// `u = w e_r + u_θ e_θ + u_φ e_φ` at every shell node, layer-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellField<T> {
    nr: usize,
    npts: usize,
    pub w: Vec<T>,
    pub u_theta: Vec<T>,
    pub u_phi: Vec<T>,
}

impl<T: Real> ShellField<T> {
    pub fn zeros(geom: &ShellGeometry<T>) -> Self {
        let n = geom.nr() * geom.npts();
        Self {
            nr: geom.nr(),
            npts: geom.npts(),
            w: vec![T::zero(); n],
            u_theta: vec![T::zero(); n],
            u_phi: vec![T::zero(); n],
        }
    }

    pub fn new(geom: &ShellGeometry<T>, w: Vec<T>, u_theta: Vec<T>, u_phi: Vec<T>) -> Result<Self> {
        let n = geom.nr() * geom.npts();
        if w.len() != n || u_theta.len() != n || u_phi.len() != n {
            return Err(RotwaveError::ShapeMismatch {
                expected: format!("3 x {n}"),
                got: format!("{} / {} / {}", w.len(), u_theta.len(), u_phi.len()),
            });
        }
        if w.iter().chain(&u_theta).chain(&u_phi).any(|v| !v.is_finite()) {
            return invalid("shell field entries must be finite");
        }
        Ok(Self {
            nr: geom.nr(),
            npts: geom.npts(),
            w,
            u_theta,
            u_phi,
        })
    }

    /// Sample `(w, u_θ, u_φ)(r, θ, φ)`.
    pub fn from_fn(geom: &ShellGeometry<T>, f: impl Fn(T, T, T) -> (T, T, T)) -> Self {
        let mut u = Self::zeros(geom);
        let g = geom.grid();
        let mut p = 0;
        for &r in geom.r() {
            for &th in g.theta() {
                for &ph in g.phi() {
                    let (a, b, c) = f(r, th, ph);
                    u.w[p] = a;
                    u.u_theta[p] = b;
                    u.u_phi[p] = c;
                    p += 1;
                }
            }
        }
        u
    }

    pub fn nr(&self) -> usize {
        self.nr
    }

    pub fn check(&self, geom: &ShellGeometry<T>) -> Result<()> {
        if self.nr != geom.nr() || self.npts != geom.npts() {
            return Err(RotwaveError::ShapeMismatch {
                expected: format!("{} x {}", geom.nr(), geom.npts()),
                got: format!("{} x {}", self.nr, self.npts),
            });
        }
        Ok(())
    }

    fn range(&self, i: usize) -> std::ops::Range<usize> {
        i * self.npts..(i + 1) * self.npts
    }

    pub fn w_layer(&self, i: usize) -> &[T] {
        &self.w[self.range(i)]
    }

    /// Horizontal part `u_h` on radial node `i`.
    pub fn tangent_layer(&self, geom: &ShellGeometry<T>, i: usize) -> GridTangent<T> {
        let r = self.range(i);
        GridTangent::new(geom.grid(), self.u_theta[r.clone()].to_vec(), self.u_phi[r].to_vec())
            .expect("layer shape matches geometry")
    }

    pub fn axpy(&self, a: T, o: &Self) -> Self {
        let f = |x: &[T], y: &[T]| x.iter().zip(y).map(|(&p, &q)| p + a * q).collect();
        Self {
            nr: self.nr,
            npts: self.npts,
            w: f(&self.w, &o.w),
            u_theta: f(&self.u_theta, &o.u_theta),
            u_phi: f(&self.u_phi, &o.u_phi),
        }
    }

    pub fn scale(&self, a: T) -> Self {
        self.axpy(a - T::one(), self)
    }

    pub fn max_abs(&self) -> T {
        self.w
            .iter()
            .chain(&self.u_theta)
            .chain(&self.u_phi)
            .map(|v| Float::abs(*v))
            .fold(T::zero(), T::max)
    }

    /// `⟨u, v⟩_{L²(Ω)}`.
    pub fn inner(&self, o: &Self, geom: &ShellGeometry<T>) -> T {
        let p: Vec<T> = (0..self.w.len())
            .map(|i| self.w[i] * o.w[i] + self.u_theta[i] * o.u_theta[i] + self.u_phi[i] * o.u_phi[i])
            .collect();
        geom.integrate(&p)
    }

    pub fn norm_l2(&self, geom: &ShellGeometry<T>) -> T {
        self.inner(self, geom).max(T::zero()).sqrt()
    }

    /// Largest `|u·n|` on the two boundary spheres.
    pub fn boundary_flux_max(&self) -> T {
        let a = self.w[self.range(0)].iter();
        let b = self.w[self.range(self.nr - 1)].iter();
        a.chain(b).map(|v| Float::abs(*v)).fold(T::zero(), T::max)
    }
}

/// Per-layer spectral form: `w` and the Hodge pair of `u_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellSpectral<T> {
    pub w: Vec<SpectralScalar<T>>,
    pub phi: Vec<SpectralScalar<T>>,
    pub psi: Vec<SpectralScalar<T>>,
}

impl<T: Real> ShellSpectral<T> {
    pub fn zeros(nr: usize, lmax: usize) -> Self {
        Self {
            w: vec![SpectralScalar::zeros(lmax); nr],
            phi: vec![SpectralScalar::zeros(lmax); nr],
            psi: vec![SpectralScalar::zeros(lmax); nr],
        }
    }

    pub fn analyze(u: &ShellField<T>, geom: &ShellGeometry<T>) -> Result<Self> {
        u.check(geom)?;
        let g = geom.grid();
        let mut out = Self::zeros(geom.nr(), g.lmax());
        for i in 0..geom.nr() {
            let wl = GridScalar::new(g, u.w_layer(i).to_vec())?;
            out.w[i] = analyze(&wl, g)?;
            let h = hodge_decompose(&u.tangent_layer(geom, i), g)?;
            out.phi[i] = h.hodge_phi;
            out.psi[i] = h.hodge_psi;
        }
        Ok(out)
    }

    pub fn synthesize(&self, geom: &ShellGeometry<T>) -> Result<ShellField<T>> {
        let g = geom.grid();
        let mut u = ShellField::zeros(geom);
        for i in 0..geom.nr() {
            let r = u.range(i);
            u.w[r.clone()].copy_from_slice(synthesize(&self.w[i], g)?.values());
            let t = TangentField {
                hodge_phi: self.phi[i].clone(),
                hodge_psi: self.psi[i].clone(),
            };
            let h = synthesize_tangent(&t, g)?;
            u.u_theta[r.clone()].copy_from_slice(&h.u_theta);
            u.u_phi[r].copy_from_slice(&h.u_phi);
        }
        Ok(u)
    }
}

#[cfg(test)]
mod tests;
