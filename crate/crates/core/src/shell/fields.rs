//! Manufactured shell fields with known structure, used by the identity checks.

use rand::Rng;
use rustfft::num_complex::Complex;

use crate::error::Result;
use crate::sphere_ops::{synthesize_tangent, GridTangent, TangentField};
use crate::spharm::SpectralScalar;
use crate::Real;

use super::{Side, ShellField, ShellGeometry, ShellSpectral};

/// Evaluate per-radius Hodge data `(w, Φ, Ψ)(r)` on every layer.
pub fn from_radial<T: Real>(
    geom: &ShellGeometry<T>,
    f: impl Fn(T) -> (SpectralScalar<T>, SpectralScalar<T>, SpectralScalar<T>),
) -> Result<ShellField<T>> {
    let lmax = geom.grid().lmax();
    let mut s = ShellSpectral::zeros(geom.nr(), lmax);
    for (i, &r) in geom.r().iter().enumerate() {
        let (w, phi, psi) = f(r);
        s.w[i] = w.resized(lmax);
        s.phi[i] = phi.resized(lmax);
        s.psi[i] = psi.resized(lmax);
    }
    s.synthesize(geom)
}

/// Rigid rotation `u = r sinθ e_φ = e_z × x`.
pub fn rigid_rotation<T: Real>(geom: &ShellGeometry<T>) -> ShellField<T> {
    ShellField::from_fn(geom, |r, th, _| (T::zero(), T::zero(), r * th.sin()))
}

/// `u = r a(θ, φ)` for a tangent field `a`.
pub fn radially_scaled<T: Real>(geom: &ShellGeometry<T>, a: &TangentField<T>) -> Result<ShellField<T>> {
    let z = SpectralScalar::zeros(a.lmax());
    from_radial(geom, |r| (z.clone(), a.hodge_phi.scale(r), a.hodge_psi.scale(r)))
}

fn bump<T: Real>(geom: &ShellGeometry<T>, r: T, k: i32) -> (T, T) {
    // ((r − r₋)(r − r₊)/δ²)^k and its derivative
    let d = geom.delta();
    let q = (r - (T::one() - d)) * (r - (T::one() + d)) / (d * d);
    let dq = T::of(2.0) * (r - T::one()) / (d * d);
    (q.powi(k), T::of(k as f64) * q.powi(k - 1) * dq)
}

/// Divergence-free field with `w = 0` on both walls and homogeneous Navier
/// conditions `∂_r u_h = u_h / r` there: toroidal `g(r) ∇^⊥Ψ` with
/// `g = r + c q²` plus poloidal `w = l(l+1) p Y / r²`, `u_h = p' ∇_h Y / r`
/// with `p = κ q³`, where `q = (r − r₋)(r − r₊)/δ²`.
pub fn navier_family<T: Real, R: Rng + ?Sized>(
    geom: &ShellGeometry<T>,
    lhi: usize,
    rng: &mut R,
) -> Result<ShellField<T>> {
    let lmax = geom.grid().lmax();
    let psi = SpectralScalar::random_real(lmax, 1, lhi, rng);
    let y = SpectralScalar::random_real(lmax, 1, lhi, rng);
    let c = T::of(rng.random_range(-1.0..1.0));
    let kappa = T::of(rng.random_range(-1.0..1.0));
    let ll = y.map_lm(|l, _| Complex::new(T::of_usize(l * (l + 1)), T::zero()));
    from_radial(geom, |r| {
        let (q, dq) = bump(geom, r, 1);
        let g = r + c * q * q;
        let (p, dp) = (kappa * q * q * q, kappa * T::of(3.0) * q * q * dq);
        (ll.scale(p / (r * r)), y.scale(dp / r), psi.scale(g))
    })
}

/// Lorentzian `1/(1 + ((r − r₀)/η)²)` and its derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lorentzian<T> {
    pub center: T,
    pub width: T,
}

impl<T: Real> Lorentzian<T> {
    pub fn random<R: Rng + ?Sized>(geom: &ShellGeometry<T>, rng: &mut R) -> Self {
        let d = geom.delta().f64();
        Self {
            center: T::of(1.0 + d * rng.random_range(-1.0..1.0)),
            width: T::of(d * rng.random_range(0.3..0.5)),
        }
    }

    pub fn eval(&self, r: T) -> (T, T) {
        let x = (r - self.center) / self.width;
        let v = T::one() / (T::one() + x * x);
        (v, -T::of(2.0) * x / self.width * v * v)
    }
}

/// Generic smooth field (neither solenoidal nor flux-free): each of `w`, `Φ`,
/// `Ψ` is a sum of three random angular fields with random Lorentzian radial
/// profiles, analytic but with poles near the shell.
pub fn random_smooth<T: Real, R: Rng + ?Sized>(
    geom: &ShellGeometry<T>,
    lhi: usize,
    rng: &mut R,
) -> Result<ShellField<T>> {
    let lmax = geom.grid().lmax();
    let mut terms = Vec::new();
    for _ in 0..9 {
        terms.push((SpectralScalar::random_real(lmax, 1, lhi, rng), Lorentzian::random(geom, rng)));
    }
    from_radial(geom, |r| {
        let sum = |k: usize| {
            terms[3 * k..3 * k + 3]
                .iter()
                .fold(SpectralScalar::zeros(lmax), |acc, (s, p)| acc.axpy(p.eval(r).0, s))
        };
        (sum(0), sum(1), sum(2))
    })
}

/// `u_h = L(r) a`, `w = q(r) L(r) s` with `q` vanishing on both walls, so that
/// the exact traction is `±(L' − L/r) a` at `r = 1 ± δ`.
#[derive(Debug, Clone)]
pub struct WallTangentField<T> {
    pub a: TangentField<T>,
    pub s: SpectralScalar<T>,
    pub profile: Lorentzian<T>,
}

impl<T: Real> WallTangentField<T> {
    pub fn random<R: Rng + ?Sized>(geom: &ShellGeometry<T>, lhi: usize, rng: &mut R) -> Self {
        let lmax = geom.grid().lmax();
        Self {
            a: TangentField::random(lmax, 1, lhi, rng),
            s: SpectralScalar::random_real(lmax, 1, lhi, rng),
            profile: Lorentzian::random(geom, rng),
        }
    }

    pub fn field(&self, geom: &ShellGeometry<T>) -> Result<ShellField<T>> {
        from_radial(geom, |r| {
            let (l, _) = self.profile.eval(r);
            let (q, _) = bump(geom, r, 1);
            (self.s.scale(q * l), self.a.hodge_phi.scale(l), self.a.hodge_psi.scale(l))
        })
    }

    pub fn exact_traction(&self, side: Side, geom: &ShellGeometry<T>) -> Result<GridTangent<T>> {
        let r = geom.r()[geom.boundary_index(side)];
        let (l, dl) = self.profile.eval(r);
        let s: T = side.normal_sign();
        Ok(synthesize_tangent(&self.a, geom.grid())?.scale(s * (dl - l / r)))
    }
}
