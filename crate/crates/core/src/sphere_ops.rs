//! Tangent vector fields on the unit sphere: gradients, divergence and curl,
//! the Hodge split `u = ∇Φ + e_r × ∇Ψ`, the zonal-mean projector and the
//! Coriolis wave operator `L_h u = P_h(u × e_r cos θ)`.

use num_traits::{Float, Zero};
use rand::Rng;
use rustfft::num_complex::Complex;

use crate::error::{invalid, Result, RotwaveError};
use crate::spharm::{
    inverse_laplace_beltrami, mean_tolerance, synthesize_kind, weighted_sum, GaussGrid,
    GridScalar, SpectralScalar, Synth,
};
use crate::Real;

/// Hodge pair `(Φ, Ψ)` of a tangent field, both zero-mean.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentField<T> {
    pub hodge_phi: SpectralScalar<T>,
    pub hodge_psi: SpectralScalar<T>,
}

impl<T: Real> TangentField<T> {
    pub fn zeros(lmax: usize) -> Self {
        Self {
            hodge_phi: SpectralScalar::zeros(lmax),
            hodge_psi: SpectralScalar::zeros(lmax),
        }
    }

    /// `∇_h^⊥ Ψ`.
    pub fn rotational(psi: SpectralScalar<T>) -> Self {
        let lmax = psi.lmax();
        Self {
            hodge_phi: SpectralScalar::zeros(lmax),
            hodge_psi: psi.zero_mean(),
        }
    }

    /// `∇_h Φ`.
    pub fn gradient(phi: SpectralScalar<T>) -> Self {
        let lmax = phi.lmax();
        Self {
            hodge_phi: phi.zero_mean(),
            hodge_psi: SpectralScalar::zeros(lmax),
        }
    }

    pub fn lmax(&self) -> usize {
        self.hodge_psi.lmax()
    }

    pub fn is_divergence_free(&self) -> bool {
        self.hodge_phi.norm_l2() <= mean_tolerance(&self.hodge_psi)
    }

    pub fn axpy(&self, a: T, other: &Self) -> Self {
        Self {
            hodge_phi: self.hodge_phi.axpy(a, &other.hodge_phi),
            hodge_psi: self.hodge_psi.axpy(a, &other.hodge_psi),
        }
    }

    pub fn scale(&self, a: T) -> Self {
        Self {
            hodge_phi: self.hodge_phi.scale(a),
            hodge_psi: self.hodge_psi.scale(a),
        }
    }

    /// `⟨u, v⟩_{L²(S²)} = Σ l(l+1) (Φ conj(Φ') + Ψ conj(Ψ'))`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        let w = |a: &SpectralScalar<T>, b: &SpectralScalar<T>| {
            let lmax = a.lmax().min(b.lmax());
            let mut s: Complex<T> = Complex::zero();
            for l in 1..=lmax {
                let ll = T::of_usize(l * (l + 1));
                for m in -(l as i64)..=l as i64 {
                    s += a.get(l, m) * b.get(l, m).conj() * ll;
                }
            }
            s
        };
        w(&self.hodge_phi, &other.hodge_phi) + w(&self.hodge_psi, &other.hodge_psi)
    }

    /// Random divergence-free real field on degrees `lmin ..= lhi`.
    pub fn random_rotational<R: Rng + ?Sized>(lmax: usize, lmin: usize, lhi: usize, rng: &mut R) -> Self {
        Self::rotational(SpectralScalar::random_real(lmax, lmin.max(1), lhi, rng))
    }

    pub fn random<R: Rng + ?Sized>(lmax: usize, lmin: usize, lhi: usize, rng: &mut R) -> Self {
        Self {
            hodge_phi: SpectralScalar::random_real(lmax, lmin.max(1), lhi, rng),
            hodge_psi: SpectralScalar::random_real(lmax, lmin.max(1), lhi, rng),
        }
    }

    pub fn resized(&self, lmax: usize) -> Self {
        Self {
            hodge_phi: self.hodge_phi.resized(lmax),
            hodge_psi: self.hodge_psi.resized(lmax),
        }
    }
}

/// Grid components `(u_θ, u_φ)` of a tangent field.
#[derive(Debug, Clone, PartialEq)]
pub struct GridTangent<T> {
    nlat: usize,
    nlon: usize,
    pub u_theta: Vec<T>,
    pub u_phi: Vec<T>,
}

impl<T: Real> GridTangent<T> {
    pub fn new(grid: &GaussGrid<T>, u_theta: Vec<T>, u_phi: Vec<T>) -> Result<Self> {
        if u_theta.len() != grid.len() || u_phi.len() != grid.len() {
            return Err(RotwaveError::ShapeMismatch {
                expected: format!("2 x {}", grid.len()),
                got: format!("{} + {}", u_theta.len(), u_phi.len()),
            });
        }
        if u_theta.iter().chain(&u_phi).any(|v| !v.is_finite()) {
            return invalid("tangent components must be finite");
        }
        Ok(Self {
            nlat: grid.nlat(),
            nlon: grid.nlon(),
            u_theta,
            u_phi,
        })
    }

    pub fn zeros(grid: &GaussGrid<T>) -> Self {
        Self {
            nlat: grid.nlat(),
            nlon: grid.nlon(),
            u_theta: vec![T::zero(); grid.len()],
            u_phi: vec![T::zero(); grid.len()],
        }
    }

    /// Sample `(u_θ, u_φ)(θ, φ)`.
    pub fn from_fn(grid: &GaussGrid<T>, f: impl Fn(T, T) -> (T, T)) -> Self {
        let mut out = Self::zeros(grid);
        let nlon = grid.nlon();
        for (j, &th) in grid.theta().iter().enumerate() {
            for (k, &ph) in grid.phi().iter().enumerate() {
                let (a, b) = f(th, ph);
                out.u_theta[j * nlon + k] = a;
                out.u_phi[j * nlon + k] = b;
            }
        }
        out
    }

    pub fn nlat(&self) -> usize {
        self.nlat
    }
    pub fn nlon(&self) -> usize {
        self.nlon
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

    pub fn axpy(&self, a: T, other: &Self) -> Self {
        let f = |x: &[T], y: &[T]| x.iter().zip(y).map(|(&p, &q)| p + a * q).collect();
        Self {
            nlat: self.nlat,
            nlon: self.nlon,
            u_theta: f(&self.u_theta, &other.u_theta),
            u_phi: f(&self.u_phi, &other.u_phi),
        }
    }

    pub fn scale(&self, a: T) -> Self {
        Self {
            nlat: self.nlat,
            nlon: self.nlon,
            u_theta: self.u_theta.iter().map(|&v| v * a).collect(),
            u_phi: self.u_phi.iter().map(|&v| v * a).collect(),
        }
    }

    /// Pointwise `u × e_r`: `(u_φ, -u_θ)`.
    pub fn cross_er(&self) -> Self {
        Self {
            nlat: self.nlat,
            nlon: self.nlon,
            u_theta: self.u_phi.clone(),
            u_phi: self.u_theta.iter().map(|&v| -v).collect(),
        }
    }

    /// `⟨u, v⟩_{L²(S²)}` by quadrature.
    pub fn inner(&self, other: &Self, grid: &GaussGrid<T>) -> T {
        let p: Vec<T> = (0..self.u_theta.len())
            .map(|i| self.u_theta[i] * other.u_theta[i] + self.u_phi[i] * other.u_phi[i])
            .collect();
        grid.integrate(&p)
    }

    pub fn norm_l2(&self, grid: &GaussGrid<T>) -> T {
        self.inner(self, grid).max(T::zero()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.u_theta
            .iter()
            .chain(&self.u_phi)
            .map(|v| Float::abs(*v))
            .fold(T::zero(), T::max)
    }
}

/// `(∇_h f, ∇_h^⊥ f)` with `∇_h^⊥ f = e_r × ∇_h f = (-f_φ/sinθ, f_θ)`.
pub fn surface_grad<T: Real>(
    f: &SpectralScalar<T>,
    grid: &GaussGrid<T>,
) -> Result<(GridTangent<T>, GridTangent<T>)> {
    let ft = synthesize_kind(f, grid, Synth::DTheta)?.into_values();
    let fp = synthesize_kind(f, grid, Synth::DPhiOverSin)?.into_values();
    let minus_fp: Vec<T> = fp.iter().map(|&v| -v).collect();
    let grad = GridTangent::new(grid, ft.clone(), fp)?;
    let perp = GridTangent::new(grid, minus_fp, ft)?;
    Ok((grad, perp))
}

/// Grid components of `∇Φ + ∇^⊥Ψ`.
pub fn synthesize_tangent<T: Real>(u: &TangentField<T>, grid: &GaussGrid<T>) -> Result<GridTangent<T>> {
    let (g, _) = surface_grad(&u.hodge_phi, grid)?;
    let (_, p) = surface_grad(&u.hodge_psi, grid)?;
    Ok(g.axpy(T::one(), &p))
}

/// `(div_h u, curl_h u)` by Gauss quadrature of `-⟨u, ∇ conj Y⟩` and
/// `-⟨u × e_r, ∇ conj Y⟩`; exact for band-limited `u`.
pub fn surface_divcurl<T: Real>(
    u: &GridTangent<T>,
    grid: &GaussGrid<T>,
) -> Result<(SpectralScalar<T>, SpectralScalar<T>)> {
    u.check(grid)?;
    let cplx = |v: &[T]| -> Vec<Complex<T>> { v.iter().map(|&x| Complex::new(x, T::zero())).collect() };
    let ut = grid.fourier_forward(&cplx(&u.u_theta));
    let up = grid.fourier_forward(&cplx(&u.u_phi));
    let (w, lg) = (grid.width(), grid.lmax());
    let mut div = SpectralScalar::zeros(lg);
    let mut curl = SpectralScalar::zeros(lg);
    let i = Complex::new(T::zero(), T::one());
    for ma in 0..=lg {
        for l in ma.max(1)..=lg {
            let p = grid.plm(l, ma);
            let dp = grid.dplm(l, ma);
            for m in [ma as i64, -(ma as i64)] {
                if ma == 0 && m < 0 {
                    continue;
                }
                let sign = if m < 0 && ma % 2 == 1 { -T::one() } else { T::one() };
                let col = (lg as i64 + m) as usize;
                let im = i * T::of_i64(m);
                let mut d = Complex::zero();
                let mut c = Complex::zero();
                for j in 0..grid.nlat() {
                    let wj = grid.weights()[j] * sign;
                    let a = ut[j * w + col];
                    let b = up[j * w + col];
                    let q = p[j] / grid.sin_theta()[j];
                    d += (a * dp[j] - im * b * q) * wj;
                    c += (b * dp[j] + im * a * q) * wj;
                }
                div.set(l, m, -d);
                curl.set(l, m, -c);
            }
        }
    }
    Ok((div, curl))
}

/// Hodge potentials `Φ = Δ_h^{-1} div_h u`, `Ψ = Δ_h^{-1} curl_h u`.
pub fn hodge_decompose<T: Real>(u: &GridTangent<T>, grid: &GaussGrid<T>) -> Result<TangentField<T>> {
    let (d, c) = surface_divcurl(u, grid)?;
    Ok(TangentField {
        hodge_phi: inverse_laplace_beltrami(&d),
        hodge_psi: inverse_laplace_beltrami(&c),
    })
}

/// `P_h u = ∇^⊥Ψ` (the divergence-free part).
pub fn leray_part<T: Real>(u: &TangentField<T>) -> TangentField<T> {
    TangentField::rotational(u.hodge_psi.clone())
}

/// Spectral form of `Π_zonal u`: the `m = 0` stream function, `Φ` dropped
/// (the φ-mean of `∂_φ Φ / sinθ` vanishes).
pub fn zonal_part<T: Real>(u: &TangentField<T>) -> TangentField<T> {
    TangentField::rotational(u.hodge_psi.zonal_part())
}

/// `(1 - Π_zonal) u`.
pub fn nonzonal_part<T: Real>(u: &TangentField<T>) -> TangentField<T> {
    u.axpy(-T::one(), &zonal_part(u))
}

/// `Π_zonal u = ((1/2π)∮ u·e_φ dφ) e_φ` on the grid.
pub fn zonal_project<T: Real>(u: &TangentField<T>, grid: &GaussGrid<T>) -> Result<GridTangent<T>> {
    synthesize_tangent(&zonal_part(u), grid)
}

/// `L_h u = P_h(u × e_r cos θ)`, evaluated on the grid. The grid needs one
/// degree of headroom over `u` for the `cos θ` product.
pub fn apply_lh<T: Real>(u: &TangentField<T>, grid: &GaussGrid<T>) -> Result<TangentField<T>> {
    if !u.is_divergence_free() {
        return invalid("L_h needs a divergence-free field (Phi = 0)");
    }
    let lmax = u.lmax();
    if grid.lmax() < lmax + 1 {
        return invalid(format!(
            "L_h needs grid lmax >= {} for input truncation {lmax}",
            lmax + 1
        ));
    }
    let g = synthesize_tangent(u, grid)?.cross_er();
    let nlon = grid.nlon();
    let mut ut = g.u_theta;
    let mut up = g.u_phi;
    for j in 0..grid.nlat() {
        let c = grid.cos_theta()[j];
        for k in 0..nlon {
            ut[j * nlon + k] *= c;
            up[j * nlon + k] *= c;
        }
    }
    let v = hodge_decompose(&GridTangent::new(grid, ut, up)?, grid)?;
    Ok(TangentField::rotational(v.hodge_psi.resized(lmax)))
}

/// `(‖Φ‖²_{H^{α+1}} + ‖Ψ‖²_{H^{α+1}})^{1/2}` with weights `(l²+l)^{α+1}`.
pub fn vector_sobolev_norm<T: Real>(u: &TangentField<T>, alpha: T) -> T {
    let a = alpha + T::one();
    (weighted_sum(&u.hodge_phi, a) + weighted_sum(&u.hodge_psi, a)).sqrt()
}

pub fn grid_scalar_product<T: Real>(a: &GridScalar<T>, b: &GridTangent<T>) -> GridTangent<T> {
    let f = |v: &[T]| v.iter().zip(a.values()).map(|(&x, &y)| x * y).collect();
    GridTangent {
        nlat: b.nlat,
        nlon: b.nlon,
        u_theta: f(&b.u_theta),
        u_phi: f(&b.u_phi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spharm::{analyze, laplace_beltrami};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn grid(l: usize) -> GaussGrid<f64> {
        GaussGrid::new(l).unwrap()
    }

    #[test]
    fn gradient_of_y10() {
        let g = grid(6);
        let (gr, perp) = surface_grad(&SpectralScalar::unit(6, 1, 0), &g).unwrap();
        let a = (3.0 / (4.0 * PI)).sqrt();
        let expect = GridTangent::from_fn(&g, |th, _| (-a * th.sin(), 0.0));
        assert!(gr.axpy(-1.0, &expect).max_abs() < 1e-13);
        let expect = GridTangent::from_fn(&g, |th, _| (0.0, -a * th.sin()));
        assert!(perp.axpy(-1.0, &expect).max_abs() < 1e-13);
        let (z0, z1) = surface_grad(&SpectralScalar::zeros(6), &g).unwrap();
        assert_eq!(z0.max_abs() + z1.max_abs(), 0.0);
    }

    #[test]
    fn gradient_components_by_finite_differences() {
        // f = Re Y_3^2 written out analytically
        let g = grid(8);
        let f = SpectralScalar::unit(8, 3, 2).axpy(1.0, &SpectralScalar::unit(8, 3, -2));
        let c = (105.0 / (32.0 * PI)).sqrt();
        let val = |th: f64, ph: f64| 2.0 * c * th.sin().powi(2) * th.cos() * (2.0 * ph).cos();
        let (gr, _) = surface_grad(&f, &g).unwrap();
        let h = 1e-6;
        let expect = GridTangent::from_fn(&g, |th, ph| {
            (
                (val(th + h, ph) - val(th - h, ph)) / (2.0 * h),
                (val(th, ph + h) - val(th, ph - h)) / (2.0 * h) / th.sin(),
            )
        });
        assert!(gr.axpy(-1.0, &expect).max_abs() < 1e-8);
    }

    #[test]
    fn grad_and_perp_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = grid(12);
        for _ in 0..5 {
            let f = SpectralScalar::random_real(12, 1, 12, &mut rng);
            let (a, b) = surface_grad(&f, &g).unwrap();
            let scale = a.norm_l2(&g) * b.norm_l2(&g);
            assert!(a.inner(&b, &g).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn divcurl_of_potentials() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = grid(15);
        let f = SpectralScalar::random_real(15, 1, 15, &mut rng);
        let lap = laplace_beltrami(&f);
        let (gr, perp) = surface_grad(&f, &g).unwrap();
        let (d, c) = surface_divcurl(&perp, &g).unwrap();
        assert!(d.max_abs() < 1e-9);
        assert!(c.axpy(-1.0, &lap).max_abs() < 1e-9);
        let (d, c) = surface_divcurl(&gr, &g).unwrap();
        assert!(c.max_abs() < 1e-9);
        assert!(d.axpy(-1.0, &lap).max_abs() < 1e-9);
        let (d, c) = surface_divcurl(&GridTangent::zeros(&g), &g).unwrap();
        assert_eq!(d.max_abs() + c.max_abs(), 0.0);
    }

    #[test]
    fn curl_matches_coordinate_formula() {
        // Tangential part of the Cartesian field (z, 0, 0):
        // u_θ = cos²θ cosφ, u_φ = -cosθ sinφ, and
        // (1/sinθ)(∂_θ(u_φ sinθ) − ∂_φ u_θ) = sinθ sinφ.
        let g = grid(10);
        let u = GridTangent::from_fn(&g, |th, ph| {
            (th.cos().powi(2) * ph.cos(), -th.cos() * ph.sin())
        });
        let (_, c) = surface_divcurl(&u, &g).unwrap();
        let exact = GridScalar::from_fn(&g, |th, ph| th.sin() * ph.sin());
        let ce = analyze(&exact, &g).unwrap();
        assert!(c.axpy(-1.0, &ce).max_abs() < 1e-12);
    }

    #[test]
    fn hodge_examples() {
        let g = grid(8);
        let y21 = SpectralScalar::unit(8, 2, 1).axpy(-1.0, &SpectralScalar::unit(8, 2, -1));
        let (gr, _) = surface_grad(&y21, &g).unwrap();
        let h = hodge_decompose(&gr, &g).unwrap();
        assert!(h.hodge_phi.axpy(-1.0, &y21).max_abs() < 1e-12);
        assert!(h.hodge_psi.max_abs() < 1e-12);
        let y30 = SpectralScalar::unit(8, 3, 0);
        let (_, perp) = surface_grad(&y30, &g).unwrap();
        let h = hodge_decompose(&perp, &g).unwrap();
        assert!(h.hodge_psi.axpy(-1.0, &y30).max_abs() < 1e-12);
        assert!(h.hodge_phi.max_abs() < 1e-12);
    }

    #[test]
    fn hodge_reconstructs_and_splits_orthogonally() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = grid(14);
        let t = TangentField::random(14, 1, 14, &mut rng);
        let u = synthesize_tangent(&t, &g).unwrap();
        let h = hodge_decompose(&u, &g).unwrap();
        let back = synthesize_tangent(&h, &g).unwrap();
        assert!(u.axpy(-1.0, &back).norm_l2(&g) < 1e-9);
        let pu = synthesize_tangent(&leray_part(&h), &g).unwrap();
        let qu = u.axpy(-1.0, &pu);
        assert!(pu.inner(&qu, &g).abs() < 1e-10 * u.norm_l2(&g).powi(2));
        let ppu = hodge_decompose(&pu, &g).unwrap();
        assert!(leray_part(&ppu).axpy(-1.0, &leray_part(&h)).hodge_psi.max_abs() < 1e-12);
    }

    #[test]
    fn spectral_inner_matches_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = grid(10);
        let a = TangentField::random(10, 1, 10, &mut rng);
        let b = TangentField::random(10, 1, 10, &mut rng);
        let q = synthesize_tangent(&a, &g).unwrap().inner(&synthesize_tangent(&b, &g).unwrap(), &g);
        assert!((a.inner(&b).re - q).abs() < 1e-10 * (1.0 + q.abs()));
    }

    #[test]
    fn zonal_projection_examples() {
        let g = grid(10);
        // g(θ) e_φ with g = sinθ cosθ = ∂_θ Ψ for Ψ ∝ Y_2^0
        let psi = SpectralScalar::unit(10, 2, 0);
        let t = TangentField::rotational(psi);
        let direct = synthesize_tangent(&t, &g).unwrap();
        let z = zonal_project(&t, &g).unwrap();
        assert!(z.axpy(-1.0, &direct).max_abs() < 1e-13);
        // g(θ) e_θ is a pure gradient of a zonal potential
        let t = TangentField::gradient(SpectralScalar::unit(10, 2, 0));
        assert!(zonal_project(&t, &g).unwrap().max_abs() < 1e-13);
        // sinθ cosφ e_φ: analyze on the grid and project
        let u = GridTangent::from_fn(&g, |th, ph| (0.0, th.sin() * ph.cos()));
        let h = hodge_decompose(&u, &g).unwrap();
        assert!(zonal_project(&h, &g).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn zonal_projection_matches_longitude_average() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = grid(12);
        let t = TangentField::random(12, 1, 12, &mut rng);
        let u = synthesize_tangent(&t, &g).unwrap();
        let z = zonal_project(&t, &g).unwrap();
        let nlon = g.nlon();
        for j in 0..g.nlat() {
            let avg: f64 = u.u_phi[j * nlon..(j + 1) * nlon].iter().sum::<f64>() / nlon as f64;
            for k in 0..nlon {
                assert!((z.u_phi[j * nlon + k] - avg).abs() < 1e-12);
                assert!(z.u_theta[j * nlon + k].abs() < 1e-12);
            }
        }
        let zz = zonal_part(&zonal_part(&t));
        assert_eq!(zz, zonal_part(&t));
    }

    fn zonal_poly_psi(g: &GaussGrid<f64>, lmax: usize, deg: i32) -> SpectralScalar<f64> {
        let f = GridScalar::from_fn(g, |th, _| th.cos().powi(deg));
        analyze(&f, g).unwrap().resized(lmax).zero_mean()
    }

    #[test]
    fn lh_examples() {
        let g = grid(9);
        let psi = zonal_poly_psi(&g, 8, 2);
        let out = apply_lh(&TangentField::rotational(psi), &g).unwrap();
        assert!(out.hodge_psi.max_abs() < 1e-9);
        let y11 = SpectralScalar::unit(8, 1, 1).axpy(-1.0, &SpectralScalar::unit(8, 1, -1));
        let out = apply_lh(&TangentField::rotational(y11), &g).unwrap();
        assert!(vector_sobolev_norm(&out, 0.0) > 0.1);
        let out = apply_lh(&TangentField::zeros(8), &g).unwrap();
        assert_eq!(out.hodge_psi.max_abs(), 0.0);
        let bad = TangentField::gradient(SpectralScalar::unit(8, 2, 0));
        assert!(apply_lh(&bad, &g).is_err());
        assert!(apply_lh(&TangentField::<f64>::zeros(9), &g).is_err());
    }

    #[test]
    fn lh_matches_closed_form() {
        // For u = ∇^⊥ψ: curl_h(cosθ ∇ψ) = ∇(cosθ) × ∇ψ · e_r = -∂_φ ψ, hence
        // L_h u = ∇^⊥χ with χ_l^m = i m ψ_l^m / (l(l+1)).
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let lmax = 12;
        let g = grid(lmax + 1);
        let u = TangentField::random_rotational(lmax, 1, lmax, &mut rng);
        let out = apply_lh(&u, &g).unwrap();
        let expect = u.hodge_psi.map_lm(|l, m| {
            if l == 0 {
                Complex::new(0.0, 0.0)
            } else {
                Complex::new(0.0, m as f64 / (l * (l + 1)) as f64)
            }
        });
        assert!(out.hodge_psi.axpy(-1.0, &expect).max_abs() < 1e-12);
    }

    #[test]
    fn lh_kernel_contains_zonal_polynomials() {
        let g = grid(9);
        for deg in 1..=6 {
            let psi = zonal_poly_psi(&g, 8, deg);
            let out = apply_lh(&TangentField::rotational(psi), &g).unwrap();
            assert!(vector_sobolev_norm(&out, 0.0) < 1e-8, "degree {deg}");
        }
    }

    #[test]
    fn vector_norm_examples() {
        let t = TangentField::rotational(SpectralScalar::<f64>::unit(6, 1, 0));
        assert!((vector_sobolev_norm(&t, 0.0) - 2f64.sqrt()).abs() < 1e-15);
        let t = TangentField::rotational(SpectralScalar::<f64>::unit(6, 2, 0));
        assert!((vector_sobolev_norm(&t, -4.0) - 6f64.powf(-1.5)).abs() < 1e-15);
        assert_eq!(vector_sobolev_norm(&TangentField::<f64>::zeros(6), 0.0), 0.0);
    }

    #[test]
    fn vector_norm_at_zero_is_l2() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = grid(10);
        let t = TangentField::random(10, 1, 10, &mut rng);
        let q = synthesize_tangent(&t, &g).unwrap().norm_l2(&g);
        assert!((vector_sobolev_norm(&t, 0.0) - q).abs() < 1e-11 * q);
    }

    #[test]
    fn single_precision_lh_is_skew() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = GaussGrid::<f32>::new(9).unwrap();
        let u = TangentField::<f32>::random_rotational(8, 1, 8, &mut rng);
        let lu = apply_lh(&u, &g).unwrap();
        assert!(lu.inner(&u).re.abs() < 1e-4 * u.inner(&u).re);
    }
}
