//! Rotating barotropic vorticity solver on the unit sphere,
//!
//! `∂_t ζ + u·∇ζ = -(1/ε) ∂_φ ψ + μ Δζ + curl F`,  `u = ∇^⊥ψ`, `ζ = Δψ`,
//!
//! with running time integrals of the velocity and zonal-defect diagnostics.
//! Rotation and viscosity are diagonal in `(l, m)`, so they are integrated
//! exactly (Lawson RK4); the advection term is evaluated on a 3/2-padded grid.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;

use crate::error::{invalid, Result, RotwaveError};
use crate::expquad::quadratic_weights;
use crate::spharm::{analyze, inverse_laplace_beltrami, laplace_beltrami, GaussGrid, GridScalar, SpectralScalar};
use crate::sphere_ops::{apply_lh, nonzonal_part, surface_grad, vector_sobolev_norm, TangentField};
use crate::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig<T> {
    pub lmax: usize,
    pub epsilon: T,
    pub mu: T,
    pub t_final: T,
    pub dt: T,
    pub seed: u64,
    /// `‖u₀‖_{L²}`.
    pub m0: T,
    /// Order of the defect norm.
    pub alpha: T,
    /// Steady external force (only its rotational part drives the flow).
    pub forcing: Option<TangentField<T>>,
    pub nonlinear: bool,
}

impl<T: Real> RunConfig<T> {
    pub fn new(lmax: usize, epsilon: T) -> Self {
        Self {
            lmax,
            epsilon,
            mu: T::zero(),
            t_final: T::one(),
            dt: T::of(0.005),
            seed: 0,
            m0: T::one(),
            alpha: T::of(-4.0),
            forcing: None,
            nonlinear: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lmax < 4 {
            return invalid("lmax must be at least 4");
        }
        if !(self.epsilon > T::zero()) {
            return invalid("epsilon must be positive");
        }
        if !(self.mu >= T::zero()) {
            return invalid("mu must be nonnegative");
        }
        if !(self.dt > T::zero()) {
            return invalid("dt must be positive");
        }
        if !(self.t_final >= T::zero()) || (self.t_final > T::zero() && self.t_final < self.dt) {
            return invalid("T must be zero or at least dt");
        }
        if !(self.m0 >= T::zero()) {
            return invalid("M0 must be nonnegative");
        }
        if let Some(f) = &self.forcing {
            if f.lmax() != self.lmax {
                return invalid("forcing truncation must equal lmax");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereState<T> {
    pub zeta: SpectralScalar<T>,
    pub epsilon: T,
    pub mu: T,
    pub t: T,
    /// `∫_0^t ζ dt`; the stream function of `∫ u dt` is its inverse Laplacian.
    pub accum: SpectralScalar<T>,
}

impl<T: Real> SphereState<T> {
    pub fn stream_function(&self) -> SpectralScalar<T> {
        inverse_laplace_beltrami(&self.zeta)
    }

    pub fn velocity(&self) -> TangentField<T> {
        TangentField::rotational(self.stream_function())
    }

    /// `∫_0^t u dt`.
    pub fn time_integral(&self) -> TangentField<T> {
        TangentField::rotational(inverse_laplace_beltrami(&self.accum))
    }

    /// `‖u‖²_{L²(S²)} = Σ |ζ_l^m|² / (l(l+1))`.
    pub fn energy(&self) -> T {
        energy_of(&self.zeta)
    }

    /// `‖ζ‖²_{L²(S²)}`.
    pub fn enstrophy(&self) -> T {
        self.zeta.norm_l2().powi(2)
    }

    /// `‖∇u‖²_{L²(S²)} = ‖ζ‖² − ‖u‖²` for divergence-free `u` on the unit sphere.
    pub fn grad_norm_sq(&self) -> T {
        self.enstrophy() - self.energy()
    }
}

fn energy_of<T: Real>(zeta: &SpectralScalar<T>) -> T {
    let mut e = T::zero();
    for l in 1..=zeta.lmax() {
        let s: T = (-(l as i64)..=l as i64).map(|m| zeta.get(l, m).norm_sqr()).sum();
        e += s / T::of_usize(l * (l + 1));
    }
    e
}

/// Random divergence-free initial vorticity on `2 ≤ l ≤ lmax/2`, stream
/// function coefficients `~ N(0,1)/(l(l+1))`, scaled to `‖u₀‖ = M₀`.
pub fn init_state<T: Real>(cfg: &RunConfig<T>) -> Result<SphereState<T>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let raw = SpectralScalar::<T>::random_real(cfg.lmax, 2, cfg.lmax / 2, &mut rng);
    let psi = raw.map_lm(|l, _| {
        if l == 0 {
            Complex::zero()
        } else {
            Complex::new(T::one() / T::of_usize(l * (l + 1)), T::zero())
        }
    });
    let zeta = laplace_beltrami(&psi);
    let e = energy_of(&zeta);
    let zeta = if e > T::zero() { zeta.scale(cfg.m0 / e.sqrt()) } else { zeta };
    Ok(SphereState {
        zeta,
        epsilon: cfg.epsilon,
        mu: cfg.mu,
        t: T::zero(),
        accum: SpectralScalar::zeros(cfg.lmax),
    })
}

/// Per-time diagnostics of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record<T> {
    pub t: T,
    pub energy: T,
    pub enstrophy: T,
    pub grad_norm_sq: T,
    /// `‖(1 − Π_zonal) ∫_0^t u‖_{H^α}`.
    pub zonal_defect: T,
    /// `‖L_h ∫_0^t u‖_{H^{α+2}}`.
    pub lh_integral_norm: T,
}

#[derive(Debug, Clone)]
pub struct RunOutput<T> {
    pub final_state: SphereState<T>,
    pub time_integral: TangentField<T>,
    pub history: Vec<Record<T>>,
    /// `∫_0^T ‖∇u‖² dt` by the trapezoid rule over the history.
    pub grad_time_integral: T,
}

pub struct SphereSolver<T: Real> {
    lmax: usize,
    epsilon: T,
    mu: T,
    nonlinear: bool,
    grid: GaussGrid<T>,
    forcing: Option<SpectralScalar<T>>,
}

impl<T: Real> SphereSolver<T> {
    pub fn new(cfg: &RunConfig<T>) -> Result<Self> {
        cfg.validate()?;
        let l = cfg.lmax;
        let nlat = ((3 * l + 2) / 2).max(l + 2);
        let nlon = crate::spharm::fft_size(3 * l + 1);
        let grid = GaussGrid::with_resolution(l + 1, nlat, nlon)?;
        let forcing = cfg
            .forcing
            .as_ref()
            .map(|f| laplace_beltrami(&f.hodge_psi).zero_mean());
        Ok(Self {
            lmax: l,
            epsilon: cfg.epsilon,
            mu: cfg.mu,
            nonlinear: cfg.nonlinear,
            grid,
            forcing,
        })
    }

    /// Alias-free quadrature grid with one degree of headroom.
    pub fn grid(&self) -> &GaussGrid<T> {
        &self.grid
    }

    /// Linear rate of mode `(l, m)`: `i m / (ε l(l+1)) − μ l(l+1)`.
    pub fn rate(&self, l: usize, m: i64) -> Complex<T> {
        if l == 0 {
            return Complex::zero();
        }
        let ll = T::of_usize(l * (l + 1));
        Complex::new(-self.mu * ll, T::of_i64(m) / (self.epsilon * ll))
    }

    /// Advection and forcing: `−u·∇ζ + curl F`, truncated to `lmax`.
    pub fn nonlinear_term(&self, zeta: &SpectralScalar<T>) -> Result<SpectralScalar<T>> {
        let mut out = if self.nonlinear {
            let psi = inverse_laplace_beltrami(zeta);
            let (_, u) = surface_grad(&psi, &self.grid)?;
            let (gz, _) = surface_grad(zeta, &self.grid)?;
            let prod: Vec<T> = (0..self.grid.len())
                .map(|i| -(u.u_theta[i] * gz.u_theta[i] + u.u_phi[i] * gz.u_phi[i]))
                .collect();
            let f = GridScalar::new(&self.grid, prod)?;
            analyze(&f, &self.grid)?.resized(self.lmax).zero_mean()
        } else {
            SpectralScalar::zeros(self.lmax)
        };
        if let Some(f) = &self.forcing {
            out = out.axpy(T::one(), f);
        }
        Ok(out)
    }

    fn diag(&self, c: &SpectralScalar<T>, f: impl Fn(Complex<T>) -> Complex<T>) -> SpectralScalar<T> {
        c.map_lm(|l, m| f(self.rate(l, m)))
    }

    /// One Lawson RK4 step of length `dt`, with the running integral advanced
    /// by quadratic exponential quadrature.
    pub fn step(&self, s: &SphereState<T>, dt: T) -> Result<SphereState<T>> {
        if !(dt > T::zero()) {
            return invalid("dt must be positive");
        }
        let h = dt;
        let half = h / T::of(2.0);
        let e_half = |c: &SpectralScalar<T>| self.diag(c, |r| (r * half).exp());
        let e_full = |c: &SpectralScalar<T>| self.diag(c, |r| (r * h).exp());
        let z0 = &s.zeta;
        let k1 = self.nonlinear_term(z0)?;
        let a = e_half(&z0.axpy(half, &k1));
        let k2 = self.nonlinear_term(&a)?;
        let b = e_half(z0).axpy(half, &k2);
        let k3 = self.nonlinear_term(&b)?;
        let c = e_full(z0).axpy(h, &e_half(&k3));
        let k4 = self.nonlinear_term(&c)?;
        let incr = e_full(&k1)
            .axpy(T::of(2.0), &e_half(&k2.axpy(T::one(), &k3)))
            .axpy(T::one(), &k4);
        let z1 = e_full(z0).axpy(h / T::of(6.0), &incr);

        let mid = a.axpy(T::one(), &b).scale(T::of(0.5));
        let mut accum = s.accum.clone();
        for l in 1..=self.lmax {
            for m in -(l as i64)..=l as i64 {
                let w = quadratic_weights(self.rate(l, m) * h);
                let i = SpectralScalar::<T>::index(l, m);
                let v = (w[0] * z0.coeffs()[i] + w[1] * mid.coeffs()[i] + w[2] * z1.coeffs()[i]) * h;
                accum.coeffs_mut()[i] += v;
            }
        }

        let t1 = s.t + h;
        let e0 = energy_of(z0);
        let e1 = energy_of(&z1);
        if !e1.is_finite() {
            return Err(RotwaveError::NumericFailure {
                time: t1.f64(),
                detail: "non-finite vorticity".into(),
            });
        }
        if self.forcing.is_none() && e1 > e0 * T::of(1.1) {
            return Err(RotwaveError::NumericFailure {
                time: t1.f64(),
                detail: format!("energy grew from {e0} to {e1} in one step; reduce dt"),
            });
        }
        Ok(SphereState {
            zeta: z1,
            epsilon: s.epsilon,
            mu: s.mu,
            t: t1,
            accum,
        })
    }

    pub fn record(&self, s: &SphereState<T>, alpha: T) -> Result<Record<T>> {
        let ti = s.time_integral();
        let lh = apply_lh(&ti, &self.grid)?;
        Ok(Record {
            t: s.t,
            energy: s.energy(),
            enstrophy: s.enstrophy(),
            grad_norm_sq: s.grad_norm_sq(),
            zonal_defect: zonal_defect(&ti, alpha),
            lh_integral_norm: vector_sobolev_norm(&lh, alpha + T::of(2.0)),
        })
    }
}

/// Integrate to `T` from `init_state`, recording diagnostics after every step.
pub fn run_accumulate<T: Real>(cfg: &RunConfig<T>) -> Result<RunOutput<T>> {
    let solver = SphereSolver::new(cfg)?;
    let mut s = init_state(cfg)?;
    run_from(&solver, &mut s, cfg)
}

/// Continue `s` to `cfg.t_final` with `solver`.
pub fn run_from<T: Real>(
    solver: &SphereSolver<T>,
    s: &mut SphereState<T>,
    cfg: &RunConfig<T>,
) -> Result<RunOutput<T>> {
    let remaining = cfg.t_final - s.t;
    let n = if remaining > T::zero() {
        (remaining / cfg.dt - T::of(1e-9)).ceil().to_usize().unwrap_or(0).max(1)
    } else {
        0
    };
    let h = if n > 0 { remaining / T::of_usize(n) } else { cfg.dt };
    let mut history = vec![solver.record(s, cfg.alpha)?];
    let mut grad_int = T::zero();
    for _ in 0..n {
        let next = solver.step(s, h)?;
        let rec = solver.record(&next, cfg.alpha)?;
        grad_int += (history.last().map_or(T::zero(), |r| r.grad_norm_sq) + rec.grad_norm_sq) * h
            / T::of(2.0);
        history.push(rec);
        *s = next;
    }
    Ok(RunOutput {
        time_integral: s.time_integral(),
        final_state: s.clone(),
        history,
        grad_time_integral: grad_int,
    })
}

/// `‖(1 − Π_zonal) v‖_{H^α}`.
pub fn zonal_defect<T: Real>(ti: &TangentField<T>, alpha: T) -> T {
    vector_sobolev_norm(&nonzonal_part(ti), alpha)
}

/// Longest step the advection CFL heuristic allows for this state (the
/// rotation term is integrated exactly and imposes no limit).
pub fn stable_dt<T: Real>(s: &SphereState<T>) -> T {
    let lmax = T::of_usize(s.zeta.lmax());
    let umax = s.energy().sqrt() * lmax;
    if umax > T::zero() {
        T::of(2.0) / (umax * lmax).max(T::epsilon())
    } else {
        T::infinity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_ops::synthesize_tangent;

    fn cfg(eps: f64) -> RunConfig<f64> {
        let mut c = RunConfig::new(15, eps);
        c.t_final = 0.2;
        c.dt = 0.005;
        c
    }

    #[test]
    fn init_is_deterministic_and_normalized() {
        let c = cfg(0.1);
        let a = init_state(&c).unwrap();
        let b = init_state(&c).unwrap();
        assert_eq!(a, b);
        assert!((a.energy().sqrt() - 1.0).abs() < 1e-10);
        for l in 0..=15 {
            let active = (2..=7).contains(&l);
            for m in -(l as i64)..=l as i64 {
                if !active {
                    assert_eq!(a.zeta.get(l, m), Complex::new(0.0, 0.0));
                }
            }
        }
        assert!(a.zeta.real_symmetry_defect() < 1e-15);
    }

    #[test]
    fn init_energy_matches_quadrature() {
        let a = init_state(&cfg(0.1)).unwrap();
        let g = GaussGrid::new(15).unwrap();
        let u = synthesize_tangent(&a.velocity(), &g).unwrap();
        assert!((u.norm_l2(&g).powi(2) - a.energy()).abs() < 1e-12);
    }

    #[test]
    fn zonal_flow_is_steady() {
        let c = cfg(0.05);
        let solver = SphereSolver::new(&c).unwrap();
        let mut s = init_state(&c).unwrap();
        s.zeta = s.zeta.zonal_part();
        let mut cur = s.clone();
        for _ in 0..10 {
            cur = solver.step(&cur, 0.01).unwrap();
        }
        assert!(cur.zeta.axpy(-1.0, &s.zeta).max_abs() < 1e-10);
        let ti = cur.time_integral();
        assert!(zonal_defect(&ti, 0.0) < 1e-9);
    }

    #[test]
    fn zonal_advection_terms_vanish() {
        let c = cfg(0.05);
        let solver = SphereSolver::new(&c).unwrap();
        let s = init_state(&c).unwrap();
        let n = solver.nonlinear_term(&s.zeta.zonal_part()).unwrap();
        assert!(n.max_abs() < 1e-12);
        for l in 0..=15 {
            assert_eq!(solver.rate(l, 0), Complex::new(0.0, 0.0));
        }
    }

    #[test]
    fn viscous_energy_never_increases() {
        let mut c = cfg(0.05);
        c.mu = 0.01;
        let out = run_accumulate(&c).unwrap();
        for w in out.history.windows(2) {
            assert!(w[1].energy <= w[0].energy * (1.0 + 1e-14));
        }
    }

    #[test]
    fn inviscid_energy_is_conserved() {
        let out = run_accumulate(&cfg(0.05)).unwrap();
        let e0 = out.history[0].energy;
        let e1 = out.history.last().unwrap().energy;
        assert!(((e1 - e0) / e0).abs() < 1e-6);
    }

    #[test]
    fn linear_flow_reparametrizes_with_epsilon() {
        // With advection off and μ = 0, ζ(t; cε) = ζ(t/c; ε) mode by mode.
        let mut a = cfg(0.1);
        a.nonlinear = false;
        a.lmax = 15;
        let mut b = a.clone();
        b.epsilon = 0.2;
        b.t_final = 0.4;
        b.dt = 0.01;
        let ra = run_accumulate(&a).unwrap();
        let rb = run_accumulate(&b).unwrap();
        assert!(ra.final_state.zeta.axpy(-1.0, &rb.final_state.zeta).max_abs() < 1e-12);
        // exact exponential oracle, including the time integral
        let z0 = init_state(&a).unwrap().zeta;
        let solver = SphereSolver::new(&a).unwrap();
        let t = 0.2;
        let ex = z0.map_lm(|l, m| (solver.rate(l, m) * t).exp());
        assert!(ra.final_state.zeta.axpy(-1.0, &ex).max_abs() < 1e-12);
        let int = z0.map_lm(|l, m| {
            let r = solver.rate(l, m);
            if r.norm() == 0.0 {
                Complex::new(t, 0.0)
            } else {
                ((r * t).exp() - 1.0) / r
            }
        });
        assert!(ra.final_state.accum.axpy(-1.0, &int).max_abs() < 1e-12);
    }

    #[test]
    fn zero_horizon_gives_zero_integral() {
        let mut c = cfg(0.1);
        c.t_final = 0.0;
        let out = run_accumulate(&c).unwrap();
        assert_eq!(out.time_integral.hodge_psi.max_abs(), 0.0);
        assert_eq!(out.history.len(), 1);
    }

    #[test]
    fn defect_bound_holds_along_run() {
        let out = run_accumulate(&cfg(0.05)).unwrap();
        for r in &out.history {
            assert!(r.zonal_defect <= r.lh_integral_norm + 1e-8);
        }
    }

    #[test]
    fn zonal_defect_examples() {
        let zonal = TangentField::rotational(SpectralScalar::<f64>::unit(6, 3, 0));
        assert!(zonal_defect(&zonal, -4.0) < 1e-15);
        let y11 = SpectralScalar::<f64>::unit(6, 1, 1).axpy(-1.0, &SpectralScalar::unit(6, 1, -1));
        let t = TangentField::rotational(y11);
        assert!((zonal_defect(&t, -4.0) - vector_sobolev_norm(&t, -4.0)).abs() < 1e-15);
    }

    #[test]
    fn zonal_defect_matches_grid_average_removal() {
        // Remove the longitude average on the grid, re-analyze, take the norm.
        use crate::sphere_ops::{hodge_decompose, GridTangent};
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let t = TangentField::<f64>::random_rotational(10, 1, 10, &mut rng);
        let g = GaussGrid::new(10).unwrap();
        let u = synthesize_tangent(&t, &g).unwrap();
        let nlon = g.nlon();
        let mut up = u.u_phi.clone();
        for j in 0..g.nlat() {
            let avg: f64 = up[j * nlon..(j + 1) * nlon].iter().sum::<f64>() / nlon as f64;
            for v in &mut up[j * nlon..(j + 1) * nlon] {
                *v -= avg;
            }
        }
        let rest = hodge_decompose(&GridTangent::new(&g, u.u_theta.clone(), up).unwrap(), &g).unwrap();
        let brute = vector_sobolev_norm(&rest, -2.0);
        assert!((zonal_defect(&t, -2.0) - brute).abs() < 1e-12 * brute);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = cfg(0.1);
        c.dt = 0.0;
        assert!(init_state(&c).is_err());
        let mut c = cfg(0.1);
        c.epsilon = -1.0;
        assert!(SphereSolver::new(&c).is_err());
    }

    #[test]
    fn oversized_step_is_reported() {
        let mut c = cfg(0.1);
        c.m0 = 400.0;
        let solver = SphereSolver::new(&c).unwrap();
        let s = init_state(&c).unwrap();
        let mut cur = s;
        let mut failed = false;
        for _ in 0..20 {
            match solver.step(&cur, 0.5) {
                Ok(n) => cur = n,
                Err(RotwaveError::NumericFailure { .. }) => {
                    failed = true;
                    break;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(failed);
    }
}
