use num_traits::{Float, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::norms::{hls_ratio, pad, sobolev_norm, w_inf_norm, w_p_norm};
use super::wave::{apply_wave_operator, WaveBasis};
use super::{
    axpy, curl_box, dz_box, kernel_excluded, kernel_part, project_leray_box, random_solenoidal, scale, BoxGrid,
    BoxVector, MhdState,
};
use crate::error::invalid;
use crate::expquad::quadratic_weights;
use crate::{Complex, Real, Result, RotwaveError};

#[derive(Debug, Clone)]
pub struct MhdConfig<T> {
    pub n: usize,
    pub epsilon: T,
    pub t_final: T,
    pub dt: T,
    pub seed: u64,
    /// Sobolev index of the initial-data bound.
    pub k: u32,
    /// `‖(u₀, b₀)‖_{H^k}`.
    pub m0: T,
    /// Exponent `s` of the `W^{k−4,s}` diagnostic.
    pub s: T,
    /// Initial data live on `max|ξ_i| ≤ k_init`.
    pub k_init: i64,
    pub nonlinear: bool,
    /// Optional `ν|ξ|⁸` damping, off by default.
    pub hyper_nu: Option<T>,
}

impl<T: Real> MhdConfig<T> {
    pub fn new(n: usize, epsilon: T) -> Self {
        Self {
            n,
            epsilon,
            t_final: T::one(),
            dt: T::of(0.01),
            seed: 0,
            k: 3,
            m0: T::one(),
            s: T::of(12.0),
            k_init: 4,
            nonlinear: true,
            hyper_nu: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 || self.n % 2 != 0 {
            return invalid(format!("n must be even and at least 4, got {}", self.n));
        }
        if !(self.epsilon > T::zero()) {
            return invalid("epsilon must be positive");
        }
        if !(self.dt > T::zero()) || !(self.t_final >= T::zero()) {
            return invalid("dt must be positive and t_final non-negative");
        }
        if !(self.m0 > T::zero()) || !(self.s > T::of(6.0)) {
            return invalid("m0 must be positive and s > 6");
        }
        if self.k < 1 {
            return invalid("k must be at least 1");
        }
        if self.k_init < 1 || self.k_init > ((self.n - 1) / 3) as i64 {
            return invalid(format!("k_init must lie in 1..={}", (self.n - 1) / 3));
        }
        if let Some(nu) = self.hyper_nu {
            if !(nu >= T::zero()) {
                return invalid("hyper_nu must be non-negative");
            }
        }
        Ok(())
    }
}

/// `(−P(ω×u − j×b), curl(u×b))`, two-thirds dealiased.
pub fn mhd_nonlinear<T: Real>(u: &BoxVector<T>, b: &BoxVector<T>, grid: &BoxGrid<T>) -> (BoxVector<T>, BoxVector<T>) {
    let w = curl_box(u, grid);
    let j = curl_box(b, grid);
    let phys = |v: &BoxVector<T>| -> [Vec<T>; 3] { std::array::from_fn(|d| grid.to_physical(&v[d])) };
    let (pu, pb, pw, pj) = (phys(u), phys(b), phys(&w), phys(&j));
    let n = grid.len();
    let mut f: [Vec<T>; 3] = std::array::from_fn(|_| vec![T::zero(); n]);
    let mut g: [Vec<T>; 3] = std::array::from_fn(|_| vec![T::zero(); n]);
    for q in 0..n {
        let at = |v: &[Vec<T>; 3]| [v[0][q], v[1][q], v[2][q]];
        let (uu, bb, ww, jj) = (at(&pu), at(&pb), at(&pw), at(&pj));
        let a = cross(ww, uu);
        let c = cross(jj, bb);
        let e = cross(uu, bb);
        for d in 0..3 {
            f[d][q] = a[d] - c[d];
            g[d][q] = e[d];
        }
    }
    let mut fh: BoxVector<T> = f.map(|c| grid.to_spectral(&c));
    let mut gh: BoxVector<T> = g.map(|c| grid.to_spectral(&c));
    dealias(&mut fh, grid);
    dealias(&mut gh, grid);
    (scale(&project_leray_box(&fh, grid), -T::one()), curl_box(&gh, grid))
}

fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dealias<T: Real>(v: &mut BoxVector<T>, grid: &BoxGrid<T>) {
    for q in 0..grid.len() {
        if !grid.is_resolved(q) {
            for c in v.iter_mut() {
                c[q] = Complex::zero();
            }
        }
    }
}

/// Full right-hand side `N(u, b) + 𝓛(u, b)/ε`.
pub fn mhd_rhs<T: Real>(s: &MhdState<T>, grid: &BoxGrid<T>) -> (BoxVector<T>, BoxVector<T>) {
    let (nu, nb) = mhd_nonlinear(&s.u_hat, &s.b_hat, grid);
    let (lu, lb) = apply_wave_operator(&s.u_hat, &s.b_hat, grid);
    let r = T::one() / s.epsilon;
    (axpy(&nu, r, &lu), axpy(&nb, r, &lb))
}

/// Integrating-factor RK4 for a fixed `(ε, dt)` with cached phases.
#[derive(Debug, Clone)]
pub struct MhdSolver<T: Real> {
    grid: BoxGrid<T>,
    basis: WaveBasis<T>,
    epsilon: T,
    dt: T,
    nonlinear: bool,
    damped: bool,
    half: Vec<[Complex<T>; 4]>,
    full: Vec<[Complex<T>; 4]>,
    weights: Vec<[[Complex<T>; 3]; 4]>,
}

impl<T: Real> MhdSolver<T> {
    pub fn new(grid: BoxGrid<T>, epsilon: T, dt: T, nonlinear: bool, hyper_nu: Option<T>) -> Result<Self> {
        if !(epsilon > T::zero()) || !(dt > T::zero()) {
            return invalid("epsilon and dt must be positive");
        }
        let basis = WaveBasis::new(&grid);
        let nu = hyper_nu.unwrap_or(T::zero());
        let n = grid.len();
        let mut half = vec![[Complex::zero(); 4]; n];
        let mut full = vec![[Complex::zero(); 4]; n];
        let mut weights = vec![[[Complex::zero(); 3]; 4]; n];
        for q in 0..n {
            let Some(m) = basis.mode(q) else { continue };
            let k = grid.xi_real(q);
            let damp = nu * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).powi(4);
            for (j, r) in m.rates().into_iter().enumerate() {
                let z = (r / epsilon - damp) * dt;
                half[q][j] = (z / T::of(2.0)).exp();
                full[q][j] = z.exp();
                weights[q][j] = quadratic_weights(z);
            }
        }
        Ok(Self { grid, basis, epsilon, dt, nonlinear, damped: nu > T::zero(), half, full, weights })
    }

    pub fn from_config(cfg: &MhdConfig<T>) -> Result<Self> {
        cfg.validate()?;
        Self::new(BoxGrid::new(cfg.n)?, cfg.epsilon, cfg.dt, cfg.nonlinear, cfg.hyper_nu)
    }

    pub fn grid(&self) -> &BoxGrid<T> {
        &self.grid
    }

    pub fn basis(&self) -> &WaveBasis<T> {
        &self.basis
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    fn propagate(&self, u: &BoxVector<T>, b: &BoxVector<T>, full: bool) -> (BoxVector<T>, BoxVector<T>) {
        let ph = if full { &self.full } else { &self.half };
        self.basis.apply(u, b, |q, j, c| c * ph[q][j])
    }

    fn nonlinear(&self, u: &BoxVector<T>, b: &BoxVector<T>) -> (BoxVector<T>, BoxVector<T>) {
        if self.nonlinear {
            mhd_nonlinear(u, b, &self.grid)
        } else {
            (self.grid.zeros(), self.grid.zeros())
        }
    }

    pub fn step(&self, s: &MhdState<T>) -> Result<MhdState<T>> {
        if Float::abs(s.epsilon - self.epsilon) > T::epsilon() * self.epsilon {
            return invalid("state epsilon differs from solver epsilon");
        }
        let h = self.dt;
        let hh = h / T::of(2.0);
        let y0 = (&s.u_hat, &s.b_hat);
        let add = |x: &(BoxVector<T>, BoxVector<T>), a: T, y: &(BoxVector<T>, BoxVector<T>)| {
            (axpy(&x.0, a, &y.0), axpy(&x.1, a, &y.1))
        };
        let y0o = (s.u_hat.clone(), s.b_hat.clone());
        let k1 = self.nonlinear(y0.0, y0.1);
        let t = add(&y0o, hh, &k1);
        let a = self.propagate(&t.0, &t.1, false);
        let k2 = self.nonlinear(&a.0, &a.1);
        let e_half_y0 = self.propagate(y0.0, y0.1, false);
        let bst = add(&e_half_y0, hh, &k2);
        let k3 = self.nonlinear(&bst.0, &bst.1);
        let e_full_y0 = self.propagate(y0.0, y0.1, true);
        let ek3 = self.propagate(&k3.0, &k3.1, false);
        let c = add(&e_full_y0, h, &ek3);
        let k4 = self.nonlinear(&c.0, &c.1);
        let ek1 = self.propagate(&k1.0, &k1.1, true);
        let k23 = add(&k2, T::one(), &k3);
        let ek23 = self.propagate(&k23.0, &k23.1, false);
        let incr = add(&add(&ek1, T::of(2.0), &ek23), T::one(), &k4);
        let y1 = add(&e_full_y0, h / T::of(6.0), &incr);

        let mid = add(&scale_pair(&a, T::of(0.5)), T::of(0.5), &bst);
        let mut acc_u = s.accum_u.clone();
        let mut acc_b = s.accum_b.clone();
        for q in 0..self.grid.len() {
            let Some(m) = self.basis.mode(q) else { continue };
            let at = |p: &(BoxVector<T>, BoxVector<T>)| {
                m.coords([p.0[0][q], p.0[1][q], p.0[2][q]], [p.1[0][q], p.1[1][q], p.1[2][q]])
            };
            let (c0, cm, c1) = (at(&y0o), at(&mid), at(&y1));
            let w = &self.weights[q];
            let inc: [Complex<T>; 4] = std::array::from_fn(|j| (w[j][0] * c0[j] + w[j][1] * cm[j] + w[j][2] * c1[j]) * h);
            let (du, db) = m.reconstruct(&inc);
            for d in 0..3 {
                acc_u[d][q] += du[d];
                acc_b[d][q] += db[d];
            }
        }

        let next = MhdState {
            u_hat: y1.0,
            b_hat: y1.1,
            epsilon: s.epsilon,
            t: s.t + h,
            accum_u: acc_u,
            accum_b: acc_b,
        };
        let e0 = s.energy(&self.grid);
        let e1 = next.energy(&self.grid);
        if !e1.is_finite() {
            return Err(RotwaveError::NumericFailure { time: next.t.f64(), detail: "non-finite state".into() });
        }
        if !self.damped && e1 > e0 * T::of(1.1) {
            return Err(RotwaveError::NumericFailure {
                time: next.t.f64(),
                detail: format!("energy grew from {e0} to {e1} in one step; reduce dt"),
            });
        }
        Ok(next)
    }
}

fn scale_pair<T: Real>(p: &(BoxVector<T>, BoxVector<T>), a: T) -> (BoxVector<T>, BoxVector<T>) {
    (scale(&p.0, a), scale(&p.1, a))
}

/// Seeded initial state with `‖(u₀, b₀)‖_{H^k} = M₀`.
pub fn initial_state<T: Real>(cfg: &MhdConfig<T>, grid: &BoxGrid<T>) -> Result<MhdState<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let u = random_solenoidal(grid, cfg.k_init, &mut rng);
    let b = random_solenoidal(grid, cfg.k_init, &mut rng);
    let k = T::of_usize(cfg.k as usize);
    let nu = sobolev_norm(&u, k, grid);
    let nb = sobolev_norm(&b, k, grid);
    let f = cfg.m0 / (nu * nu + nb * nb).sqrt();
    MhdState::new(scale(&u, f), scale(&b, f), cfg.epsilon, grid)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MhdRecord {
    pub epsilon: f64,
    pub t: f64,
    pub steps: usize,
    /// `‖∫𝓛(u, b)dt‖_{H^{k−1}}`
    pub wave_defect: f64,
    /// `‖∂_z∫u‖_{H^{k−1}}`
    pub dz_u: f64,
    /// `‖∂_z curl∫b‖_{H^{k−2}}`
    pub dz_curl_b: f64,
    /// `W^{k−3,∞}` of the `ξ₃ ≠ 0` part of `∫u`.
    pub u_winf: f64,
    /// `W^{max(k−4,0),s}` of the `ξ₃ ≠ 0` part of `∫b`.
    pub b_ws: f64,
    pub u_kernel_winf: f64,
    pub b_kernel_ws: f64,
    /// `L²` norm of the `ξ₃ = 0` part of `(∫u, ∫b)`.
    pub kernel_l2: f64,
    pub hls_ratio: f64,
    pub energy_initial: f64,
    pub energy_final: f64,
}

#[derive(Debug, Clone)]
pub struct MhdRun<T: Real> {
    pub record: MhdRecord,
    pub final_state: MhdState<T>,
}

impl<T: Real> MhdRun<T> {
    pub fn time_integral_u(&self) -> &BoxVector<T> {
        &self.final_state.accum_u
    }

    pub fn time_integral_b(&self) -> &BoxVector<T> {
        &self.final_state.accum_b
    }
}

pub fn run_mhd<T: Real>(cfg: &MhdConfig<T>) -> Result<MhdRun<T>> {
    let solver = MhdSolver::from_config(cfg)?;
    let grid = solver.grid().clone();
    let s0 = initial_state(cfg, &grid)?;
    let steps = (cfg.t_final / cfg.dt).round().to_usize().unwrap_or(0);
    if Float::abs(T::of_usize(steps) * cfg.dt - cfg.t_final) > T::of(1e-9) * T::one().max(cfg.t_final) {
        return invalid("t_final must be a whole number of steps");
    }
    let e0 = s0.energy(&grid);
    let mut s = s0;
    for _ in 0..steps {
        s = solver.step(&s)?;
    }
    let record = diagnostics(&s, cfg, &grid, steps, e0);
    Ok(MhdRun { record, final_state: s })
}

fn diagnostics<T: Real>(s: &MhdState<T>, cfg: &MhdConfig<T>, grid: &BoxGrid<T>, steps: usize, e0: T) -> MhdRecord {
    let k = cfg.k as i64;
    let kt = |x: i64| T::of_i64(x);
    let (iu, ib) = (&s.accum_u, &s.accum_b);
    let (lu, lb) = apply_wave_operator(iu, ib, grid);
    let pair = |a: T, b: T| (a * a + b * b).sqrt().f64();
    let fine = BoxGrid::<T>::new(2 * grid.n()).expect("doubled grid");
    let up = |v: &BoxVector<T>| pad(v, grid, &fine);
    let m_inf = (k - 3).max(0) as u32;
    let m_s = (k - 4).max(0) as u32;
    let iu_x = up(&kernel_excluded(iu, grid));
    let ib_x = up(&kernel_excluded(ib, grid));
    let curl_ib = up(&curl_box(&kernel_excluded(ib, grid), grid));
    MhdRecord {
        epsilon: cfg.epsilon.f64(),
        t: s.t.f64(),
        steps,
        wave_defect: pair(sobolev_norm(&lu, kt(k - 1), grid), sobolev_norm(&lb, kt(k - 1), grid)),
        dz_u: sobolev_norm(&dz_box(iu, grid), kt(k - 1), grid).f64(),
        dz_curl_b: sobolev_norm(&dz_box(&curl_box(ib, grid), grid), kt(k - 2), grid).f64(),
        u_winf: w_inf_norm(&iu_x, m_inf, &fine).f64(),
        b_ws: w_p_norm(&ib_x, m_s, cfg.s, &fine).f64(),
        u_kernel_winf: w_inf_norm(&up(&kernel_part(iu, grid)), m_inf, &fine).f64(),
        b_kernel_ws: w_p_norm(&up(&kernel_part(ib, grid)), m_s, cfg.s, &fine).f64(),
        kernel_l2: {
            let (a, b) = (grid.norm_l2(&kernel_part(iu, grid)), grid.norm_l2(&kernel_part(ib, grid)));
            pair(a, b)
        },
        hls_ratio: hls_ratio(&ib_x, &curl_ib, cfg.s, &fine).f64(),
        energy_initial: e0.f64(),
        energy_final: s.energy(grid).f64(),
    }
}
