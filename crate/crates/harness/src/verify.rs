//! Operator property suite behind `rotwave verify`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rotwave_core::mhd::{
    self, apply_wave_operator, kernel_part, project_leray_box, random_solenoidal, BoxGrid, MhdSolver, MhdState,
};
use rotwave_core::mhd::nash::{anisotropic_norm_checks, gaussian_nash_ratio, standard_corpus};
use rotwave_core::shell::fields::{navier_family, random_smooth, rigid_rotation};
use rotwave_core::shell::{navier_traction, shell_leray_project, ShellGeometry, Side};
use rotwave_core::sphere_ops::{
    apply_lh, hodge_decompose, leray_part, nonzonal_part, synthesize_tangent, vector_sobolev_norm, zonal_part,
    TangentField,
};
use rotwave_core::sphere_solver::{run_accumulate, RunConfig};
use rotwave_core::spharm::{analyze, laplace_beltrami, scalar_sobolev_norm, synthesize, GaussGrid, SpectralScalar};
use rotwave_core::Complex;

use crate::config::MODULES;
use crate::error::{HarnessError, Result};
use crate::fit::fit_slope;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub module: String,
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value <= limit`.
    pub fn at_most(module: &str, name: &str, value: f64, limit: f64) -> Self {
        Self { module: module.into(), name: name.into(), value, limit, passed: value <= limit }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {:<14} {:<44} {:>12.4e} (limit {:.1e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.module,
            self.name,
            self.value,
            self.limit
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `Ok` when every check passed, else an assertion error naming the failures.
    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            return Ok(self);
        }
        let failed: Vec<_> = self.checks.iter().filter(|c| !c.passed).map(|c| format!("{}/{}", c.module, c.name)).collect();
        Err(HarnessError::Assertion(format!("{} failed: {}", failed.len(), failed.join(", "))))
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn spharm_checks(seed: u64) -> Result<Vec<Check>> {
    const M: &str = "spharm";
    let mut r = rng(seed);
    let lmax = 31;
    let g = GaussGrid::<f64>::new(lmax)?;
    let mut round = 0.0f64;
    let mut parseval = 0.0f64;
    for _ in 0..4 {
        let c = SpectralScalar::random_real(lmax, 0, lmax, &mut r);
        let f = synthesize(&c, &g)?;
        round = round.max(analyze(&f, &g)?.axpy(-1.0, &c).max_abs());
        let sq: Vec<f64> = f.values().iter().map(|v| v * v).collect();
        let spec = c.norm_l2().powi(2);
        parseval = parseval.max((g.integrate(&sq) - spec).abs() / spec);
    }
    let mut eq = 0.0f64;
    let mut ineq = 0usize;
    for alpha in [-4.0, -1.5, 0.0, 2.5] {
        let c = SpectralScalar::<f64>::random_real(15, 1, 15, &mut r);
        let d = SpectralScalar::<f64>::random_real(15, 1, 15, &mut r);
        let rhs = scalar_sobolev_norm(&c, alpha)? * scalar_sobolev_norm(&d, -alpha)?;
        if c.inner(&d).norm() > rhs * (1.0 + 1e-12) {
            ineq += 1;
        }
        let e = c.map_lm(|l, _| Complex::new(if l == 0 { 0.0 } else { ((l * l + l) as f64).powf(alpha) }, 0.0));
        let rhs = scalar_sobolev_norm(&c, alpha)? * scalar_sobolev_norm(&e, -alpha)?;
        eq = eq.max((c.inner(&e).norm() - rhs).abs() / rhs);
    }
    let a = SpectralScalar::<f64>::random_real(20, 0, 20, &mut r);
    let b = SpectralScalar::<f64>::random_real(20, 0, 20, &mut r);
    let x = laplace_beltrami(&a).inner(&b);
    let y = a.inner(&laplace_beltrami(&b));
    Ok(vec![
        Check::at_most(M, "sht_round_trip_lmax31", round, 1e-10),
        Check::at_most(M, "parseval_lmax31", parseval, 1e-10),
        Check::at_most(M, "duality_equality_case", eq, 1e-10),
        Check::at_most(M, "duality_inequality_violations", ineq as f64, 0.0),
        Check::at_most(M, "laplace_self_adjoint", (x - y).norm() / (1.0 + x.norm()), 1e-10),
        Check::at_most(M, "laplace_nonpositive", laplace_beltrami(&a).inner(&a).re.max(0.0), 1e-12),
    ])
}

fn sphere_ops_checks(seed: u64) -> Result<Vec<Check>> {
    const M: &str = "sphere_ops";
    let mut r = rng(seed ^ 0x5eed);
    let lmax = 15;
    let g = GaussGrid::<f64>::new(lmax + 1)?;
    let mut skew = 0.0f64;
    let mut bound = 0usize;
    let mut idem = 0.0f64;
    let mut orth = 0.0f64;
    let mut grad = 0.0f64;
    for _ in 0..10 {
        let u = TangentField::<f64>::random_rotational(lmax, 1, lmax, &mut r);
        let v = TangentField::<f64>::random_rotational(lmax, 1, lmax, &mut r);
        let lu = apply_lh(&u, &g)?;
        let a = lu.inner(&v);
        let b = u.inner(&apply_lh(&v, &g)?);
        skew = skew.max((a + b).norm() / (u.inner(&u).norm() * v.inner(&v).norm()).sqrt());
        for alpha in [-4.5, -2.0, 0.0] {
            if vector_sobolev_norm(&nonzonal_part(&u), alpha) > vector_sobolev_norm(&lu, alpha + 2.0) + 1e-9 {
                bound += 1;
            }
        }
        let w = TangentField::<f64>::random(lmax, 1, lmax, &mut r);
        let p = zonal_part(&w);
        idem = idem.max(zonal_part(&p).axpy(-1.0, &p).hodge_psi.max_abs());
        let pg = synthesize_tangent(&p, &g)?;
        let rest = synthesize_tangent(&w, &g)?.axpy(-1.0, &pg);
        orth = orth.max(pg.inner(&rest, &g).abs() / w.inner(&w).norm());
        let f = SpectralScalar::<f64>::random_real(lmax, 1, lmax, &mut r);
        let gf = synthesize_tangent(&TangentField::gradient(f), &g)?;
        grad = grad.max(synthesize_tangent(&leray_part(&hodge_decompose(&gf, &g)?), &g)?.norm_l2(&g));
    }
    // zonal stream functions are annihilated
    let z = TangentField::rotational(SpectralScalar::<f64>::random_real(lmax, 1, lmax, &mut r).zonal_part());
    let kern = apply_lh(&z, &g)?.hodge_psi.max_abs();
    Ok(vec![
        Check::at_most(M, "lh_skew", skew, 1e-10),
        Check::at_most(M, "defect_bound_violations", bound as f64, 0.0),
        Check::at_most(M, "zonal_projector_idempotent", idem, 1e-14),
        Check::at_most(M, "zonal_projector_orthogonal", orth, 1e-10),
        Check::at_most(M, "lh_annihilates_zonal_flow", kern, 1e-12),
        Check::at_most(M, "leray_kills_gradients", grad, 1e-10),
    ])
}

fn shell_checks(seed: u64) -> Result<Vec<Check>> {
    const M: &str = "shell";
    let mut r = rng(seed ^ 0x5e11);
    let g = ShellGeometry::<f64>::new(0.25, 48, 15)?;
    let u = random_smooth(&g, 10, &mut r)?;
    let p = shell_leray_project(&u, &g)?;
    let pp = shell_leray_project(&p, &g)?;
    let idem = pp.axpy(-1.0, &p).norm_l2(&g) / p.norm_l2(&g);
    let nf = navier_family(&g, 8, &mut r)?;
    let fixed = shell_leray_project(&nf, &g)?.axpy(-1.0, &nf).norm_l2(&g) / nf.norm_l2(&g);
    let small = ShellGeometry::<f64>::new(0.25, 8, 4)?;
    let rot = rigid_rotation(&small);
    let mut rigid = 0.0f64;
    for side in [Side::Inner, Side::Outer] {
        let t = navier_traction(&rot, side, &small)?;
        rigid = max_of([rigid, t.direct.max_abs(), t.form_a.max_abs(), t.form_b.max_abs()]);
    }
    Ok(vec![
        Check::at_most(M, "leray_idempotent", idem, 1e-7),
        Check::at_most(M, "leray_fixes_solenoidal_navier_field", fixed, 1e-7),
        Check::at_most(M, "rigid_rotation_traction", rigid, 1e-10),
    ])
}

fn sphere_solver_checks(seed: u64) -> Result<Vec<Check>> {
    const M: &str = "sphere_solver";
    let mut c = RunConfig::<f64>::new(15, 0.05);
    c.seed = seed;
    let out = run_accumulate(&c)?;
    let e0 = out.history[0].energy;
    let drift = (out.history.last().map_or(e0, |h| h.energy) - e0).abs() / e0;
    let bound = out.history.iter().filter(|h| h.zonal_defect > h.lh_integral_norm + 1e-8).count();
    c.mu = 0.01;
    let visc = run_accumulate(&c)?;
    let up = visc.history.windows(2).filter(|w| w[1].energy > w[0].energy * (1.0 + 1e-14)).count();
    let budget = visc.history[0].energy / c.mu;
    Ok(vec![
        Check::at_most(M, "inviscid_energy_drift", drift, 1e-6),
        Check::at_most(M, "defect_bound_violations", bound as f64, 0.0),
        Check::at_most(M, "viscous_energy_increases", up as f64, 0.0),
        Check::at_most(M, "gradient_integral_over_budget", visc.grad_time_integral / budget, 1.0),
    ])
}

fn mhd_checks(seed: u64) -> Result<Vec<Check>> {
    const M: &str = "mhd";
    let mut r = rng(seed ^ 0x3d);
    let g = BoxGrid::<f64>::new(8)?;
    let mut idem = 0.0f64;
    let mut skew = 0.0f64;
    let mut kernel = 0usize;
    let mut iso = 0.0f64;
    for trial in 0..6 {
        let v = random_solenoidal(&g, 3, &mut r);
        let w = mhd::axpy(&v, 1.0, &mhd::curl_box(&v, &g));
        let w = mhd::axpy(&w, 1.0, &mhd::dz_box(&w, &g));
        let p = project_leray_box(&w, &g);
        idem = idem.max(mhd::max_abs(&mhd::axpy(&project_leray_box(&p, &g), -1.0, &p)));

        let u = random_solenoidal(&g, 3, &mut r);
        let b = if trial % 2 == 0 { random_solenoidal(&g, 3, &mut r) } else { g.zeros() };
        let (lu, lb) = apply_wave_operator(&u, &b, &g);
        let e = g.norm_l2(&u).powi(2) + g.norm_l2(&b).powi(2);
        skew = skew.max((g.inner(&lu, &u) + g.inner(&lb, &b)).re.abs() / e);
        // 𝓛 vanishes on a mode iff the mode has ξ₃ = 0 or is empty
        for q in 0..g.len() {
            let input = (0..3).any(|c| u[c][q] != Complex::ZERO || b[c][q] != Complex::ZERO);
            let output = (0..3).any(|c| lu[c][q] != Complex::ZERO || lb[c][q] != Complex::ZERO);
            if output != (input && g.xi(q)[2] != 0) {
                kernel += 1;
            }
        }
        let (ku, kb) = apply_wave_operator(&kernel_part(&u, &g), &kernel_part(&b, &g), &g);
        if mhd::max_abs(&ku) + mhd::max_abs(&kb) != 0.0 {
            kernel += 1;
        }

        let s = MhdState::new(u, b, 0.05, &g)?;
        let solver = MhdSolver::new(g.clone(), 0.05, 0.01, false, None)?;
        let s1 = solver.step(&s)?;
        iso = iso.max(((s1.energy(&g) - s.energy(&g)) / s.energy(&g)).abs());
    }
    let grid16 = BoxGrid::<f64>::new(16)?;
    let nash = anisotropic_norm_checks(&standard_corpus(&grid16, seed), 1, 2.0, &grid16)?;
    let gauss = gaussian_nash_ratio(12.0f64, 512);
    Ok(vec![
        Check::at_most(M, "leray_idempotent", idem, 1e-13),
        Check::at_most(M, "wave_operator_skew", skew, 1e-10),
        Check::at_most(M, "kernel_characterization_mismatches", kernel as f64, 0.0),
        Check::at_most(M, "linear_step_energy_change", iso, 1e-12),
        Check::at_most(M, "nash_corpus_max_ratio", nash.max_nash(), 2.0),
        Check::at_most(M, "anisotropic_corpus_max_ratio", nash.max_lemma(), 2.0),
        Check::at_most(M, "gaussian_nash_ratio_offset", (gauss - 0.798).abs(), 0.01),
    ])
}

fn harness_checks(seed: u64) -> Result<Vec<Check>> {
    const M: &str = "harness";
    use rand::Rng;
    let mut r = rng(seed ^ 0xfa);
    let line: Vec<(f64, f64)> = [0.1, 0.05, 0.025, 0.0125].iter().map(|&x| (x, 3.0 * x)).collect();
    let f = fit_slope(&line)?;
    let mut scale = 0.0f64;
    for _ in 0..20 {
        let pts: Vec<(f64, f64)> = (0..5).map(|_| (r.random_range(0.01..1.0), r.random_range(0.01..1.0))).collect();
        let (a, b) = (r.random_range(0.1..10.0), r.random_range(0.1..10.0));
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (a * x, b * y)).collect();
        scale = scale.max((fit_slope(&pts)?.slope - fit_slope(&scaled)?.slope).abs());
    }
    Ok(vec![
        Check::at_most(M, "fit_exact_line_slope_error", (f.slope - 1.0).abs(), 1e-12),
        Check::at_most(M, "fit_exact_line_r2_error", 1.0 - f.r_squared, 1e-12),
        Check::at_most(M, "fit_scale_invariance", scale, 1e-10),
    ])
}

/// Run the suite for one module (or all of them).
pub fn run_verify(module: Option<&str>, seed: u64) -> Result<Report> {
    if let Some(m) = module {
        if !MODULES.contains(&m) {
            return Err(HarnessError::Config(format!("module: unknown module {m:?}; expected one of {MODULES:?}")));
        }
    }
    let mut report = Report::default();
    for &m in MODULES.iter().filter(|m| module.is_none_or(|x| x == **m)) {
        log::info!("verifying {m}");
        let checks = match m {
            "spharm" => spharm_checks(seed)?,
            "sphere_ops" => sphere_ops_checks(seed)?,
            "shell" => shell_checks(seed)?,
            "sphere_solver" => sphere_solver_checks(seed)?,
            "mhd" => mhd_checks(seed)?,
            _ => harness_checks(seed)?,
        };
        report.checks.extend(checks);
    }
    Ok(report)
}
