use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rotwave_core::mhd::{run_mhd, MhdConfig};
use rotwave_core::sphere_solver::{run_accumulate, RunConfig};

use crate::config::{effective_parallelism, Experiment, MhdParams, SphereParams, SweepConfig};
use crate::error::{HarnessError, Result};
use crate::fit::{fit_slope, Fit};

/// Slack in the pointwise defect bound.
pub const BOUND_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereRow {
    pub epsilon: f64,
    pub t_final: f64,
    pub mu: f64,
    pub m0: f64,
    pub alpha: f64,
    pub zonal_defect: f64,
    pub lh_integral_norm: f64,
    pub energy_initial: f64,
    pub energy_final: f64,
    /// Output times where `zonal_defect > lh_integral_norm + BOUND_SLACK`.
    pub bound_violations: usize,
    pub bound_checks: usize,
    pub grad_time_integral: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MhdRow {
    pub epsilon: f64,
    pub t_final: f64,
    pub k: u32,
    pub s: f64,
    pub wave_defect: f64,
    pub dz_u: f64,
    pub dz_curl_b: f64,
    pub u_int_winf: f64,
    pub b_int_ws: f64,
    pub u_kernel_winf: f64,
    pub b_kernel_ws: f64,
    pub kernel_l2: f64,
    pub hls_ratio: f64,
    pub energy_initial: f64,
    pub energy_final: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "rows", rename_all = "lowercase")]
pub enum Rows {
    Sphere(Vec<SphereRow>),
    Mhd(Vec<MhdRow>),
}

impl Rows {
    pub fn len(&self) -> usize {
        match self {
            Rows::Sphere(r) => r.len(),
            Rows::Mhd(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(ε, primary defect)` per row.
    pub fn primary(&self) -> Vec<(f64, f64)> {
        match self {
            Rows::Sphere(r) => r.iter().map(|x| (x.epsilon, x.zonal_defect)).collect(),
            Rows::Mhd(r) => r.iter().map(|x| (x.epsilon, x.wave_defect)).collect(),
        }
    }

    pub fn primary_name(&self) -> &'static str {
        match self {
            Rows::Sphere(_) => "zonal_defect",
            Rows::Mhd(_) => "wave_defect_Hk1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedFit {
    pub quantity: String,
    pub fit: Fit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub epsilon: f64,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Successful members, descending in `ε`.
    pub rows: Rows,
    /// Fit of the primary defect; absent when any member failed.
    pub fit: Option<Fit>,
    pub secondary: Vec<NamedFit>,
    pub failures: Vec<Failure>,
}

impl SweepResult {
    pub fn partial(&self) -> bool {
        !self.failures.is_empty()
    }

    pub fn secondary_fit(&self, quantity: &str) -> Option<&Fit> {
        self.secondary.iter().find(|f| f.quantity == quantity).map(|f| &f.fit)
    }
}

fn elapsed_ms(t: Instant, record: bool) -> f64 {
    if record { t.elapsed().as_secs_f64() * 1e3 } else { 0.0 }
}

pub fn sphere_member(p: &SphereParams, epsilon: f64, record_timing: bool) -> Result<SphereRow> {
    let t0 = Instant::now();
    let mut c = RunConfig::new(p.lmax, epsilon);
    c.t_final = p.t_final;
    c.dt = p.dt;
    c.mu = p.mu;
    c.m0 = p.m0;
    c.seed = p.seed;
    c.alpha = p.alpha;
    c.nonlinear = p.nonlinear;
    let out = run_accumulate(&c)?;
    let last = out.history.last().expect("history holds the initial record");
    let violations = out.history.iter().filter(|r| r.zonal_defect > r.lh_integral_norm + BOUND_SLACK).count();
    Ok(SphereRow {
        epsilon,
        t_final: p.t_final,
        mu: p.mu,
        m0: p.m0,
        alpha: p.alpha,
        zonal_defect: last.zonal_defect,
        lh_integral_norm: last.lh_integral_norm,
        energy_initial: out.history[0].energy,
        energy_final: last.energy,
        bound_violations: violations,
        bound_checks: out.history.len(),
        grad_time_integral: out.grad_time_integral,
        wall_ms: elapsed_ms(t0, record_timing),
    })
}

pub fn mhd_member(p: &MhdParams, epsilon: f64, record_timing: bool) -> Result<MhdRow> {
    let t0 = Instant::now();
    let mut c = MhdConfig::new(p.n, epsilon);
    c.t_final = p.t_final;
    c.dt = p.dt;
    c.seed = p.seed;
    c.k = p.k;
    c.m0 = p.m0;
    c.s = p.s;
    c.k_init = p.k_init;
    c.nonlinear = p.nonlinear;
    c.hyper_nu = p.hyper_nu;
    let r = run_mhd(&c)?.record;
    Ok(MhdRow {
        epsilon,
        t_final: p.t_final,
        k: p.k,
        s: p.s,
        wave_defect: r.wave_defect,
        dz_u: r.dz_u,
        dz_curl_b: r.dz_curl_b,
        u_int_winf: r.u_winf,
        b_int_ws: r.b_ws,
        u_kernel_winf: r.u_kernel_winf,
        b_kernel_ws: r.b_kernel_ws,
        kernel_l2: r.kernel_l2,
        hls_ratio: r.hls_ratio,
        energy_initial: r.energy_initial,
        energy_final: r.energy_final,
        wall_ms: elapsed_ms(t0, record_timing),
    })
}

fn run_members<R: Send>(
    eps: &[f64],
    threads: usize,
    f: impl Fn(f64) -> Result<R> + Sync + Send,
) -> Result<Vec<(f64, Result<R>)>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| eps.par_iter().map(|&e| (e, f(e))).collect()))
}

fn split<R>(results: Vec<(f64, Result<R>)>) -> (Vec<R>, Vec<Failure>) {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (epsilon, r) in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                log::error!("member eps = {epsilon} failed: {e}");
                failures.push(Failure { epsilon, message: e.to_string(), exit_code: e.exit_code() });
            }
        }
    }
    (rows, failures)
}

fn fits(pairs: &[(&str, Vec<(f64, f64)>)], complete: bool) -> Result<(Option<Fit>, Vec<NamedFit>)> {
    if !complete {
        return Ok((None, Vec::new()));
    }
    let primary = fit_slope(&pairs[0].1)?;
    let mut secondary = Vec::new();
    for (name, pts) in &pairs[1..] {
        match fit_slope(pts) {
            Ok(fit) => secondary.push(NamedFit { quantity: name.to_string(), fit }),
            Err(e) => log::warn!("no fit for {name}: {e}"),
        }
    }
    Ok((Some(primary), secondary))
}

/// Run every `ε` member and fit the defect slopes. Rows come back in
/// descending `ε` whatever the scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    let threads = effective_parallelism(cfg.parallelism)?;
    let timing = cfg.record_timing;
    match cfg.experiment {
        Experiment::Sphere => {
            let p = cfg.sphere.as_ref().ok_or_else(|| HarnessError::Config("sphere: section required".into()))?;
            let (rows, failures) = split(run_members(&cfg.epsilons, threads, |e| sphere_member(p, e, timing))?);
            let pts = |f: fn(&SphereRow) -> f64| rows.iter().map(|r| (r.epsilon, f(r))).collect::<Vec<_>>();
            let (fit, secondary) = fits(
                &[("zonal_defect", pts(|r| r.zonal_defect)), ("Lh_integral_norm", pts(|r| r.lh_integral_norm))],
                failures.is_empty(),
            )?;
            Ok(SweepResult { rows: Rows::Sphere(rows), fit, secondary, failures })
        }
        Experiment::Mhd => {
            let p = cfg.mhd.as_ref().ok_or_else(|| HarnessError::Config("mhd: section required".into()))?;
            let (rows, failures) = split(run_members(&cfg.epsilons, threads, |e| mhd_member(p, e, timing))?);
            let pts = |f: fn(&MhdRow) -> f64| rows.iter().map(|r| (r.epsilon, f(r))).collect::<Vec<_>>();
            let (fit, secondary) = fits(
                &[
                    ("wave_defect_Hk1", pts(|r| r.wave_defect)),
                    ("u_int_Winf", pts(|r| r.u_int_winf)),
                    ("b_int_Wks", pts(|r| r.b_int_ws)),
                    ("dzu_Hk1", pts(|r| r.dz_u)),
                ],
                failures.is_empty(),
            )?;
            Ok(SweepResult { rows: Rows::Mhd(rows), fit, secondary, failures })
        }
        other => Err(HarnessError::Config(format!("experiment {other:?} is not a sweep"))),
    }
}
