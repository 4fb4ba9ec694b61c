use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Sphere,
    Mhd,
    Verify,
    Identities,
}

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereParams {
    pub lmax: usize,
    #[serde(default = "one")]
    pub t_final: f64,
    #[serde(default = "sphere_dt")]
    pub dt: f64,
    #[serde(default)]
    pub mu: f64,
    #[serde(default = "one")]
    pub m0: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "sphere_alpha")]
    pub alpha: f64,
    #[serde(default = "yes")]
    pub nonlinear: bool,
}

fn sphere_dt() -> f64 {
    0.005
}
fn sphere_alpha() -> f64 {
    -4.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MhdParams {
    pub n: usize,
    #[serde(default = "one")]
    pub t_final: f64,
    #[serde(default = "mhd_dt")]
    pub dt: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "mhd_k")]
    pub k: u32,
    #[serde(default = "one")]
    pub m0: f64,
    #[serde(default = "mhd_s")]
    pub s: f64,
    #[serde(default = "mhd_k_init")]
    pub k_init: i64,
    #[serde(default = "yes")]
    pub nonlinear: bool,
    #[serde(default)]
    pub hyper_nu: Option<f64>,
}

fn mhd_dt() -> f64 {
    0.01
}
fn mhd_k() -> u32 {
    3
}
fn mhd_s() -> f64 {
    12.0
}
fn mhd_k_init() -> i64 {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityParams {
    #[serde(default = "id_delta")]
    pub delta: f64,
    #[serde(default = "id_nr")]
    pub nr: usize,
    #[serde(default = "id_lmax")]
    pub lmax: usize,
    /// Random fields in the commutation check.
    #[serde(default = "id_fields")]
    pub fields: usize,
    /// Angular band of the random fields.
    #[serde(default = "id_lhi")]
    pub lhi: usize,
    #[serde(default = "id_viscosity_nr")]
    pub viscosity_nr: usize,
    #[serde(default = "id_lifting_cases")]
    pub lifting_cases: usize,
    #[serde(default)]
    pub seed: u64,
}

fn id_delta() -> f64 {
    0.25
}
fn id_nr() -> usize {
    48
}
fn id_lmax() -> usize {
    15
}
fn id_fields() -> usize {
    50
}
fn id_lhi() -> usize {
    10
}
fn id_viscosity_nr() -> usize {
    64
}
fn id_lifting_cases() -> usize {
    20
}

impl Default for IdentityParams {
    fn default() -> Self {
        toml::from_str("").expect("all identity fields have defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: Experiment,
    #[serde(default)]
    epsilons: Vec<f64>,
    #[serde(default)]
    output_dir: Option<PathBuf>,
    #[serde(default)]
    parallelism: Option<usize>,
    #[serde(default)]
    record_timing: bool,
    #[serde(default)]
    module: Option<String>,
    #[serde(default)]
    sphere: Option<SphereParams>,
    #[serde(default)]
    mhd: Option<MhdParams>,
    #[serde(default)]
    identities: Option<IdentityParams>,
}

/// A validated experiment description with defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub experiment: Experiment,
    /// Distinct, positive, descending.
    pub epsilons: Vec<f64>,
    pub output_dir: PathBuf,
    pub parallelism: usize,
    /// Write measured wall times; off keeps outputs byte-identical across runs.
    pub record_timing: bool,
    pub module: Option<String>,
    pub sphere: Option<SphereParams>,
    pub mhd: Option<MhdParams>,
    pub identities: Option<IdentityParams>,
}

pub const MODULES: [&str; 6] = ["spharm", "sphere_ops", "shell", "sphere_solver", "mhd", "harness"];

fn bad(field: &str, msg: impl std::fmt::Display) -> HarnessError {
    HarnessError::Config(format!("{field}: {msg}"))
}

pub fn load_config(path: &Path) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let cfg = parse_config(&text).map_err(|e| match e {
        HarnessError::Config(m) => HarnessError::Config(format!("{}: {m}", path.display())),
        other => other,
    })?;
    log::info!("resolved config:\n{}", toml::to_string(&cfg).unwrap_or_default());
    Ok(cfg)
}

pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
    validate(raw)
}

fn validate(raw: RawConfig) -> Result<SweepConfig> {
    let mut eps = raw.epsilons.clone();
    let sweep = matches!(raw.experiment, Experiment::Sphere | Experiment::Mhd);
    if sweep {
        if eps.len() < 3 {
            return Err(bad("epsilons", format!("need >= 3 values for a slope fit, got {}", eps.len())));
        }
        if let Some(e) = eps.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
            return Err(bad("epsilons", format!("values must be positive and finite, got {e}")));
        }
        let distinct: BTreeSet<u64> = eps.iter().map(|e| e.to_bits()).collect();
        if distinct.len() != eps.len() {
            return Err(bad("epsilons", "duplicate values"));
        }
        eps.sort_by(|a, b| b.total_cmp(a));
    }
    if raw.parallelism == Some(0) {
        return Err(bad("parallelism", "must be at least 1"));
    }
    let mut cfg = SweepConfig {
        experiment: raw.experiment,
        epsilons: eps,
        output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("out")),
        parallelism: raw.parallelism.unwrap_or(1),
        record_timing: raw.record_timing,
        module: raw.module,
        sphere: raw.sphere,
        mhd: raw.mhd,
        identities: raw.identities,
    };
    match cfg.experiment {
        Experiment::Sphere => check_sphere(cfg.sphere.as_ref().ok_or_else(|| bad("sphere", "section required"))?)?,
        Experiment::Mhd => check_mhd(cfg.mhd.as_ref().ok_or_else(|| bad("mhd", "section required"))?)?,
        Experiment::Verify => {
            if let Some(m) = &cfg.module {
                if !MODULES.contains(&m.as_str()) {
                    return Err(bad("module", format!("unknown module {m:?}; expected one of {MODULES:?}")));
                }
            }
        }
        Experiment::Identities => {
            let p = cfg.identities.get_or_insert_with(IdentityParams::default);
            check_identities(p)?;
        }
    }
    Ok(cfg)
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() { Ok(()) } else { Err(bad(field, format!("must be positive, got {v}"))) }
}

fn check_sphere(p: &SphereParams) -> Result<()> {
    if p.lmax < 4 {
        return Err(bad("sphere.lmax", format!("must be at least 4, got {}", p.lmax)));
    }
    positive("sphere.t_final", p.t_final)?;
    positive("sphere.dt", p.dt)?;
    if !(p.mu >= 0.0) {
        return Err(bad("sphere.mu", "must be non-negative"));
    }
    positive("sphere.m0", p.m0)?;
    if !p.alpha.is_finite() {
        return Err(bad("sphere.alpha", "must be finite"));
    }
    Ok(())
}

fn check_mhd(p: &MhdParams) -> Result<()> {
    if p.n < 4 || p.n % 2 != 0 {
        return Err(bad("mhd.n", format!("must be even and at least 4, got {}", p.n)));
    }
    positive("mhd.t_final", p.t_final)?;
    positive("mhd.dt", p.dt)?;
    positive("mhd.m0", p.m0)?;
    if !(p.s > 6.0) {
        return Err(bad("mhd.s", format!("must exceed 6, got {}", p.s)));
    }
    if p.k < 1 {
        return Err(bad("mhd.k", "must be at least 1"));
    }
    let cap = ((p.n - 1) / 3) as i64;
    if p.k_init < 1 || p.k_init > cap {
        return Err(bad("mhd.k_init", format!("must lie in 1..={cap}")));
    }
    if let Some(nu) = p.hyper_nu {
        if !(nu >= 0.0) {
            return Err(bad("mhd.hyper_nu", "must be non-negative"));
        }
    }
    Ok(())
}

fn check_identities(p: &IdentityParams) -> Result<()> {
    if !(p.delta > 0.0 && p.delta < 0.5) {
        return Err(bad("identities.delta", format!("must lie in (0, 0.5), got {}", p.delta)));
    }
    if p.nr < 4 || p.viscosity_nr < 4 {
        return Err(bad("identities.nr", "radial node counts must be at least 4"));
    }
    if p.lmax < 2 || p.lhi > p.lmax || p.lhi < 1 {
        return Err(bad("identities.lhi", "need 1 <= lhi <= lmax and lmax >= 2"));
    }
    if p.fields == 0 || p.lifting_cases == 0 {
        return Err(bad("identities.fields", "case counts must be positive"));
    }
    Ok(())
}

/// Worker threads: `ROTWAVE_THREADS` when set, else the configured value.
pub fn effective_parallelism(configured: usize) -> Result<usize> {
    match std::env::var("ROTWAVE_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(bad("ROTWAVE_THREADS", format!("expected a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(configured),
    }
}
