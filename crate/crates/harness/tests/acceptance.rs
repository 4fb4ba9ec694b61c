//! End-to-end acceptance criteria. Each test writes one PASS/FAIL line to
//! stdout (uncaptured) and then asserts.

use std::io::Write;
use std::process::Command;
use std::sync::OnceLock;

use rotwave::config::{IdentityParams, MhdParams, SphereParams, SweepConfig};
use rotwave::identities::{commutation, lifting, traction, viscosity};
use rotwave::sweep::{run_sweep, Rows, SweepResult};
use rotwave::verify::{run_verify, Report};
use rotwave::{parse_config, Experiment};
use rotwave_core::mhd::nash::{anisotropic_norm_checks, gaussian_nash_ratio, standard_corpus};
use rotwave_core::mhd::BoxGrid;
use rotwave_core::sphere_solver::{run_accumulate, RunConfig};

/// Frozen constant in `∫‖∇u‖² ≤ ‖u₀‖²(1/μ + C·T)`.
const GRADIENT_BUDGET_C: f64 = 0.0;

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    let line = format!("criterion {n:>2} {} {name}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

fn sphere_sweep() -> &'static SweepResult {
    static RES: OnceLock<SweepResult> = OnceLock::new();
    RES.get_or_init(|| {
        let cfg = parse_config(
            "experiment = \"sphere\"\nepsilons = [0.1, 0.05, 0.025, 0.0125]\n\
             [sphere]\nlmax = 31\nmu = 0.0\nm0 = 1.0\nt_final = 1.0\nseed = 0\nalpha = -4.0\n",
        )
        .unwrap();
        run_sweep(&cfg).unwrap()
    })
}

fn mhd_sweep() -> &'static SweepResult {
    static RES: OnceLock<SweepResult> = OnceLock::new();
    RES.get_or_init(|| {
        let cfg = parse_config(
            "experiment = \"mhd\"\nepsilons = [0.2, 0.1, 0.05, 0.025]\n\
             [mhd]\nn = 32\nk = 3\nt_final = 1.0\nseed = 0\ns = 12.0\n",
        )
        .unwrap();
        run_sweep(&cfg).unwrap()
    })
}

fn sphere_rows(r: &SweepResult) -> &[rotwave::sweep::SphereRow] {
    match &r.rows {
        Rows::Sphere(x) => x,
        Rows::Mhd(_) => panic!("expected sphere rows"),
    }
}

fn report_checks(n: u32, name: &str, rep: &Report) {
    let detail: Vec<String> = rep.checks.iter().map(|c| format!("{}={:.3e}", c.name, c.value)).collect();
    report(n, name, rep.passed(), &detail.join(", "));
    assert!(rep.passed(), "{rep:#?}");
}

#[test]
fn c01_zonal_emergence_scaling() {
    let r = sphere_sweep();
    assert!(!r.partial());
    let f = r.fit.expect("complete sweep has a fit");
    let pass = (0.8..=1.2).contains(&f.slope) && f.r_squared >= 0.98;
    report(1, "zonal defect slope", pass, &format!("slope {:.4}, r^2 {:.5}", f.slope, f.r_squared));
    assert!(pass);
}

#[test]
fn c02_defect_bound_chain() {
    let rows = sphere_rows(sphere_sweep());
    let violations: usize = rows.iter().map(|r| r.bound_violations).sum();
    let checks: usize = rows.iter().map(|r| r.bound_checks).sum();
    assert!(checks > 4 * rows.len());
    report(2, "defect bound at every output time", violations == 0, &format!("{violations} violations in {checks} checks"));
    assert_eq!(violations, 0);
}

#[test]
fn c03_averaging_projection_commutation() {
    let p = IdentityParams::default();
    assert_eq!((p.fields, p.nr, p.lmax, p.delta), (50, 48, 15, 0.25));
    report_checks(3, "averaging commutes with projection", &Report { checks: commutation(&p).unwrap() });
}

#[test]
fn c04_navier_traction_equivalence() {
    report_checks(4, "traction forms", &Report { checks: traction(&IdentityParams::default()).unwrap() });
}

#[test]
fn c05_averaged_viscosity_identity() {
    let p = IdentityParams::default();
    assert_eq!((p.viscosity_nr, p.lmax), (64, 15));
    report_checks(5, "averaged viscosity identity", &Report { checks: viscosity(&p).unwrap() });
}

#[test]
fn c06_boundary_lifting() {
    let p = IdentityParams::default();
    assert_eq!(p.lifting_cases, 20);
    report_checks(6, "boundary lifting", &Report { checks: lifting(&p).unwrap() });
}

#[test]
fn c07_energy_laws() {
    let drift = sphere_rows(sphere_sweep())
        .iter()
        .map(|r| ((r.energy_final - r.energy_initial) / r.energy_initial).abs())
        .fold(0.0, f64::max);
    let mut c = RunConfig::<f64>::new(31, 0.05);
    c.mu = 0.01;
    let out = run_accumulate(&c).unwrap();
    let increases = out.history.windows(2).filter(|w| w[1].energy > w[0].energy).count();
    let u0 = out.history[0].energy;
    let budget = u0 * (1.0 / c.mu + GRADIENT_BUDGET_C * c.t_final);
    let pass = drift < 1e-6 && increases == 0 && out.grad_time_integral <= budget;
    report(
        7,
        "energy laws",
        pass,
        &format!(
            "inviscid drift {drift:.2e}, viscous increases {increases}, gradient integral {:.4} <= {budget:.4}",
            out.grad_time_integral
        ),
    );
    assert!(pass);
}

#[test]
fn c08_wave_defect_scaling() {
    let r = mhd_sweep();
    assert!(!r.partial());
    let f = r.fit.expect("complete sweep has a fit");
    let pass = (0.8..=1.2).contains(&f.slope) && f.r_squared >= 0.95;
    report(8, "MHD wave defect slope", pass, &format!("slope {:.4}, r^2 {:.5}", f.slope, f.r_squared));
    assert!(pass);
}

#[test]
fn c09_time_average_decay() {
    let r = mhd_sweep();
    let u = r.secondary_fit("u_int_Winf").expect("u fit").slope;
    let b = r.secondary_fit("b_int_Wks").expect("b fit").slope;
    // upper bounds only: the lower edges are asserted
    let pass = u >= 0.4 && b >= 0.03;
    report(
        9,
        "MHD time-average decay",
        pass,
        &format!("u W^(0,inf) slope {u:.4} (>= 0.4; reference band upper edge 0.7), b W^(0,12) slope {b:.4} (>= 0.03)"),
    );
    assert!(pass);
}

#[test]
fn c10_nash_and_anisotropic_inequalities() {
    let g = BoxGrid::<f64>::new(16).unwrap();
    let corpus = standard_corpus(&g, 0);
    assert_eq!(corpus.len(), 25);
    let rep = anisotropic_norm_checks(&corpus, 1, 2.0, &g).unwrap();
    let gauss = gaussian_nash_ratio(12.0f64, 512);
    let pass = rep.passed() && rep.max_nash() <= 2.0 && rep.max_lemma() <= 2.0 && (gauss - 0.798).abs() <= 0.01;
    report(
        10,
        "Nash and anisotropic inequalities",
        pass,
        &format!("max Nash {:.4}, max anisotropic {:.4}, Gaussian {gauss:.5}", rep.max_nash(), rep.max_lemma()),
    );
    assert!(pass);
}

#[test]
fn c11_operator_property_suite() {
    let rep = run_verify(None, 0).unwrap();
    let needed = [
        "sht_round_trip_lmax31",
        "duality_equality_case",
        "lh_skew",
        "wave_operator_skew",
        "leray_idempotent",
        "kernel_characterization_mismatches",
    ];
    for n in needed {
        assert!(rep.find(n).is_some(), "missing {n}");
    }
    let status = Command::new(env!("CARGO_BIN_EXE_rotwave")).arg("verify").output().unwrap().status;
    let pass = rep.passed() && status.success();
    report(11, "operator property suite", pass, &format!("{} checks, `rotwave verify` exit {}", rep.checks.len(), status.code().unwrap_or(-1)));
    assert!(pass, "{rep:#?}");
}

#[test]
fn sweep_configs_in_repo_match_the_criteria() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/configs");
    let sphere: SweepConfig = rotwave::load_config(format!("{dir}/sphere.toml").as_ref()).unwrap();
    assert_eq!(sphere.experiment, Experiment::Sphere);
    assert_eq!(sphere.epsilons, vec![0.1, 0.05, 0.025, 0.0125]);
    let s: &SphereParams = sphere.sphere.as_ref().unwrap();
    assert_eq!((s.lmax, s.mu, s.m0, s.t_final, s.seed, s.alpha), (31, 0.0, 1.0, 1.0, 0, -4.0));
    let mhd = rotwave::load_config(format!("{dir}/mhd.toml").as_ref()).unwrap();
    assert_eq!(mhd.epsilons, vec![0.2, 0.1, 0.05, 0.025]);
    let m: &MhdParams = mhd.mhd.as_ref().unwrap();
    assert_eq!((m.n, m.k, m.t_final, m.seed, m.s), (32, 3, 1.0, 0, 12.0));
    let id = rotwave::load_config(format!("{dir}/identities.toml").as_ref()).unwrap();
    assert_eq!(id.identities.unwrap(), IdentityParams::default());
}
