use proptest::prelude::*;

use rotwave::emit::csv_records;
use rotwave::fit_slope;
use rotwave::parse_config;
use rotwave::sweep::run_sweep;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn fit_slope_is_scale_invariant(
        pts in prop::collection::vec((0.001f64..10.0, 0.001f64..10.0), 3..12),
        ax in 1e-3f64..1e3,
        ay in 1e-3f64..1e3,
    ) {
        let mut pts = pts;
        // distinct abscissae
        for (i, p) in pts.iter_mut().enumerate() {
            p.0 *= 1.0 + i as f64;
        }
        let base = fit_slope(&pts).unwrap();
        let sx: Vec<_> = pts.iter().map(|&(x, y)| (ax * x, y)).collect();
        let sy: Vec<_> = pts.iter().map(|&(x, y)| (x, ay * y)).collect();
        prop_assert!((fit_slope(&sx).unwrap().slope - base.slope).abs() < 1e-9 * (1.0 + base.slope.abs()));
        let fy = fit_slope(&sy).unwrap();
        prop_assert!((fy.slope - base.slope).abs() < 1e-9 * (1.0 + base.slope.abs()));
        prop_assert!((fy.intercept - base.intercept - ay.ln()).abs() < 1e-9 * (1.0 + fy.intercept.abs()));
        prop_assert!((0.0..=1.0).contains(&base.r_squared));
    }

    #[test]
    fn power_laws_are_recovered(c in 0.01f64..100.0, p in -3.0f64..3.0) {
        let pts: Vec<_> = [1.0, 0.5, 0.25, 0.125, 0.0625].iter().map(|&x: &f64| (x, c * x.powf(p))).collect();
        let f = fit_slope(&pts).unwrap();
        prop_assert!((f.slope - p).abs() < 1e-10);
        prop_assert!((f.intercept - c.ln()).abs() < 1e-10);
        prop_assert!(f.r_squared > 1.0 - 1e-10);
    }
}

fn small_sphere(parallelism: usize, order: &str) -> String {
    format!(
        "experiment = \"sphere\"\nepsilons = [{order}]\nparallelism = {parallelism}\n\
         [sphere]\nlmax = 10\nt_final = 0.2\ndt = 0.01\n"
    )
}

#[test]
fn sweep_rows_do_not_depend_on_scheduling() {
    let a = run_sweep(&parse_config(&small_sphere(1, "0.2, 0.1, 0.05, 0.025")).unwrap()).unwrap();
    let b = run_sweep(&parse_config(&small_sphere(4, "0.025, 0.1, 0.2, 0.05")).unwrap()).unwrap();
    assert_eq!(csv_records(&a.rows), csv_records(&b.rows));
    assert_eq!(a.fit, b.fit);
    let eps: Vec<f64> = a.rows.primary().iter().map(|p| p.0).collect();
    assert_eq!(eps, vec![0.2, 0.1, 0.05, 0.025]);
}

#[test]
fn sphere_sweep_of_four_members_has_four_rows_and_a_slope() {
    let r = run_sweep(&parse_config(&small_sphere(2, "0.2, 0.1, 0.05, 0.025")).unwrap()).unwrap();
    assert_eq!(r.rows.len(), 4);
    assert!(!r.partial());
    assert!(r.fit.unwrap().slope.is_finite());
}

#[test]
fn failing_members_make_the_result_partial() {
    // dt far beyond the advective limit: every member blows up
    let cfg = parse_config(
        "experiment = \"mhd\"\nepsilons = [1.0, 0.5, 0.25]\n\
         [mhd]\nn = 8\nt_final = 2.0\ndt = 1.0\nm0 = 400.0\nk_init = 2\n",
    )
    .unwrap();
    let r = run_sweep(&cfg).unwrap();
    assert!(r.partial());
    assert!(r.fit.is_none() && r.secondary.is_empty() && r.rows.is_empty());
    let eps: Vec<f64> = r.failures.iter().map(|f| f.epsilon).collect();
    assert_eq!(eps, vec![1.0, 0.5, 0.25]);
    assert!(r.failures.iter().all(|f| f.exit_code == 3), "{:?}", r.failures);
}
