use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rotwave_core::mhd::{
    self, apply_wave_operator, divergence_defect, kernel_part, project_leray_box, random_solenoidal, BoxGrid,
    MhdSolver, MhdState,
};
use rotwave_core::spharm::{analyze, laplace_beltrami, scalar_sobolev_norm, synthesize, GaussGrid, SpectralScalar};
use rotwave_core::sphere_ops::{
    apply_lh, hodge_decompose, leray_part, nonzonal_part, synthesize_tangent, vector_sobolev_norm, zonal_part,
    TangentField,
};
use rotwave_core::Complex;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cfg() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn parseval_on_band_limited_scalars(seed in any::<u64>(), lmax in 2usize..24) {
        let g = GaussGrid::<f64>::new(lmax).unwrap();
        let c = SpectralScalar::random_real(lmax, 0, lmax, &mut rng(seed));
        let f = synthesize(&c, &g).unwrap();
        let sq: Vec<f64> = f.values().iter().map(|v| v * v).collect();
        let quad = g.integrate(&sq);
        let spec = c.norm_l2().powi(2);
        prop_assert!((quad - spec).abs() < 1e-10 * (1.0 + spec));
        let back = analyze(&f, &g).unwrap();
        prop_assert!(back.axpy(-1.0, &c).max_abs() < 1e-10);
    }

    #[test]
    fn sobolev_duality(seed in any::<u64>(), lmax in 2usize..=15, alpha in -3.0f64..3.0) {
        let mut r = rng(seed);
        let c = SpectralScalar::<f64>::random_real(lmax, 1, lmax, &mut r);
        let d = SpectralScalar::<f64>::random_real(lmax, 1, lmax, &mut r);
        let lhs = c.inner(&d).norm();
        let rhs = scalar_sobolev_norm(&c, alpha).unwrap() * scalar_sobolev_norm(&d, -alpha).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        // equality at d = (−Δ_h)^α c
        let e = c.map_lm(|l, _| Complex::new(if l == 0 { 0.0 } else { ((l * l + l) as f64).powf(alpha) }, 0.0));
        let lhs = c.inner(&e).norm();
        let rhs = scalar_sobolev_norm(&c, alpha).unwrap() * scalar_sobolev_norm(&e, -alpha).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10 * rhs);
    }

    #[test]
    fn laplace_beltrami_self_adjoint_nonpositive(seed in any::<u64>(), lmax in 1usize..20) {
        let mut r = rng(seed);
        let a = SpectralScalar::<f64>::random_real(lmax, 0, lmax, &mut r);
        let b = SpectralScalar::<f64>::random_real(lmax, 0, lmax, &mut r);
        let x = laplace_beltrami(&a).inner(&b);
        let y = a.inner(&laplace_beltrami(&b));
        prop_assert!((x - y).norm() < 1e-10 * (1.0 + x.norm()));
        prop_assert!(laplace_beltrami(&a).inner(&a).re <= 1e-12);
    }

    #[test]
    fn sobolev_norm_monotone_above_l2(seed in any::<u64>(), a in -4.0f64..2.0, gap in 0.0f64..2.0) {
        let c = SpectralScalar::<f64>::random_real(12, 2, 12, &mut rng(seed));
        let lo = scalar_sobolev_norm(&c, a).unwrap();
        let hi = scalar_sobolev_norm(&c, a + gap).unwrap();
        prop_assert!(hi >= 6f64.powf(gap / 2.0) * lo * (1.0 - 1e-12));
    }

    #[test]
    fn zonal_defect_bounded_by_lh(seed in any::<u64>(), lmax in 2usize..=15) {
        let u = TangentField::<f64>::random_rotational(lmax, 1, lmax, &mut rng(seed));
        let g = GaussGrid::new(lmax + 1).unwrap();
        let lu = apply_lh(&u, &g).unwrap();
        for alpha in [-4.5, -2.0, 0.0] {
            let lhs = vector_sobolev_norm(&nonzonal_part(&u), alpha);
            let rhs = vector_sobolev_norm(&lu, alpha + 2.0);
            prop_assert!(lhs <= rhs + 1e-9, "{} {} {}", alpha, lhs, rhs);
        }
    }

    #[test]
    fn lh_is_skew(seed in any::<u64>(), lmax in 2usize..=15) {
        let mut r = rng(seed);
        let u = TangentField::<f64>::random_rotational(lmax, 1, lmax, &mut r);
        let v = TangentField::<f64>::random_rotational(lmax, 1, lmax, &mut r);
        let g = GaussGrid::new(lmax + 1).unwrap();
        let a = apply_lh(&u, &g).unwrap().inner(&v);
        let b = u.inner(&apply_lh(&v, &g).unwrap());
        prop_assert!((a + b).norm() < 1e-10 * (1.0 + a.norm()));
    }

    #[test]
    fn zonal_projector_idempotent_orthogonal(seed in any::<u64>(), lmax in 1usize..=15) {
        let u = TangentField::<f64>::random(lmax, 1, lmax, &mut rng(seed));
        let p = zonal_part(&u);
        let pp = zonal_part(&p);
        prop_assert!(pp.axpy(-1.0, &p).hodge_psi.max_abs() < 1e-15);
        let g = GaussGrid::new(lmax).unwrap();
        let a = synthesize_tangent(&p, &g).unwrap();
        let b = synthesize_tangent(&u, &g).unwrap().axpy(-1.0, &a);
        prop_assert!(a.inner(&b, &g).abs() < 1e-10 * (1.0 + u.inner(&u).norm()));
    }

    #[test]
    fn leray_kills_surface_gradients(seed in any::<u64>(), lmax in 1usize..=15) {
        let f = SpectralScalar::<f64>::random_real(lmax, 1, lmax, &mut rng(seed));
        let g = GaussGrid::new(lmax).unwrap();
        let grad = synthesize_tangent(&TangentField::gradient(f), &g).unwrap();
        let p = leray_part(&hodge_decompose(&grad, &g).unwrap());
        let pg = synthesize_tangent(&p, &g).unwrap();
        prop_assert!(pg.norm_l2(&g) < 1e-10);
    }

    #[test]
    fn box_leray_idempotent(seed in any::<u64>()) {
        let g = BoxGrid::<f64>::new(8).unwrap();
        let mut r = rng(seed);
        let v = random_solenoidal(&g, 3, &mut r);
        let w = mhd::axpy(&v, 1.0, &mhd::curl_box(&v, &g));
        let p = project_leray_box(&w, &g);
        prop_assert!(mhd::max_abs(&mhd::axpy(&project_leray_box(&p, &g), -1.0, &p)) < 1e-13);
        prop_assert!(divergence_defect(&p, &g) < 1e-12);
    }

    #[test]
    fn box_wave_operator_skew_and_kernel(seed in any::<u64>()) {
        let g = BoxGrid::<f64>::new(8).unwrap();
        let mut r = rng(seed);
        let u = random_solenoidal(&g, 3, &mut r);
        let b = random_solenoidal(&g, 3, &mut r);
        let (lu, lb) = apply_wave_operator(&u, &b, &g);
        let s = g.inner(&lu, &u) + g.inner(&lb, &b);
        let e = g.norm_l2(&u).powi(2) + g.norm_l2(&b).powi(2);
        prop_assert!(s.re.abs() < 1e-10 * e);
        let (ku, kb) = apply_wave_operator(&kernel_part(&u, &g), &kernel_part(&b, &g), &g);
        prop_assert_eq!(mhd::max_abs(&ku) + mhd::max_abs(&kb), 0.0);
    }

    #[test]
    fn box_linear_step_is_isometric(seed in any::<u64>(), eps in 0.01f64..1.0, dt in 0.001f64..0.1) {
        let g = BoxGrid::<f64>::new(8).unwrap();
        let mut r = rng(seed);
        let s = MhdState::new(random_solenoidal(&g, 3, &mut r), random_solenoidal(&g, 3, &mut r), eps, &g).unwrap();
        let solver = MhdSolver::new(g.clone(), eps, dt, false, None).unwrap();
        let s1 = solver.step(&s).unwrap();
        prop_assert!(((s1.energy(&g) - s.energy(&g)) / s.energy(&g)).abs() < 1e-12);
        s1.check_invariants(&g, 1e-12).unwrap();
    }
}
