use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::fields::*;
use super::*;
use crate::sphere_ops::{surface_divcurl, synthesize_tangent, GridTangent, TangentField};
use crate::RotwaveError;

fn geom(delta: f64, nr: usize, lmax: usize) -> ShellGeometry<f64> {
    ShellGeometry::new(delta, nr, lmax).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn geometry_invariants() {
    let g = geom(0.25, 9, 4);
    assert_eq!(g.r()[0], 0.75);
    assert_eq!(g.r()[8], 1.25);
    assert!(ShellGeometry::<f64>::new(0.5, 9, 4).is_err());
    assert!(ShellGeometry::<f64>::new(0.0, 9, 4).is_err());
}

#[test]
fn average_of_unit_azimuthal_field() {
    for d in [0.1, 0.25, 0.45] {
        let g = geom(d, 8, 4);
        let u = ShellField::from_fn(&g, |_, _, _| (0.0, 0.0, 1.0));
        let a = barotropic_average(&u, &g).unwrap();
        let one = GridTangent::from_fn(g.grid(), |_, _| (0.0, 1.0));
        assert!(a.axpy(-1.0, &one).max_abs() < 1e-14);
    }
}

#[test]
fn average_of_linear_profile() {
    let mut r = rng(1);
    for d in [0.1, 0.25, 0.45] {
        let g = geom(d, 8, 6);
        let a = TangentField::random(6, 1, 5, &mut r);
        let u = radially_scaled(&g, &a).unwrap();
        let avg = barotropic_average(&u, &g).unwrap();
        let expect = synthesize_tangent(&a, g.grid()).unwrap().scale(1.0 + d * d / 3.0);
        assert!(avg.axpy(-1.0, &expect).max_abs() < 1e-12);
    }
}

#[test]
fn average_discards_radial_component() {
    let g = geom(0.25, 8, 4);
    let u = ShellField::from_fn(&g, |r, th, _| (r * th.cos(), 0.0, 0.0));
    assert_eq!(barotropic_average(&u, &g).unwrap().max_abs(), 0.0);
}

#[test]
fn scalar_average_is_unweighted() {
    let g = geom(0.25, 8, 4);
    let f = ShellScalar { values: (0..8 * g.npts()).map(|q| g.r()[q / g.npts()].powi(2)).collect() };
    let a = barotropic_average_scalar(&f, &g);
    assert!(a.values().iter().all(|&v| (v - (1.0 + 0.25f64.powi(2) / 3.0)).abs() < 1e-14));
}

#[test]
fn calculus_examples() {
    let g = geom(0.25, 12, 8);
    let mut r = rng(2);
    let a = TangentField::random_rotational(8, 1, 7, &mut r);
    let u = radially_scaled(&g, &a).unwrap();
    let (div, _) = shell_vector_calculus(&u, &g).unwrap();
    assert!(div.max_abs() < 1e-11);

    let grad_r2 = ShellField::from_fn(&g, |r, _, _| (2.0 * r, 0.0, 0.0));
    let (div, curl) = shell_vector_calculus(&grad_r2, &g).unwrap();
    assert!(curl.max_abs() < 1e-11);
    assert!(div.values.iter().all(|&v| (v - 6.0).abs() < 1e-10));

    let radial = ShellField::from_fn(&g, |r, _, _| (r.powi(3) - 1.0 / r, 0.0, 0.0));
    let (_, curl) = shell_vector_calculus(&radial, &g).unwrap();
    assert!(curl.max_abs() < 1e-11);
}

/// Divergence and curl from the Cartesian velocity gradient: trace and the
/// antisymmetric part, an independent route from the spherical formulas.
#[test]
fn calculus_matches_cartesian_gradient() {
    let g = geom(0.25, 96, 12);
    let u = random_smooth(&g, 4, &mut rng(3)).unwrap();
    let (div, curl) = shell_vector_calculus(&u, &g).unwrap();
    let grad = calculus::velocity_gradient(&u, &g).unwrap();
    let n = u.w.len();
    let trace: Vec<f64> = (0..n).map(|q| grad[0][0][q] + grad[1][1][q] + grad[2][2][q]).collect();
    let cart = [
        (0..n).map(|q| grad[2][1][q] - grad[1][2][q]).collect::<Vec<_>>(),
        (0..n).map(|q| grad[0][2][q] - grad[2][0][q]).collect(),
        (0..n).map(|q| grad[1][0][q] - grad[0][1][q]).collect(),
    ];
    let c2 = calculus::from_cartesian(&cart, &g);
    let scale = u.max_abs();
    let dd = div.values.iter().zip(&trace).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(dd < 1e-9 * scale, "{dd}");
    assert!(curl.axpy(-1.0, &c2).max_abs() < 1e-9 * scale, "{}", curl.axpy(-1.0, &c2).max_abs());
}

#[test]
fn leray_examples() {
    let g = geom(0.25, 16, 8);
    let grad_r2 = ShellField::from_fn(&g, |r, _, _| (2.0 * r, 0.0, 0.0));
    let p = shell_leray_project(&grad_r2, &g).unwrap();
    assert!(p.max_abs() < 1e-10);

    let u = navier_family(&g, 6, &mut rng(4)).unwrap();
    let (div, _) = shell_vector_calculus(&u, &g).unwrap();
    assert!(div.max_abs() < 1e-10 * u.max_abs());
    assert!(u.boundary_flux_max() < 1e-13);
    let p = shell_leray_project(&u, &g).unwrap();
    assert!(p.axpy(-1.0, &u).max_abs() < 1e-9 * u.max_abs());
}

#[test]
fn leray_on_random_fields() {
    let g = geom(0.25, 64, 12);
    let u = random_smooth(&g, 11, &mut rng(5)).unwrap();
    let (p, q) = shell_leray_split(&u, &g).unwrap();
    let (div, _) = shell_vector_calculus(&p, &g).unwrap();
    let scale = u.norm_l2(&g);
    assert!(div.norm_l2(&g) < 1e-7 * scale, "{}", div.norm_l2(&g));
    assert!(p.boundary_flux_max() < 1e-10 * scale);
    assert!(p.inner(&q, &g).abs() < 1e-7 * scale * scale);
    let pp = shell_leray_project(&p, &g).unwrap();
    assert!(pp.axpy(-1.0, &p).norm_l2(&g) < 1e-7 * scale);
    // Q u is a gradient: curl-free
    let (_, curl) = shell_vector_calculus(&q, &g).unwrap();
    assert!(curl.norm_l2(&g) < 1e-7 * scale);
}

#[test]
fn averaging_commutes_with_projection() {
    let mut res = Vec::new();
    for (nr, lmax) in [(24, 12), (48, 24)] {
        let g = geom(0.25, nr, lmax);
        let u = random_smooth(&g, 10, &mut rng(6)).unwrap();
        res.push(commutation_residual(&u, &g).unwrap());
    }
    assert!(res[1] < res[0] / 4.0, "{res:?}");
    assert!(res[1] < 1e-5, "{res:?}");
}

#[test]
fn traction_of_rigid_rotation_vanishes() {
    let g = geom(0.25, 8, 4);
    let u = rigid_rotation(&g);
    for side in [Side::Inner, Side::Outer] {
        let t = navier_traction(&u, side, &g).unwrap();
        assert!(t.direct.max_abs() < 1e-12);
        assert!(t.form_a.max_abs() < 1e-12);
        assert!(t.form_b.max_abs() < 1e-12);
    }
    let e = energy_report(&u, &g).unwrap();
    assert!(e.stress_norm_sq < 1e-20 && e.energy > 0.0);
}

#[test]
fn traction_forms_agree_on_scaled_tangent_fields() {
    let g = geom(0.25, 10, 10);
    let a = TangentField::random_rotational(10, 1, 9, &mut rng(7));
    let u = radially_scaled(&g, &a).unwrap();
    for side in [Side::Inner, Side::Outer] {
        let t = navier_traction(&u, side, &g).unwrap();
        assert!(t.form_a.max_abs() < 1e-11);
        assert!(t.max_discrepancy() < 1e-9, "{}", t.max_discrepancy());
    }
}

#[test]
fn traction_converges_to_exact_on_generic_fields() {
    let wf = {
        let g = geom(0.25, 8, 8);
        WallTangentField::random(&g, 7, &mut rng(8))
    };
    let mut errs = Vec::new();
    let mut disc = Vec::new();
    for nr in [12, 24] {
        let g = geom(0.25, nr, 8);
        let u = wf.field(&g).unwrap();
        let t = navier_traction(&u, Side::Outer, &g).unwrap();
        let ex = wf.exact_traction(Side::Outer, &g).unwrap();
        errs.push(t.direct.axpy(-1.0, &ex).max_abs());
        disc.push(t.max_discrepancy());
    }
    assert!(errs[1] < errs[0] / 4.0, "{errs:?}");
    assert!(disc[1] < disc[0] / 4.0, "{disc:?}");
}

#[test]
fn traction_rejects_normal_flux() {
    let g = geom(0.25, 8, 4);
    let u = ShellField::from_fn(&g, |r, _, _| (r, 0.0, 0.0));
    assert!(matches!(
        navier_traction(&u, Side::Outer, &g),
        Err(RotwaveError::InvalidArgument(_))
    ));
}

#[test]
fn lifting_examples() {
    let m = lifting_matrix(0.5, 0.0);
    // (a, b) = (g, 3g/4) solves the δ = 0.5, λ = 0 system
    assert!((m[0][0] * 1.0 + m[0][1] * 0.75 - 1.0).abs() < 1e-15);
    assert!((m[1][0] * 1.0 + m[1][1] * 0.75 - 1.0).abs() < 1e-15);
    assert!((m[0][0] - 1.5).abs() < 1e-15 && (m[0][1] + 2.0 / 3.0).abs() < 1e-15);
    let m = lifting_matrix(0.25, 1.0);
    assert!(m[0][0] * m[1][1] - m[0][1] * m[1][0] > 0.0);

    let g = geom(0.25, 8, 4);
    let z = GridTangent::zeros(g.grid());
    let bd = BoundaryData { g_plus: z.clone(), g_minus: z.clone(), lambda: 3.0 };
    let (a, b) = lift_boundary_data(&bd, 0.25).unwrap();
    assert_eq!(a.max_abs() + b.max_abs(), 0.0);
    let bad = BoundaryData { g_plus: z.clone(), g_minus: z, lambda: -1.0 };
    assert!(lift_boundary_data(&bad, 0.25).is_err());
}

#[test]
fn lifted_field_carries_shear_data() {
    let mut r = rng(9);
    for (lambda, delta) in [(0.0, 0.1), (1.0, 0.25), (10.0, 0.45)] {
        let g = geom(delta, 8, 8);
        let gp = synthesize_tangent(&TangentField::random(8, 1, 7, &mut r), g.grid()).unwrap();
        let gm = synthesize_tangent(&TangentField::random(8, 1, 7, &mut r), g.grid()).unwrap();
        let bd = BoundaryData { g_plus: gp.clone(), g_minus: gm.clone(), lambda };
        let (a, b) = lift_boundary_data(&bd, delta).unwrap();
        let v = lifted_field(&a, &b, &g).unwrap();
        assert!(v.boundary_flux_max() == 0.0);
        for (side, target) in [(Side::Outer, &gp), (Side::Inner, &gm)] {
            let t = navier_traction(&v, side, &g).unwrap();
            let vh = v.tangent_layer(&g, g.boundary_index(side));
            let lhs = t.direct.axpy(lambda, &vh);
            assert!(lhs.axpy(-1.0, target).max_abs() < 1e-9 * (1.0 + target.max_abs()));
        }
    }
}

#[test]
fn energy_report_bounds() {
    let g = geom(0.25, 10, 8);
    let z = energy_report(&ShellField::zeros(&g), &g).unwrap();
    assert_eq!((z.energy, z.grad_norm_sq, z.stress_norm_sq), (0.0, 0.0, 0.0));
    let mut r = rng(10);
    for _ in 0..3 {
        let u = random_smooth(&g, 7, &mut r).unwrap();
        let e = energy_report(&u, &g).unwrap();
        assert!(e.stress_norm_sq <= 4.0 * e.grad_norm_sq);
        assert!(e.energy > 0.0);
    }
}

#[test]
fn energy_of_rigid_rotation() {
    // ∫ r² sin²θ over the shell = (8π/3) ∫ r⁴ dr
    let g = geom(0.25, 8, 4);
    let e = energy_report(&rigid_rotation(&g), &g).unwrap();
    let exact = 8.0 * std::f64::consts::PI / 3.0 * (1.25f64.powi(5) - 0.75f64.powi(5)) / 5.0;
    assert!((e.energy - exact).abs() < 1e-12);
    // |∇u|² = 2 pointwise
    let vol = 4.0 * std::f64::consts::PI / 3.0 * (1.25f64.powi(3) - 0.75f64.powi(3));
    assert!((e.grad_norm_sq - 2.0 * vol).abs() < 1e-11);
}

#[test]
fn averaged_flux_free_field_is_solenoidal() {
    let g = geom(0.25, 16, 10);
    let u = navier_family(&g, 8, &mut rng(11)).unwrap();
    let avg = barotropic_average(&u, &g).unwrap();
    let (d, _) = surface_divcurl(&avg, g.grid()).unwrap();
    assert!(d.max_abs() < 1e-11);
}

#[test]
fn curl_curl_equals_minus_laplacian_on_solenoidal_fields() {
    let g = geom(0.25, 24, 10);
    let u = navier_family(&g, 8, &mut rng(12)).unwrap();
    let lap = vector_laplacian(&u, &g).unwrap();
    let (_, c) = shell_vector_calculus(&u, &g).unwrap();
    let (_, cc) = shell_vector_calculus(&c, &g).unwrap();
    let a = barotropic_average(&lap, &g).unwrap();
    let b = barotropic_average(&cc, &g).unwrap();
    assert!(a.axpy(1.0, &b).max_abs() < 1e-8 * a.max_abs());
}

#[test]
fn averaged_viscosity_identity() {
    let g = geom(0.25, 32, 10);
    let u = navier_family(&g, 8, &mut rng(13)).unwrap();
    let (res, scale) = viscosity_identity_residual(&u, &g).unwrap();
    assert!(res < 1e-6 * scale, "{res} {scale}");
}
