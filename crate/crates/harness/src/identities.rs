//! Shell identity checks behind `rotwave identities`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rotwave_core::shell::fields::{navier_family, radially_scaled, random_smooth, rigid_rotation, WallTangentField};
use rotwave_core::shell::{
    commutation_residual, lift_boundary_data, lifted_field, navier_traction, viscosity_identity_residual,
    BoundaryData, ShellGeometry, Side,
};
use rotwave_core::sphere_ops::{synthesize_tangent, TangentField};

use crate::config::IdentityParams;
use crate::error::Result;
use crate::verify::{Check, Report};

const M: &str = "shell";

/// Discrepancies below this count as converged.
pub const TRACTION_FLOOR: f64 = 1e-11;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Residual of averaging against projection on `p.fields` random fields, at
/// `(nr, lmax)` and at twice both.
pub fn commutation(p: &IdentityParams) -> Result<Vec<Check>> {
    let coarse = ShellGeometry::<f64>::new(p.delta, p.nr, p.lmax)?;
    let fine = ShellGeometry::<f64>::new(p.delta, 2 * p.nr, 2 * p.lmax)?;
    let mut worst = 0.0f64;
    let mut worst_fine = 0.0f64;
    let mut min_gain = f64::INFINITY;
    for i in 0..p.fields {
        let seed = p.seed.wrapping_mul(1000).wrapping_add(i as u64);
        let a = commutation_residual(&random_smooth(&coarse, p.lhi, &mut rng(seed))?, &coarse)?;
        let b = commutation_residual(&random_smooth(&fine, p.lhi, &mut rng(seed))?, &fine)?;
        worst = worst.max(a);
        worst_fine = worst_fine.max(b);
        min_gain = min_gain.min(a / b.max(f64::MIN_POSITIVE));
        log::debug!("commutation field {i}: {a:.3e} -> {b:.3e}");
    }
    Ok(vec![
        Check::at_most(M, "commutation_residual", worst, 1e-5),
        Check::at_most(M, "commutation_residual_refined", worst_fine, 1e-5),
        // ≥ 4× reduction on every field
        Check::at_most(M, "commutation_refinement_inverse_gain", 1.0 / min_gain, 0.25),
    ])
}

/// `log₂(coarse / fine)`, infinite once the fine value reaches the floor.
fn observed_order(coarse: f64, fine: f64) -> f64 {
    if fine < TRACTION_FLOOR { f64::INFINITY } else { (coarse / fine).log2() }
}

/// Traction forms on `r a`, on rigid rotation and on generic fields with
/// known traction.
pub fn traction(p: &IdentityParams) -> Result<Vec<Check>> {
    let mut r = rng(p.seed ^ 0x7ac);
    let g = ShellGeometry::<f64>::new(p.delta, 10, p.lmax)?;
    let mut agree = 0.0f64;
    let mut form_a = 0.0f64;
    for _ in 0..3 {
        let a = TangentField::random(p.lmax, 1, p.lhi, &mut r);
        let u = radially_scaled(&g, &a)?;
        for side in [Side::Inner, Side::Outer] {
            let t = navier_traction(&u, side, &g)?;
            agree = agree.max(t.max_discrepancy());
            form_a = form_a.max(t.form_a.max_abs());
        }
    }
    let rot = rigid_rotation(&g);
    let mut rigid = 0.0f64;
    for side in [Side::Inner, Side::Outer] {
        let t = navier_traction(&rot, side, &g)?;
        rigid = rigid.max(t.direct.max_abs()).max(t.form_a.max_abs()).max(t.form_b.max_abs());
    }
    let lmax = 8;
    let mut min_order = f64::INFINITY;
    let mut min_err_order = f64::INFINITY;
    for _ in 0..5 {
        let wf = WallTangentField::random(&ShellGeometry::<f64>::new(p.delta, 8, lmax)?, lmax - 1, &mut r);
        let mut disc = Vec::new();
        let mut err = Vec::new();
        for nr in [12, 24] {
            let g = ShellGeometry::<f64>::new(p.delta, nr, lmax)?;
            let u = wf.field(&g)?;
            let mut d = 0.0f64;
            let mut e = 0.0f64;
            for side in [Side::Inner, Side::Outer] {
                let t = navier_traction(&u, side, &g)?;
                d = d.max(t.max_discrepancy());
                let ex = wf.exact_traction(side, &g)?;
                e = e.max(t.direct.axpy(-1.0, &ex).max_abs());
            }
            disc.push(d);
            err.push(e);
        }
        min_order = min_order.min(observed_order(disc[0], disc[1]));
        min_err_order = min_err_order.min(observed_order(err[0], err[1]));
    }
    Ok(vec![
        Check::at_most(M, "traction_forms_disagree_on_r_a", agree, 1e-9),
        Check::at_most(M, "traction_of_r_a", form_a, 1e-9),
        Check::at_most(M, "rigid_rotation_traction", rigid, 1e-10),
        // observed radial order ≥ 2
        Check::at_most(M, "traction_discrepancy_inverse_order", 1.0 / min_order, 0.5),
        Check::at_most(M, "traction_error_inverse_order", 1.0 / min_err_order, 0.5),
    ])
}

/// Averaged-viscosity identity on homogeneous-Navier fields.
pub fn viscosity(p: &IdentityParams) -> Result<Vec<Check>> {
    let g = ShellGeometry::<f64>::new(p.delta, p.viscosity_nr, p.lmax)?;
    let mut r = rng(p.seed ^ 0x715c);
    let mut worst = 0.0f64;
    let mut rel = 0.0f64;
    for _ in 0..5 {
        let u = navier_family(&g, p.lhi, &mut r)?;
        let (res, scale) = viscosity_identity_residual(&u, &g)?;
        worst = worst.max(res);
        rel = rel.max(res / scale);
    }
    Ok(vec![
        Check::at_most(M, "viscosity_identity_residual", worst, 1e-6),
        Check::at_most(M, "viscosity_identity_relative", rel, 1e-6),
    ])
}

/// Lifted fields `r² a + b` carry the prescribed shear data.
pub fn lifting(p: &IdentityParams) -> Result<Vec<Check>> {
    let mut r = rng(p.seed ^ 0x11f7);
    let lmax = 8;
    let mut worst = 0.0f64;
    let mut flux = 0.0f64;
    for i in 0..p.lifting_cases {
        let lambda = [0.0, 1.0, 10.0][i % 3];
        let delta = [0.1, 0.25, 0.45][(i / 3) % 3];
        let g = ShellGeometry::<f64>::new(delta, 6, lmax)?;
        let amp = r.random_range(0.1..10.0);
        let gp = synthesize_tangent(&TangentField::random(lmax, 1, lmax - 1, &mut r), g.grid())?.scale(amp);
        let gm = synthesize_tangent(&TangentField::random(lmax, 1, lmax - 1, &mut r), g.grid())?.scale(amp);
        let bd = BoundaryData { g_plus: gp.clone(), g_minus: gm.clone(), lambda };
        let (a, b) = lift_boundary_data(&bd, delta)?;
        let v = lifted_field(&a, &b, &g)?;
        flux = flux.max(v.boundary_flux_max());
        for (side, target) in [(Side::Outer, &gp), (Side::Inner, &gm)] {
            let t = navier_traction(&v, side, &g)?;
            let vh = v.tangent_layer(&g, g.boundary_index(side));
            let lhs = t.direct.axpy(lambda, &vh);
            worst = worst.max(lhs.axpy(-1.0, target).max_abs() / (1.0 + target.max_abs()));
        }
    }
    Ok(vec![
        Check::at_most(M, "lifting_shear_condition", worst, 1e-8),
        Check::at_most(M, "lifting_normal_flux", flux, 0.0),
    ])
}

pub fn run_identities(p: &IdentityParams) -> Result<Report> {
    let mut report = Report::default();
    for part in [commutation, traction, viscosity, lifting] {
        report.checks.extend(part(p)?);
    }
    Ok(report)
}
