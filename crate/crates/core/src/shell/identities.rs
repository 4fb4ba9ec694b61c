//! Residuals of the averaged-operator identities on a shell field.

use super::calculus::{barotropic_average, vector_laplacian};
use super::leray::shell_leray_project;
use super::{ShellField, ShellGeometry};
use crate::spharm::laplace_beltrami;
use crate::sphere_ops::{hodge_decompose, leray_part, synthesize_tangent, GridTangent, TangentField};
use crate::{Real, Result};

fn project_h<T: Real>(t: &GridTangent<T>, geom: &ShellGeometry<T>) -> Result<GridTangent<T>> {
    let g = geom.grid();
    synthesize_tangent(&leray_part(&hodge_decompose(t, g)?), g)
}

/// `‖avg(P u) − P_h avg(u)‖_{L²(S²)}`.
pub fn commutation_residual<T: Real>(u: &ShellField<T>, geom: &ShellGeometry<T>) -> Result<T> {
    let lhs = barotropic_average(&shell_leray_project(u, geom)?, geom)?;
    let rhs = project_h(&barotropic_average(u, geom)?, geom)?;
    Ok(lhs.axpy(-T::one(), &rhs).norm_l2(geom.grid()))
}

/// `‖P_h avg(Δu) − P_h Δ_h avg(r⁻²u_h) − 2 P_h avg(r⁻¹∂_r u_h)‖_{L²(S²)}`
/// together with `‖P_h avg(Δu)‖` for scale.
pub fn viscosity_identity_residual<T: Real>(u: &ShellField<T>, geom: &ShellGeometry<T>) -> Result<(T, T)> {
    let g = geom.grid();
    let lhs = project_h(&barotropic_average(&vector_laplacian(u, geom)?, geom)?, geom)?;
    let np = geom.npts();
    let mut scaled = u.clone();
    let mut radial = u.clone();
    let dut = geom.d_r(&u.u_theta);
    let dup = geom.d_r(&u.u_phi);
    for q in 0..u.w.len() {
        let r = geom.r()[q / np];
        scaled.u_theta[q] /= r * r;
        scaled.u_phi[q] /= r * r;
        radial.u_theta[q] = dut[q] / r;
        radial.u_phi[q] = dup[q] / r;
    }
    let avg = hodge_decompose(&barotropic_average(&scaled, geom)?, g)?;
    let lap = TangentField { hodge_phi: laplace_beltrami(&avg.hodge_phi), hodge_psi: laplace_beltrami(&avg.hodge_psi) };
    let t1 = synthesize_tangent(&leray_part(&lap), g)?;
    let t2 = project_h(&barotropic_average(&radial, geom)?, geom)?.scale(T::of(2.0));
    let res = lhs.axpy(-T::one(), &t1).axpy(-T::one(), &t2);
    Ok((res.norm_l2(g), lhs.norm_l2(g)))
}
