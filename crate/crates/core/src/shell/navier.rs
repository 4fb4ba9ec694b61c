use num_traits::Float;

use crate::error::{invalid, Result, RotwaveError};
use crate::sphere_ops::GridTangent;
use crate::Real;

use super::calculus::{basis, shell_vector_calculus, velocity_gradient};
use super::{ShellField, ShellGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `r = 1 − δ`, outward normal `−e_r`.
    Inner,
    /// `r = 1 + δ`, outward normal `e_r`.
    Outer,
}

impl Side {
    pub fn normal_sign<T: Real>(self) -> T {
        match self {
            Side::Inner => -T::one(),
            Side::Outer => T::one(),
        }
    }
}

/// Three evaluations of the tangential traction `[S n]_tan` on one boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Traction<T> {
    /// `±(∂_r u_h − u_h / r)`
    pub form_a: GridTangent<T>,
    /// `(curl u) × n ∓ 2 u_h / r`
    pub form_b: GridTangent<T>,
    /// `[(∇u + ∇uᵀ) n]_tan` from Cartesian velocity gradients.
    pub direct: GridTangent<T>,
}

impl<T: Real> Traction<T> {
    /// Largest pointwise difference between any two of the three forms.
    pub fn max_discrepancy(&self) -> T {
        let ab = self.form_a.axpy(-T::one(), &self.form_b).max_abs();
        let ad = self.form_a.axpy(-T::one(), &self.direct).max_abs();
        let bd = self.form_b.axpy(-T::one(), &self.direct).max_abs();
        ab.max(ad).max(bd)
    }
}

pub fn navier_traction<T: Real>(
    u: &ShellField<T>,
    side: Side,
    geom: &ShellGeometry<T>,
) -> Result<Traction<T>> {
    u.check(geom)?;
    let i = geom.boundary_index(side);
    let tol = T::epsilon().sqrt() * (T::one() + u.max_abs());
    let flux = u.w_layer(i).iter().map(|v| Float::abs(*v)).fold(T::zero(), T::max);
    if flux > tol {
        return Err(RotwaveError::InvalidArgument(format!(
            "normal flux {flux} on the {side:?} boundary; the traction identities need u.n = 0"
        )));
    }
    let g = geom.grid();
    let r = geom.r()[i];
    let s: T = side.normal_sign();
    let uh = u.tangent_layer(geom, i);
    let dt = geom.d_r_at(&u.u_theta, i);
    let dp = geom.d_r_at(&u.u_phi, i);
    let dur = GridTangent::new(g, dt, dp)?;
    let form_a = dur.axpy(-T::one() / r, &uh).scale(s);

    let (_, curl) = shell_vector_calculus(u, geom)?;
    let cl = curl.tangent_layer(geom, i);
    // c × e_r = (c_φ, −c_θ)
    let form_b = cl.cross_er().scale(s).axpy(-s * T::of(2.0) / r, &uh);

    let grad = velocity_gradient(u, geom)?;
    let np = geom.npts();
    let mut direct = GridTangent::zeros(g);
    let mut p = 0;
    for &th in g.theta() {
        for &ph in g.phi() {
            let e = basis(th, ph);
            let q = i * np + p;
            let n = [e[0][0] * s, e[0][1] * s, e[0][2] * s];
            let mut sn = [T::zero(); 3];
            for k in 0..3 {
                for j in 0..3 {
                    sn[k] += (grad[k][j][q] + grad[j][k][q]) * n[j];
                }
            }
            direct.u_theta[p] = sn[0] * e[1][0] + sn[1] * e[1][1] + sn[2] * e[1][2];
            direct.u_phi[p] = sn[0] * e[2][0] + sn[1] * e[2][1] + sn[2] * e[2][2];
            p += 1;
        }
    }
    Ok(Traction { form_a, form_b, direct })
}

/// Shear data `g±` on `r = 1 ± δ` with friction coefficient `λ ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData<T> {
    pub g_plus: GridTangent<T>,
    pub g_minus: GridTangent<T>,
    pub lambda: T,
}

/// Coefficients of `v = r² a + b` in `±(∂_r v − v/r) + λ v = g±` at `r = 1 ± δ`,
/// rows `(outer, inner)`, columns `(a, b)`.
pub fn lifting_matrix<T: Real>(delta: T, lambda: T) -> [[T; 2]; 2] {
    let one = T::one();
    let rp = one + delta;
    let rm = one - delta;
    [
        [rp + rp * rp * lambda, -one / rp + lambda],
        [-rm + rm * rm * lambda, one / rm + lambda],
    ]
}

/// Tangent fields `a, b` such that `v = r² a + b` carries the shear data.
pub fn lift_boundary_data<T: Real>(bd: &BoundaryData<T>, delta: T) -> Result<(GridTangent<T>, GridTangent<T>)> {
    if !(bd.lambda >= T::zero()) {
        return invalid("friction coefficient lambda must be nonnegative");
    }
    if !(delta > T::zero() && delta < T::of(0.5)) {
        return invalid("shell half-thickness must lie in (0, 1/2)");
    }
    if bd.g_plus.nlat() != bd.g_minus.nlat() || bd.g_plus.nlon() != bd.g_minus.nlon() {
        return Err(RotwaveError::ShapeMismatch {
            expected: format!("{} x {}", bd.g_plus.nlat(), bd.g_plus.nlon()),
            got: format!("{} x {}", bd.g_minus.nlat(), bd.g_minus.nlon()),
        });
    }
    let m = lifting_matrix(delta, bd.lambda);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let solve = |gp: T, gm: T| ((m[1][1] * gp - m[0][1] * gm) / det, (m[0][0] * gm - m[1][0] * gp) / det);
    let mut a = bd.g_plus.clone();
    let mut b = bd.g_plus.clone();
    for p in 0..a.u_theta.len() {
        let (x, y) = solve(bd.g_plus.u_theta[p], bd.g_minus.u_theta[p]);
        a.u_theta[p] = x;
        b.u_theta[p] = y;
        let (x, y) = solve(bd.g_plus.u_phi[p], bd.g_minus.u_phi[p]);
        a.u_phi[p] = x;
        b.u_phi[p] = y;
    }
    Ok((a, b))
}

/// `v = r² a + b` (no radial component).
pub fn lifted_field<T: Real>(a: &GridTangent<T>, b: &GridTangent<T>, geom: &ShellGeometry<T>) -> Result<ShellField<T>> {
    a.check(geom.grid())?;
    b.check(geom.grid())?;
    let np = geom.npts();
    let mut v = ShellField::zeros(geom);
    for (i, &r) in geom.r().iter().enumerate() {
        for p in 0..np {
            v.u_theta[i * np + p] = r * r * a.u_theta[p] + b.u_theta[p];
            v.u_phi[i * np + p] = r * r * a.u_phi[p] + b.u_phi[p];
        }
    }
    Ok(v)
}
