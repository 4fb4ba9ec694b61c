use crate::error::Result;
use crate::sphere_ops::{surface_divcurl, surface_grad, GridTangent};
use crate::spharm::{analyze, laplace_beltrami, synthesize, GridScalar};
use crate::Real;

use super::{ShellField, ShellGeometry, ShellScalar};

/// `ū = (1/2δ) ∫ r u_h dr`.
pub fn barotropic_average<T: Real>(u: &ShellField<T>, geom: &ShellGeometry<T>) -> Result<GridTangent<T>> {
    u.check(geom)?;
    let g = geom.grid();
    let mut out = GridTangent::zeros(g);
    let c = T::one() / (T::of(2.0) * geom.delta());
    for i in 0..geom.nr() {
        let a = geom.radial_weights()[i] * geom.r()[i] * c;
        out = out.axpy(a, &u.tangent_layer(geom, i));
    }
    Ok(out)
}

/// `f̄ = (1/2δ) ∫ f dr`.
pub fn barotropic_average_scalar<T: Real>(f: &ShellScalar<T>, geom: &ShellGeometry<T>) -> GridScalar<T> {
    let np = geom.npts();
    let c = T::one() / (T::of(2.0) * geom.delta());
    let mut out = vec![T::zero(); np];
    for i in 0..geom.nr() {
        let a = geom.radial_weights()[i] * c;
        for (o, &v) in out.iter_mut().zip(f.layer(geom, i)) {
            *o += a * v;
        }
    }
    GridScalar::new(geom.grid(), out).expect("layer shape matches geometry")
}

fn radial_scale<T: Real>(geom: &ShellGeometry<T>, v: &[T], f: impl Fn(T) -> T) -> Vec<T> {
    let np = geom.npts();
    v.iter()
        .enumerate()
        .map(|(p, &x)| x * f(geom.r()[p / np]))
        .collect()
}

/// `div u = r^{-2} ∂_r(r² w) + r^{-1} div_h u_h` and
/// `curl u = r^{-1} curl_h u_h e_r + r^{-1}(∇_h w − ∂_r(r u_h)) × e_r`.
pub fn shell_vector_calculus<T: Real>(
    u: &ShellField<T>,
    geom: &ShellGeometry<T>,
) -> Result<(ShellScalar<T>, ShellField<T>)> {
    u.check(geom)?;
    let g = geom.grid();
    let np = geom.npts();
    let dw = geom.d_r(&radial_scale(geom, &u.w, |r| r * r));
    let d_rut = geom.d_r(&radial_scale(geom, &u.u_theta, |r| r));
    let d_rup = geom.d_r(&radial_scale(geom, &u.u_phi, |r| r));
    let mut div = vec![T::zero(); geom.nr() * np];
    let mut curl = ShellField::zeros(geom);
    for i in 0..geom.nr() {
        let r = geom.r()[i];
        let (dh, ch) = surface_divcurl(&u.tangent_layer(geom, i), g)?;
        let dh = synthesize(&dh, g)?;
        let ch = synthesize(&ch, g)?;
        let ws = analyze(&GridScalar::new(g, u.w_layer(i).to_vec())?, g)?;
        let (gw, _) = surface_grad(&ws, g)?;
        for p in 0..np {
            let q = i * np + p;
            div[q] = dw[q] / (r * r) + dh.values()[p] / r;
            curl.w[q] = ch.values()[p] / r;
            curl.u_theta[q] = (gw.u_phi[p] - d_rup[q]) / r;
            curl.u_phi[q] = (d_rut[q] - gw.u_theta[p]) / r;
        }
    }
    Ok((ShellScalar { values: div }, curl))
}

/// Orthonormal `(e_r, e_θ, e_φ)` in Cartesian components.
pub(crate) fn basis<T: Real>(th: T, ph: T) -> [[T; 3]; 3] {
    let (st, ct, sp, cp) = (th.sin(), th.cos(), ph.sin(), ph.cos());
    [
        [st * cp, st * sp, ct],
        [ct * cp, ct * sp, -st],
        [-sp, cp, T::zero()],
    ]
}

/// Visit every node with its radial index, flat index and frame.
fn for_nodes<T: Real>(geom: &ShellGeometry<T>, mut f: impl FnMut(usize, usize, &[[T; 3]; 3])) {
    let g = geom.grid();
    let frames: Vec<[[T; 3]; 3]> = g
        .theta()
        .iter()
        .flat_map(|&th| g.phi().iter().map(move |&ph| basis(th, ph)))
        .collect();
    let np = geom.npts();
    for i in 0..geom.nr() {
        for (p, e) in frames.iter().enumerate() {
            f(i, i * np + p, e);
        }
    }
}

pub(crate) fn to_cartesian<T: Real>(u: &ShellField<T>, geom: &ShellGeometry<T>) -> [Vec<T>; 3] {
    let n = u.w.len();
    let mut c = [vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n]];
    for_nodes(geom, |_, q, e| {
        for k in 0..3 {
            c[k][q] = u.w[q] * e[0][k] + u.u_theta[q] * e[1][k] + u.u_phi[q] * e[2][k];
        }
    });
    c
}

pub(crate) fn from_cartesian<T: Real>(c: &[Vec<T>; 3], geom: &ShellGeometry<T>) -> ShellField<T> {
    let mut u = ShellField::zeros(geom);
    for_nodes(geom, |_, q, e| {
        let dot = |b: &[T; 3]| c[0][q] * b[0] + c[1][q] * b[1] + c[2][q] * b[2];
        u.w[q] = dot(&e[0]);
        u.u_theta[q] = dot(&e[1]);
        u.u_phi[q] = dot(&e[2]);
    });
    u
}

/// Cartesian gradient `(∂_x f, ∂_y f, ∂_z f)` of a layer-stacked scalar.
pub fn cartesian_gradient<T: Real>(f: &[T], geom: &ShellGeometry<T>) -> Result<[Vec<T>; 3]> {
    let g = geom.grid();
    let np = geom.npts();
    let fr = geom.d_r(f);
    let n = f.len();
    let mut ft = vec![T::zero(); n];
    let mut fp = vec![T::zero(); n];
    for i in 0..geom.nr() {
        let s = analyze(&GridScalar::new(g, f[i * np..(i + 1) * np].to_vec())?, g)?;
        let (gr, _) = surface_grad(&s, g)?;
        ft[i * np..(i + 1) * np].copy_from_slice(&gr.u_theta);
        fp[i * np..(i + 1) * np].copy_from_slice(&gr.u_phi);
    }
    let mut out = [vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n]];
    for_nodes(geom, |i, q, e| {
        let r = geom.r()[i];
        let (a, b, c) = (fr[q], ft[q] / r, fp[q] / r);
        for k in 0..3 {
            out[k][q] = a * e[0][k] + b * e[1][k] + c * e[2][k];
        }
    });
    Ok(out)
}

/// `G[k][j] = ∂_j u_k` in Cartesian components at every node.
pub(crate) fn velocity_gradient<T: Real>(u: &ShellField<T>, geom: &ShellGeometry<T>) -> Result<[[Vec<T>; 3]; 3]> {
    let [cx, cy, cz] = to_cartesian(u, geom);
    Ok([
        cartesian_gradient(&cx, geom)?,
        cartesian_gradient(&cy, geom)?,
        cartesian_gradient(&cz, geom)?,
    ])
}

fn scalar_laplacian<T: Real>(f: &[T], geom: &ShellGeometry<T>) -> Result<Vec<T>> {
    let g = geom.grid();
    let np = geom.npts();
    let fr = geom.d_r(f);
    let frr = geom.d_r(&fr);
    let mut out = vec![T::zero(); f.len()];
    for i in 0..geom.nr() {
        let r = geom.r()[i];
        let s = analyze(&GridScalar::new(g, f[i * np..(i + 1) * np].to_vec())?, g)?;
        let lh = synthesize(&laplace_beltrami(&s), g)?;
        for p in 0..np {
            let q = i * np + p;
            out[q] = frr[q] + T::of(2.0) * fr[q] / r + lh.values()[p] / (r * r);
        }
    }
    Ok(out)
}

/// Vector Laplacian through the scalar Laplacians of the Cartesian components.
pub fn vector_laplacian<T: Real>(u: &ShellField<T>, geom: &ShellGeometry<T>) -> Result<ShellField<T>> {
    u.check(geom)?;
    let c = to_cartesian(u, geom);
    let l = [
        scalar_laplacian(&c[0], geom)?,
        scalar_laplacian(&c[1], geom)?,
        scalar_laplacian(&c[2], geom)?,
    ];
    Ok(from_cartesian(&l, geom))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport<T> {
    /// `‖u‖²_{L²(Ω)}`
    pub energy: T,
    /// `‖∇u‖²_{L²(Ω)}`
    pub grad_norm_sq: T,
    /// `‖S‖²_{L²(Ω)}`, `S = ∇u + (∇u)ᵀ`
    pub stress_norm_sq: T,
}

pub fn energy_report<T: Real>(u: &ShellField<T>, geom: &ShellGeometry<T>) -> Result<EnergyReport<T>> {
    u.check(geom)?;
    let g = velocity_gradient(u, geom)?;
    let n = u.w.len();
    let mut gsq = vec![T::zero(); n];
    let mut ssq = vec![T::zero(); n];
    for q in 0..n {
        for k in 0..3 {
            for j in 0..3 {
                let a = g[k][j][q];
                let s = a + g[j][k][q];
                gsq[q] += a * a;
                ssq[q] += s * s;
            }
        }
    }
    Ok(EnergyReport {
        energy: u.inner(u, geom),
        grad_norm_sq: geom.integrate(&gsq),
        stress_norm_sq: geom.integrate(&ssq),
    })
}
