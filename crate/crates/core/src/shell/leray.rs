use num_traits::Zero;
use rustfft::num_complex::Complex;

use crate::error::{Result, RotwaveError};
use crate::linalg::{lstsq, Lu};
use crate::Real;

use super::{ShellField, ShellGeometry, ShellSpectral};

/// Leray split `u = Pu + ∇f` with `Δf = div u`, `∂_r f = w` on both
/// boundaries and `∫_Ω f = 0`. Per `(l, m)` this is the two-point problem
/// `(r² f')' − l(l+1) f = r² div u`, solved by Chebyshev collocation.
pub fn shell_leray_split<T: Real>(
    u: &ShellField<T>,
    geom: &ShellGeometry<T>,
) -> Result<(ShellField<T>, ShellField<T>)> {
    let spec = ShellSpectral::analyze(u, geom)?;
    let n = geom.nr();
    let lmax = geom.grid().lmax();
    let r = geom.r();
    let d = geom.diff_matrix();
    let mut base = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let d2: T = (0..n).map(|k| d[i * n + k] * d[k * n + j]).sum();
            base[i * n + j] = r[i] * r[i] * d2 + T::of(2.0) * r[i] * d[i * n + j];
        }
    }
    let mut q = ShellSpectral::zeros(n, lmax);
    for l in 0..=lmax {
        let ll = T::of_usize(l * (l + 1));
        let mut a = base.clone();
        for i in 0..n {
            a[i * n + i] -= ll;
        }
        for j in 0..n {
            a[j] = d[j];
            a[(n - 1) * n + j] = d[(n - 1) * n + j];
        }
        let lu = if l > 0 { Some(Lu::new(a.clone(), n)?) } else { None };
        let mut gauge = a.clone();
        if l == 0 {
            gauge.extend((0..n).map(|j| geom.radial_weights()[j] * r[j] * r[j]));
        }
        for m in -(l as i64)..=l as i64 {
            let w: Vec<Complex<T>> = (0..n).map(|i| spec.w[i].get(l, m)).collect();
            let mut rhs: Vec<Complex<T>> = (0..n)
                .map(|i| {
                    let drw: Complex<T> = (0..n).fold(Complex::zero(), |s, j| s + w[j] * (d[i * n + j] * r[j] * r[j]));
                    drw - spec.phi[i].get(l, m) * (ll * r[i])
                })
                .collect();
            rhs[0] = w[0];
            rhs[n - 1] = w[n - 1];
            let solve = |b: Vec<T>| -> Result<Vec<T>> {
                match &lu {
                    Some(lu) => Ok(lu.solve(&b)),
                    None => {
                        let mut bb = b;
                        bb.push(T::zero());
                        lstsq(&gauge, n + 1, n, &bb)
                    }
                }
            };
            let fr = solve(rhs.iter().map(|c| c.re).collect())?;
            let fi = solve(rhs.iter().map(|c| c.im).collect())?;
            let f: Vec<Complex<T>> = fr.iter().zip(&fi).map(|(&a, &b)| Complex::new(a, b)).collect();
            if l > 0 {
                let scale = rhs.iter().map(|c| c.norm()).fold(T::zero(), T::max) + T::one();
                let mut worst = T::zero();
                for i in 0..n {
                    let af: Complex<T> = (0..n).fold(Complex::zero(), |s, j| s + f[j] * a[i * n + j]);
                    worst = worst.max((af - rhs[i]).norm());
                }
                if !(worst <= T::of(1e-6) * scale) {
                    return Err(RotwaveError::NumericFailure {
                        time: 0.0,
                        detail: format!("Neumann solve for l = {l}, m = {m} left residual {worst}"),
                    });
                }
            }
            for i in 0..n {
                let df = (0..n).fold(Complex::zero(), |s, j| s + f[j] * d[i * n + j]);
                q.w[i].set(l, m, df);
                q.phi[i].set(l, m, f[i] / r[i]);
            }
        }
    }
    let qu = q.synthesize(geom)?;
    Ok((u.axpy(-T::one(), &qu), qu))
}

pub fn shell_leray_project<T: Real>(u: &ShellField<T>, geom: &ShellGeometry<T>) -> Result<ShellField<T>> {
    Ok(shell_leray_split(u, geom)?.0)
}

