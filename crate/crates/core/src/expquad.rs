//! Weights for `∫_0^h e^{λs} q(s) ds` where `q` is the quadratic through
//! frame values at `0, h/2, h`, rewritten against physical values.

use num_traits::{One, Zero};
use rustfft::num_complex::Complex;

use crate::Real;

/// `I_k(z) = ∫_0^1 τ^k e^{zτ} dτ` for `k = 0, 1, 2`.
fn moments<T: Real>(z: Complex<T>) -> [Complex<T>; 3] {
    if z.norm() < T::one() {
        let mut out = [Complex::zero(); 3];
        let mut term = Complex::<T>::one();
        for n in 0..30 {
            for (k, o) in out.iter_mut().enumerate() {
                *o += term / T::of_usize(n + k + 1);
            }
            term = term * z / T::of_usize(n + 1);
        }
        out
    } else {
        let ez = z.exp();
        let i0 = (ez - Complex::one()) / z;
        let i1 = (ez - i0) / z;
        let i2 = (ez - i1 * T::of(2.0)) / z;
        [i0, i1, i2]
    }
}

/// Weights `(ω₀, ω_½, ω₁)` such that
/// `∫_{t}^{t+h} x ≈ h (ω₀ x(t) + ω_½ x(t+h/2) + ω₁ x(t+h))` is exact whenever
/// `x(t+s) = e^{zs/h} q(s)` with `q` quadratic. Reduces to Simpson at `z = 0`.
pub fn quadratic_weights<T: Real>(z: Complex<T>) -> [Complex<T>; 3] {
    let [i0, i1, i2] = moments(z);
    let two = T::of(2.0);
    let w0 = i2 * two - i1 * T::of(3.0) + i0;
    let wm = (i1 - i2) * T::of(4.0);
    let w1 = i2 * two - i1;
    [w0, wm * (-z / two).exp(), w1 * (-z).exp()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(z: Complex<f64>, f: impl Fn(f64) -> f64) -> Complex<f64> {
        let n = 20000;
        let mut s = Complex::new(0.0, 0.0);
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64;
            s += (z * t).exp() * f(t);
        }
        s / n as f64
    }

    #[test]
    fn simpson_limit() {
        let w = quadratic_weights(Complex::<f64>::new(0.0, 0.0));
        assert!((w[0].re - 1.0 / 6.0).abs() < 1e-15);
        assert!((w[1].re - 2.0 / 3.0).abs() < 1e-15);
        assert!((w[2].re - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_modulated_quadratics() {
        for z in [
            Complex::new(0.3, 0.0),
            Complex::new(0.0, 0.9),
            Complex::new(-0.2, 4.0),
            Complex::new(0.0, 40.0),
            Complex::new(-3.0, 1.0),
        ] {
            let q = |t: f64| 1.0 + 2.0 * t - 3.0 * t * t;
            let w = quadratic_weights(z);
            let x = |t: f64| (z * t).exp() * q(t);
            let approx = w[0] * x(0.0) + w[1] * x(0.5) + w[2] * x(1.0);
            let exact = brute(z, q);
            assert!((approx - exact).norm() < 1e-8, "{z}");
        }
    }

    #[test]
    fn series_and_closed_form_agree_at_switch() {
        let a = quadratic_weights(Complex::new(0.0, 0.999_999_9));
        let b = quadratic_weights(Complex::new(0.0, 1.000_000_1));
        for k in 0..3 {
            assert!((a[k] - b[k]).norm() < 1e-6);
        }
    }
}
