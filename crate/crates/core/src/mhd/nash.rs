//! Nash inequality `‖f‖²_∞ ≤ C‖f‖₂‖f'‖₂` and its anisotropic form
//! `‖g‖_{L^∞_z H^m_{xy}} ≤ C‖g‖^{1/2}_{H^m}‖∂_z g‖^{1/2}_{H^m}` evaluated by
//! quadrature on periodic samples.

use num_traits::{Float, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;

use super::BoxGrid;
use crate::error::invalid;
use crate::{Complex, Real, Result};

/// `‖f‖²_∞ / (‖f‖₂ ‖f'‖₂)` for samples of a periodic `f` over `[0, length)`;
/// the derivative is spectral. Zero for `f ≡ 0`.
pub fn nash_ratio_1d<T: Real>(f: &[T], length: T) -> T {
    let n = f.len();
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex<T>> = f.iter().map(|&x| Complex::new(x, T::zero())).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    let w = T::of(2.0) * T::PI() / length;
    for (i, c) in buf.iter_mut().enumerate() {
        let k = if 2 * i < n { i as i64 } else if 2 * i == n { 0 } else { i as i64 - n as i64 };
        *c = *c * Complex::new(T::zero(), w * T::of_i64(k) / T::of_usize(n));
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let h = length / T::of_usize(n);
    let l2 = |v: &mut dyn Iterator<Item = T>| (v.map(|x| x * x).sum::<T>() * h).sqrt();
    let sup = f.iter().fold(T::zero(), |m, &x| m.max(Float::abs(x)));
    let a = l2(&mut f.iter().copied());
    let b = l2(&mut buf.iter().map(|c| c.re));
    if sup == T::zero() { T::zero() } else { sup * sup / (a * b) }
}

/// Nash ratio of `e^{−x²/2}` sampled on `[−half_width, half_width)`.
pub fn gaussian_nash_ratio<T: Real>(half_width: T, npts: usize) -> T {
    let h = T::of(2.0) * half_width / T::of_usize(npts);
    let f: Vec<T> = (0..npts)
        .map(|i| {
            let x = -half_width + h * T::of_usize(i);
            (-x * x / T::of(2.0)).exp()
        })
        .collect();
    nash_ratio_1d(&f, T::of(2.0) * half_width)
}

fn z_mean_defect<T: Real>(c: &[Complex<T>], grid: &BoxGrid<T>) -> T {
    (0..grid.len()).filter(|&q| grid.xi(q)[2] == 0).fold(T::zero(), |m, q| m.max(c[q].norm()))
}

/// Zero the `ξ₃ = 0` modes of a scalar field given by samples.
pub fn remove_z_mean<T: Real>(g: &[T], grid: &BoxGrid<T>) -> Vec<T> {
    let mut c = grid.to_spectral(g);
    for (q, z) in c.iter_mut().enumerate() {
        if grid.xi(q)[2] == 0 {
            *z = Complex::zero();
        }
    }
    grid.to_physical(&c)
}

/// `‖g‖_{L^∞_z H^m_{xy}} / (‖g‖_{H^m} ‖∂_z g‖_{H^m})^{1/2}` for a scalar with
/// zero mean in `z`. Zero for `g ≡ 0`.
pub fn lemma_ratio<T: Real>(g: &[T], m: u32, grid: &BoxGrid<T>) -> Result<T> {
    if g.len() != grid.len() {
        return invalid(format!("field has {} samples, grid has {}", g.len(), grid.len()));
    }
    let c = grid.to_spectral(g);
    let scale = c.iter().fold(T::zero(), |a, z| a.max(z.norm()));
    if z_mean_defect(&c, grid) > T::of(1e-12) * T::one().max(scale) {
        return invalid("field must have zero mean in z");
    }
    let n = grid.n();
    let two_pi = T::of(2.0) * T::PI();
    let mt = T::of_usize(m as usize);
    let inv = FftPlanner::new().plan_fft_inverse(n);
    let mut slice = vec![T::zero(); n];
    let mut line = vec![Complex::zero(); n];
    let (mut hm, mut hz) = (T::zero(), T::zero());
    for ij in 0..n * n {
        let k = grid.xi_real(ij * n);
        let wxy = (T::one() + k[0] * k[0] + k[1] * k[1]).powf(mt);
        for (t, l) in line.iter_mut().enumerate() {
            let q = ij * n + t;
            let kz = grid.xi_real(q)[2];
            let w = (T::one() + k[0] * k[0] + k[1] * k[1] + kz * kz).powf(mt);
            hm += w * c[q].norm_sqr();
            hz += w * kz * kz * c[q].norm_sqr();
            *l = c[q];
        }
        inv.process(&mut line);
        for (s, l) in slice.iter_mut().zip(&line) {
            *s += wxy * l.norm_sqr();
        }
    }
    let vol = two_pi.powi(3);
    let lhs = (slice.iter().fold(T::zero(), |a, &b| a.max(b)) * two_pi * two_pi).sqrt();
    let rhs = ((hm * vol).sqrt() * (hz * vol).sqrt()).sqrt();
    Ok(if lhs == T::zero() { T::zero() } else { lhs / rhs })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NashEntry {
    pub name: String,
    /// Nash ratio on the `z`-line through the maximum of `|g|`.
    pub nash: f64,
    pub lemma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NashReport {
    pub entries: Vec<NashEntry>,
    pub c_check: f64,
}

impl NashReport {
    pub fn max_nash(&self) -> f64 {
        self.entries.iter().map(|e| e.nash).fold(0.0, f64::max)
    }

    pub fn max_lemma(&self) -> f64 {
        self.entries.iter().map(|e| e.lemma).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_nash() <= self.c_check && self.max_lemma() <= self.c_check
    }
}

pub fn anisotropic_norm_checks<T: Real>(
    corpus: &[(String, Vec<T>)],
    m: u32,
    c_check: f64,
    grid: &BoxGrid<T>,
) -> Result<NashReport> {
    let n = grid.n();
    let mut entries = Vec::with_capacity(corpus.len());
    for (name, g) in corpus {
        let lemma = lemma_ratio(g, m, grid)?.f64();
        let arg = (0..g.len()).fold(0, |b, q| if Float::abs(g[q]) > Float::abs(g[b]) { q } else { b });
        let start = arg - arg % n;
        let nash = nash_ratio_1d(&g[start..start + n], T::of(2.0) * T::PI()).f64();
        entries.push(NashEntry { name: name.clone(), nash, lemma });
    }
    Ok(NashReport { entries, c_check })
}

/// Twenty-five smooth scalars on the box, each with zero mean in `z`.
pub fn standard_corpus<T: Real>(grid: &BoxGrid<T>, seed: u64) -> Vec<(String, Vec<T>)> {
    let n = grid.n();
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let sample = |f: &dyn Fn(f64, f64, f64) -> f64| -> Vec<T> {
        let raw: Vec<T> = (0..grid.len())
            .map(|q| T::of(f(h * (q / (n * n)) as f64, h * ((q / n) % n) as f64, h * (q % n) as f64)))
            .collect();
        remove_z_mean(&raw, grid)
    };
    let pi = std::f64::consts::PI;
    let mut out: Vec<(String, Vec<T>)> = vec![
        ("sin z".into(), sample(&|_, _, z| z.sin())),
        ("cos 3z".into(), sample(&|_, _, z| (3.0 * z).cos())),
        ("sin x sin z".into(), sample(&|x, _, z| x.sin() * z.sin())),
        ("cos(x+y) sin 2z".into(), sample(&|x, y, z| (x + y).cos() * (2.0 * z).sin())),
        ("exp cos z".into(), sample(&|_, _, z| z.cos().exp())),
        ("exp(sin 2z) cos x".into(), sample(&|x, _, z| (2.0 * z).sin().exp() * x.cos())),
        ("1/(1.5+cos z)".into(), sample(&|_, _, z| 1.0 / (1.5 + z.cos()))),
        ("sin(z + cos x)".into(), sample(&|x, _, z| (z + x.cos()).sin())),
    ];
    for s in [0.3, 0.5, 0.8] {
        out.push((format!("z bump {s}"), sample(&|_, _, z| (-(z - pi).powi(2) / (2.0 * s * s)).exp())));
    }
    for s in [0.5, 0.8] {
        let r2 = |x: f64, y: f64, z: f64| (x - pi).powi(2) + (y - pi).powi(2) + (z - pi).powi(2);
        out.push((format!("3d bump {s}"), sample(&|x, y, z| (-r2(x, y, z) / (2.0 * s * s)).exp())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kcap = (n / 2 - 1) as i64;
    for (i, (kmax, slope)) in [(2, 0.0), (3, 1.0), (4, 2.0), (6, 2.0), (2, 1.0), (3, 2.0), (4, 3.0), (6, 3.0), (3, 0.0), (4, 1.0), (5, 2.0), (6, 4.0)]
        .into_iter()
        .enumerate()
    {
        let kmax = kmax.min(kcap);
        let mut c = vec![Complex::<T>::zero(); grid.len()];
        for (q, z) in c.iter_mut().enumerate() {
            let xi = grid.xi(q);
            if xi[2] == 0 || xi.iter().any(|x| x.abs() > kmax) {
                continue;
            }
            let k2 = xi.iter().map(|x| (x * x) as f64).sum::<f64>();
            let amp = (1.0 + k2).powf(-slope / 2.0);
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *z = Complex::new(T::of(re * amp), T::of(im * amp));
        }
        let v = grid.to_physical(&c);
        out.push((format!("random {i} k{kmax} s{slope}"), remove_z_mean(&v, grid)));
    }
    out
}
