use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::{Complex, Real};

/// Unnormalized complex 3D FFT on an `n³` array, axis `z` contiguous.
pub struct Fft3<T: Real> {
    n: usize,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
}

impl<T: Real> fmt::Debug for Fft3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fft3").field("n", &self.n).finish()
    }
}

impl<T: Real> Fft3<T> {
    pub fn new(n: usize) -> Self {
        let mut p = FftPlanner::new();
        Self { n, fwd: p.plan_fft_forward(n), inv: p.plan_fft_inverse(n) }
    }

    pub fn forward(&self, data: &mut [Complex<T>]) {
        self.run(&*self.fwd, data);
    }

    pub fn inverse(&self, data: &mut [Complex<T>]) {
        self.run(&*self.inv, data);
    }

    fn run(&self, plan: &dyn Fft<T>, data: &mut [Complex<T>]) {
        let n = self.n;
        assert_eq!(data.len(), n * n * n, "fft3 buffer length");
        let mut scratch = vec![Complex::default(); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        let mut line = vec![Complex::default(); n];
        for stride in [n, n * n] {
            for base in 0..n * n {
                let start = (base / stride) * stride * n + base % stride;
                for (t, l) in line.iter_mut().enumerate() {
                    *l = data[start + t * stride];
                }
                plan.process_with_scratch(&mut line, &mut scratch);
                for (t, l) in line.iter().enumerate() {
                    data[start + t * stride] = *l;
                }
            }
        }
    }
}
