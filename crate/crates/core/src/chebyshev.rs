//! Chebyshev–Gauss–Lobatto collocation on an interval.

use std::f64::consts::PI;

/// Ascending CGL nodes on `[a, b]`, Clenshaw–Curtis weights and the
/// differentiation matrix (row-major).
#[derive(Debug, Clone)]
pub struct Cgl {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub diff: Vec<f64>,
}

impl Cgl {
    pub fn new(n: usize, a: f64, b: f64) -> Self {
        assert!(n >= 2, "need at least two nodes");
        let nn = n - 1;
        let x: Vec<f64> = (0..n).map(|i| -(PI * i as f64 / nn as f64).cos()).collect();
        let half = 0.5 * (b - a);
        let nodes = x.iter().map(|&t| a + half * (t + 1.0)).collect();

        let mut w = vec![0.0; n];
        if nn == 1 {
            w = vec![1.0, 1.0];
        } else {
            let mut v = vec![1.0; nn - 1];
            let theta = |k: usize| PI * k as f64 / nn as f64;
            if nn % 2 == 0 {
                w[0] = 1.0 / (nn * nn - 1) as f64;
                w[nn] = w[0];
                for k in 1..nn / 2 {
                    for (i, vi) in v.iter_mut().enumerate() {
                        *vi -= 2.0 * (2.0 * k as f64 * theta(i + 1)).cos() / (4 * k * k - 1) as f64;
                    }
                }
                for (i, vi) in v.iter_mut().enumerate() {
                    *vi -= (nn as f64 * theta(i + 1)).cos() / (nn * nn - 1) as f64;
                }
            } else {
                w[0] = 1.0 / (nn * nn) as f64;
                w[nn] = w[0];
                for k in 1..=(nn - 1) / 2 {
                    for (i, vi) in v.iter_mut().enumerate() {
                        *vi -= 2.0 * (2.0 * k as f64 * theta(i + 1)).cos() / (4 * k * k - 1) as f64;
                    }
                }
            }
            for i in 1..nn {
                w[i] = 2.0 * v[i - 1] / nn as f64;
            }
        }
        let weights = w.iter().map(|&v| v * half).collect();

        let c: Vec<f64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                if i == 0 || i == nn {
                    0.5 * s
                } else {
                    s
                }
            })
            .collect();
        let mut diff = vec![0.0; n * n];
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                if i != j {
                    let d = (c[j] / c[i]) / (x[i] - x[j]);
                    diff[i * n + j] = d / half;
                    row += d;
                }
            }
            diff[i * n + i] = -row / half;
        }
        Self { nodes, weights, diff }
    }
}
