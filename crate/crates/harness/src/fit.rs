use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Defects below this are treated as exact zeros and left out of the fit.
pub const ZERO_DEFECT: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Least squares of `ln y` on `ln x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<Fit> {
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0) || !(*y >= 0.0) || !x.is_finite() || !y.is_finite()) {
        return Err(HarnessError::InvalidArgument(format!("fit needs positive finite data, got ({x}, {y})")));
    }
    let kept: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| {
            let keep = y >= ZERO_DEFECT;
            if !keep {
                log::warn!("dropping zero defect {y:e} at x = {x}");
            }
            keep
        })
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if kept.len() < 3 {
        return Err(HarnessError::InvalidArgument(format!("fit needs at least 3 usable points, got {}", kept.len())));
    }
    let n = kept.len() as f64;
    let mx = kept.iter().map(|p| p.0).sum::<f64>() / n;
    let my = kept.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = kept.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = kept.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = kept.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(HarnessError::InvalidArgument("fit needs distinct x values".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok(Fit { slope, intercept: my - slope * mx, r_squared, points: kept.len() })
}
