use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::quantile_sorted;
use crate::{Error, Result};

pub const KDE_POINTS: usize = 512;

/// Density evaluated on an evenly spaced grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub x: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
}

impl DensityCurve {
    /// Trapezoidal integral over the evaluation grid.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.x, &self.density)
    }

    /// Linear interpolation, zero outside the grid.
    pub fn density_at(&self, x: f64) -> f64 {
        let (first, last) = (self.x[0], self.x[self.x.len() - 1]);
        if x < first || x > last {
            return 0.0;
        }
        let step = (last - first) / (self.x.len() - 1) as f64;
        let pos = (x - first) / step;
        let i = (pos.floor() as usize).min(self.x.len() - 2);
        let t = pos - i as f64;
        self.density[i] * (1.0 - t) + self.density[i + 1] * t
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Silverman's rule, `0.9 · min(s, IQR / 1.34) · n^(-1/5)`, with `s` the
/// sample standard deviation. Falls back to `s` alone when the IQR is 0.
pub fn silverman_bandwidth(samples: &[f64]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::invalid("bandwidth needs at least 2 samples"));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    if !(var > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let sd = var.sqrt();
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * n.powf(-0.2))
}

/// Gaussian kernel density on [`KDE_POINTS`] points over
/// `[min - 3h, max + 3h]`, rescaled so the trapezoidal integral is 1.
pub fn kde(samples: &[f64], bandwidth: Option<f64>) -> Result<DensityCurve> {
    if samples.len() < 2 {
        return Err(Error::invalid("density estimate needs at least 2 samples"));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("samples must be finite"));
    }
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if lo == hi {
        return Err(Error::ZeroVariance);
    }
    let h = match bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(_) => return Err(Error::invalid("bandwidth must be positive")),
        None => silverman_bandwidth(samples)?,
    };
    let (start, end) = (lo - 3.0 * h, hi + 3.0 * h);
    let step = (end - start) / (KDE_POINTS - 1) as f64;
    let x: Vec<f64> = (0..KDE_POINTS).map(|i| start + i as f64 * step).collect();
    let norm = 1.0 / (samples.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let raw: Vec<f64> = x
        .par_iter()
        .map(|&xi| {
            let s: f64 = samples
                .iter()
                .map(|&v| {
                    let z = (xi - v) / h;
                    (-0.5 * z * z).exp()
                })
                .sum();
            s * norm
        })
        .collect();
    let total = trapezoid(&x, &raw);
    let density = raw.into_iter().map(|d| d / total).collect();
    Ok(DensityCurve { x, density, bandwidth: h })
}
