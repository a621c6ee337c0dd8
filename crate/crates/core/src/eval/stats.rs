use serde::{Deserialize, Serialize};

use crate::field::ScalarField;
use crate::{Error, Result};

/// Which fourth-moment ratio [`summary`] reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KurtosisConvention {
    /// `m4 / m2²`, 3 for a normal distribution.
    #[default]
    Pearson,
    /// Pearson minus 3.
    Excess,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub median: f64,
    /// `None` when the samples have zero variance.
    pub kurtosis: Option<f64>,
    /// Population standard deviation.
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

pub fn summary(samples: &[f64]) -> Result<SummaryStats> {
    summary_with(samples, KurtosisConvention::Pearson)
}

pub fn summary_with(samples: &[f64], convention: KurtosisConvention) -> Result<SummaryStats> {
    if samples.is_empty() {
        return Err(Error::EmptyField);
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("samples must be finite"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let (m2, m4) = central_moments(samples);
    Ok(SummaryStats {
        median,
        kurtosis: kurtosis_from(m2, m4, convention),
        sd: m2.sqrt(),
        min: sorted[0],
        max: sorted[n - 1],
        count: n,
    })
}

pub fn kurtosis(samples: &[f64], convention: KurtosisConvention) -> Option<f64> {
    if samples.len() < 2 {
        return None;
    }
    let (m2, m4) = central_moments(samples);
    kurtosis_from(m2, m4, convention)
}

fn kurtosis_from(m2: f64, m4: f64, convention: KurtosisConvention) -> Option<f64> {
    if m2 <= 0.0 {
        return None;
    }
    let k = m4 / (m2 * m2);
    Some(match convention {
        KurtosisConvention::Pearson => k,
        KurtosisConvention::Excess => k - 3.0,
    })
}

/// Population second and fourth central moments.
fn central_moments(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let (s2, s4) = samples.iter().fold((0.0, 0.0), |(s2, s4), &x| {
        let d2 = (x - mean) * (x - mean);
        (s2 + d2, s4 + d2 * d2)
    });
    (s2 / n, s4 / n)
}

/// One sample per defined cell, so every pixel carries equal weight.
pub fn visualized_samples(field: &ScalarField) -> Result<Vec<f64>> {
    let out = field.defined_values();
    if out.is_empty() {
        return Err(Error::EmptyField);
    }
    Ok(out)
}

/// Linear-interpolated quantile of sorted data, `q` in [0, 1].
pub(crate) fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}
