use serde::{Deserialize, Serialize};

/// Bus count, mean and population standard deviation of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
}

impl CellStats {
    /// Two-pass mean and population SD. `None` for an empty slice.
    ///
    /// The mean is clamped to the value range, so a cell of equal values
    /// reports exactly that value.
    pub fn from_values(values: &[f64]) -> Option<CellStats> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let mean = (values.iter().sum::<f64>() / n).clamp(lo, hi);
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Some(CellStats {
            count: values.len(),
            mean,
            sd: var.sqrt(),
        })
    }
}
