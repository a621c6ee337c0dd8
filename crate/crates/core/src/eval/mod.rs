//! Fidelity statistics of rendered fields against the bus voltages, density
//! curves for violin plots, and phase timings.

mod bench;
mod kde;
mod stats;

pub use bench::{bench, TimingReport};
pub use kde::{kde, silverman_bandwidth, DensityCurve, KDE_POINTS};
pub use stats::{kurtosis, summary, summary_with, visualized_samples, KurtosisConvention, SummaryStats};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::model::GridSnapshot;
use crate::pipeline::{prepare, Method};
use crate::render::RenderConfig;
use crate::{Error, Result};

/// The data column plus one column per evaluated method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub data: SummaryStats,
    pub methods: BTreeMap<String, SummaryStats>,
    #[serde(skip)]
    pub curves: Vec<ViolinPair>,
}

/// Visualized and actual density curves of one method.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolinPair {
    pub method: String,
    pub visualized: Option<DensityCurve>,
    pub actual: Option<DensityCurve>,
}

/// Renders each method and compares its pixel distribution with the data.
pub fn evaluate(snapshot: &GridSnapshot, config: &RenderConfig, methods: &[Method]) -> Result<EvalReport> {
    let voltages = snapshot.voltages();
    let data = summary(&voltages)?;
    let actual = optional_curve(&voltages, "data")?;
    let mut report = EvalReport {
        data,
        methods: BTreeMap::new(),
        curves: Vec::new(),
    };
    for &m in methods {
        let cfg = RenderConfig {
            method: m,
            ..config.clone()
        };
        let (field, _) = prepare(snapshot, &cfg)?.render_field(&voltages)?;
        let samples = visualized_samples(&field)?;
        report.methods.insert(m.name().to_owned(), summary(&samples)?);
        report.curves.push(ViolinPair {
            method: m.name().to_owned(),
            visualized: optional_curve(&samples, m.name())?,
            actual: actual.clone(),
        });
    }
    Ok(report)
}

fn optional_curve(samples: &[f64], what: &str) -> Result<Option<DensityCurve>> {
    match kde(samples, None) {
        Ok(c) => Ok(Some(c)),
        Err(Error::ZeroVariance) => {
            log::warn!("{what} values are constant; no density curve");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

impl EvalReport {
    pub fn stats_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Encode(e.to_string()))
    }

    /// Rows of `method,which,value,density`.
    pub fn violin_csv(&self) -> String {
        let mut s = String::from("method,which,value,density\n");
        for pair in &self.curves {
            for (which, curve) in [("visualized", &pair.visualized), ("actual", &pair.actual)] {
                if let Some(c) = curve {
                    for (x, d) in c.x.iter().zip(&c.density) {
                        let _ = writeln!(s, "{},{which},{x},{d}", pair.method);
                    }
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{gen_synthetic, Profile};

    #[test]
    fn report_has_all_keys() {
        let snap = gen_synthetic(200, 1, Profile::Uniform).unwrap();
        let report = evaluate(&snap, &RenderConfig::default(), &[Method::Contour, Method::Voronoi]).unwrap();
        let json: serde_json::Value = serde_json::from_str(&report.stats_json().unwrap()).unwrap();
        for key in ["median", "kurtosis", "sd", "min", "max", "count"] {
            assert!(json["data"].get(key).is_some());
            assert!(json["methods"]["contour"].get(key).is_some());
        }
        let csv = report.violin_csv();
        assert_eq!(csv.lines().count(), 1 + 2 * 2 * KDE_POINTS);
        assert!(csv.lines().nth(1).unwrap().starts_with("contour,visualized,"));
    }

    #[test]
    fn constant_data_reports_null_kurtosis() {
        let snap = gen_synthetic(50, 2, Profile::Uniform).unwrap();
        let flat = snap.with_voltages(&vec![1.0; snap.len()]).unwrap();
        let report = evaluate(&flat, &RenderConfig::default(), &Method::ALL).unwrap();
        assert_eq!(report.data.kurtosis, None);
        for s in report.methods.values() {
            assert_eq!((s.min, s.max, s.median), (1.0, 1.0, 1.0));
        }
        assert_eq!(report.violin_csv().lines().count(), 1);
    }
}
