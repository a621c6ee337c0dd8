use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::model::GridSnapshot;
use crate::pipeline::{prepare, Method};
use crate::render::RenderConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub method: String,
    /// Median time to build indexes, graph neighborhoods, masks and
    /// tessellation geometry.
    pub pre_processing_seconds: f64,
    /// Median time to evaluate the field and produce the colored image.
    pub rendering_seconds: f64,
    pub repeats: usize,
    pub buses: usize,
    pub cells: usize,
}

/// Times both phases `repeats` times and reports the medians.
pub fn bench(method: Method, snapshot: &GridSnapshot, config: &RenderConfig, repeats: usize) -> Result<TimingReport> {
    if repeats == 0 {
        return Err(Error::invalid("repeats must be at least 1"));
    }
    let cfg = RenderConfig {
        method,
        ..config.clone()
    };
    let voltages = snapshot.voltages();
    let mut pre = Vec::with_capacity(repeats);
    let mut ren = Vec::with_capacity(repeats);
    let mut cells = 0;
    for _ in 0..repeats {
        let t0 = Instant::now();
        let prepared = prepare(snapshot, &cfg)?;
        let t1 = Instant::now();
        let out = prepared.render(&voltages)?;
        let t2 = Instant::now();
        std::hint::black_box(&out.image);
        cells = prepared.grid.len();
        pre.push((t1 - t0).as_secs_f64());
        ren.push((t2 - t1).as_secs_f64());
    }
    Ok(TimingReport {
        method: method.name().to_owned(),
        pre_processing_seconds: median(&mut pre),
        rendering_seconds: median(&mut ren),
        repeats,
        buses: snapshot.len(),
        cells,
    })
}

pub(crate) fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
