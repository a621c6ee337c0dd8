use serde::{Deserialize, Serialize};

use super::{Bus, GridSnapshot, RawBusRecord};
use crate::geometry::{Extent, Point};
use crate::{Error, Result};

pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Equirectangular projection about a reference longitude/latitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub lon0: f64,
    pub lat0: f64,
}

impl Projection {
    pub fn new(lon0: f64, lat0: f64) -> Self {
        Projection { lon0, lat0 }
    }

    pub fn forward(&self, lon: f64, lat: f64) -> Point {
        let k = EARTH_RADIUS_M * self.lat0.to_radians().cos();
        Point::new(
            k * (lon - self.lon0).to_radians(),
            EARTH_RADIUS_M * (lat - self.lat0).to_radians(),
        )
    }

    /// Returns `(lon, lat)` in degrees.
    pub fn inverse(&self, p: Point) -> (f64, f64) {
        let k = EARTH_RADIUS_M * self.lat0.to_radians().cos();
        (
            self.lon0 + (p.x / k).to_degrees(),
            self.lat0 + (p.y / EARTH_RADIUS_M).to_degrees(),
        )
    }
}

/// Projects preprocessed records to planar meters.
///
/// The reference defaults to the mean longitude/latitude of the records.
/// Record order defines the dense bus ids. Edges are attached separately.
pub fn project(records: &[RawBusRecord], reference: Option<(f64, f64)>) -> Result<GridSnapshot> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let (lon0, lat0) = reference.unwrap_or_else(|| {
        let n = records.len() as f64;
        let lon = records.iter().map(|r| r.lon).sum::<f64>() / n;
        let lat = records.iter().map(|r| r.lat).sum::<f64>() / n;
        (lon, lat)
    });
    let proj = Projection::new(lon0, lat0);
    let points: Vec<Point> = records.iter().map(|r| proj.forward(r.lon, r.lat)).collect();
    let mut snap = planar(records, &points)?;
    snap.projection = Some(proj);
    Ok(snap)
}

/// Uses the record coordinates as planar meters unchanged.
pub(crate) fn planar(records: &[RawBusRecord], points: &[Point]) -> Result<GridSnapshot> {
    let extent = Extent::from_points(points.iter().copied()).ok_or(Error::EmptyDataset)?;
    if extent.width() == 0.0 && extent.height() == 0.0 {
        return Err(Error::DegenerateExtent);
    }
    let buses = records
        .iter()
        .zip(points)
        .enumerate()
        .map(|(id, (r, p))| Bus {
            id,
            x: p.x,
            y: p.y,
            voltage: r.voltage,
        })
        .collect();
    Ok(GridSnapshot {
        buses,
        edges: Vec::new(),
        extent,
        projection: None,
        names: records.iter().map(|r| r.bus_id.clone()).collect(),
    })
}
