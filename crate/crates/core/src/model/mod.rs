//! Grid snapshot model: bus records, preprocessing, projection to planar
//! meters and a synthetic feeder generator.

mod io;
mod preprocess;
mod projection;
mod synthetic;

pub use io::{load_buses, load_buses_with, load_edges, load_snapshot, write_snapshot, RawEdgeRecord};
pub use preprocess::preprocess;
pub use projection::{project, Projection, EARTH_RADIUS_M};
pub use synthetic::{gen_synthetic, Profile, SyntheticParams};
pub use preprocess::ZERO_VOLTAGE_THRESHOLD;

use serde::{Deserialize, Serialize};

use crate::geometry::{Extent, Point};

/// One row of `buses.csv` before filtering and phase averaging.
///
/// `lon`/`lat` hold planar meters instead of degrees when the file was
/// loaded with [`CoordKind::Meters`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawBusRecord {
    pub bus_id: String,
    pub lon: f64,
    pub lat: f64,
    pub voltage: f64,
}

impl RawBusRecord {
    pub fn new(bus_id: impl Into<String>, lon: f64, lat: f64, voltage: f64) -> Self {
        RawBusRecord {
            bus_id: bus_id.into(),
            lon,
            lat,
            voltage,
        }
    }
}

/// How the coordinate columns of `buses.csv` are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordKind {
    #[default]
    LonLat,
    Meters,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bus {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    /// Per-unit voltage.
    pub voltage: f64,
}

impl Bus {
    pub fn pos(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Undirected edge stored with `from < to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
}

impl Edge {
    /// Canonical edge, or `None` for a self-loop.
    pub fn new(a: usize, b: usize) -> Option<Edge> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Edge { from: a, to: b }),
            std::cmp::Ordering::Greater => Some(Edge { from: b, to: a }),
            std::cmp::Ordering::Equal => None,
        }
    }
}

/// Buses in planar meters plus the connecting edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSnapshot {
    pub buses: Vec<Bus>,
    pub edges: Vec<Edge>,
    pub extent: Extent,
    /// `None` when the input was already in planar meters.
    pub projection: Option<Projection>,
    /// Original `bus_id` of every bus, indexed by dense id.
    pub names: Vec<String>,
}

impl GridSnapshot {
    /// Builds a snapshot from planar positions and voltages.
    ///
    /// Edges are canonicalized and deduplicated; self-loops are dropped.
    pub fn from_parts(
        positions: &[Point],
        voltages: &[f64],
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> crate::Result<GridSnapshot> {
        if positions.is_empty() {
            return Err(crate::Error::EmptyDataset);
        }
        if positions.len() != voltages.len() {
            return Err(crate::Error::invalid(format!(
                "{} positions but {} voltages",
                positions.len(),
                voltages.len()
            )));
        }
        let buses: Vec<Bus> = positions
            .iter()
            .zip(voltages)
            .enumerate()
            .map(|(id, (p, &v))| Bus {
                id,
                x: p.x,
                y: p.y,
                voltage: v,
            })
            .collect();
        let names = (0..buses.len()).map(|i| format!("b{i}")).collect();
        let mut snap = GridSnapshot {
            extent: Extent::from_points(positions.iter().copied()).expect("nonempty"),
            buses,
            edges: Vec::new(),
            projection: None,
            names,
        };
        snap.set_edges(edges)?;
        Ok(snap)
    }

    pub fn set_edges(&mut self, edges: impl IntoIterator<Item = (usize, usize)>) -> crate::Result<()> {
        let n = self.buses.len();
        let mut out = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(crate::Error::invalid(format!(
                    "edge ({a}, {b}) references a bus outside 0..{n}"
                )));
            }
            if let Some(e) = Edge::new(a, b) {
                out.push(e);
            }
        }
        out.sort_unstable();
        out.dedup();
        self.edges = out;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.buses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buses.is_empty()
    }

    pub fn positions(&self) -> Vec<Point> {
        self.buses.iter().map(Bus::pos).collect()
    }

    pub fn voltages(&self) -> Vec<f64> {
        self.buses.iter().map(|b| b.voltage).collect()
    }

    /// Copy of this snapshot carrying different voltages.
    pub fn with_voltages(&self, voltages: &[f64]) -> crate::Result<GridSnapshot> {
        if voltages.len() != self.buses.len() {
            return Err(crate::Error::invalid("voltage count does not match bus count"));
        }
        let mut out = self.clone();
        for (b, &v) in out.buses.iter_mut().zip(voltages) {
            b.voltage = v;
        }
        Ok(out)
    }

    pub fn segment(&self, e: Edge) -> (Point, Point) {
        (self.buses[e.from].pos(), self.buses[e.to].pos())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_canonical_and_deduplicated() {
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)];
        let snap = GridSnapshot::from_parts(&pts, &[1.0; 3], [(1, 0), (0, 1), (2, 2), (1, 2)]).unwrap();
        assert_eq!(snap.edges, vec![Edge { from: 0, to: 1 }, Edge { from: 1, to: 2 }]);
    }

    #[test]
    fn out_of_range_edge_is_rejected() {
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
        assert!(GridSnapshot::from_parts(&pts, &[1.0; 2], [(0, 5)]).is_err());
    }

    #[test]
    fn extent_covers_buses() {
        let pts = [Point::new(-3.0, 2.0), Point::new(4.0, -1.0)];
        let snap = GridSnapshot::from_parts(&pts, &[1.0; 2], []).unwrap();
        assert!(snap.buses.iter().all(|b| snap.extent.contains(b.pos())));
    }
}
