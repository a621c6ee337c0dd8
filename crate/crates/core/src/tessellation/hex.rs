//! Layered flat-top hexagonal grids in axial coordinates.
//!
//! All layers share the projection origin as the center of hex (0, 0). They
//! do not nest; the finer layers are simply drawn over the coarser ones.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::CellStats;
use crate::geometry::Point;
use crate::model::GridSnapshot;
use crate::{Error, Result};

/// Coarse hex area used to derive the default edge lengths.
pub const DEFAULT_COARSE_AREA_M2: f64 = 15_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HexCoord {
    pub q: i64,
    pub r: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexLayer {
    /// 0 is the coarsest layer.
    pub level: u8,
    pub edge: f64,
    pub cells: BTreeMap<HexCoord, CellStats>,
}

impl HexLayer {
    pub fn cell_area(&self) -> f64 {
        hex_area(self.edge)
    }

    pub fn center(&self, c: HexCoord) -> Point {
        hex_center(c, self.edge)
    }

    pub fn polygon(&self, c: HexCoord) -> Vec<Point> {
        hex_polygon(c, self.edge)
    }
}

pub fn hex_area(edge: f64) -> f64 {
    1.5 * 3f64.sqrt() * edge * edge
}

/// Edge length of a hexagon with the given area.
pub fn edge_for_area(area: f64) -> f64 {
    (area / hex_area(1.0)).sqrt()
}

/// `levels` edge lengths starting at `coarse_edge`, each finer one scaled
/// by 1/√7 so the area drops by a factor of 7 per level.
pub fn default_edges(coarse_edge: f64, levels: usize) -> Vec<f64> {
    let ratio = 7f64.sqrt().recip();
    (0..levels).map(|l| coarse_edge * ratio.powi(l as i32)).collect()
}

pub fn hex_center(c: HexCoord, edge: f64) -> Point {
    let q = c.q as f64;
    let r = c.r as f64;
    Point::new(edge * 1.5 * q, edge * 3f64.sqrt() * (r + 0.5 * q))
}

/// Counter-clockwise ring starting at the east vertex.
pub fn hex_polygon(c: HexCoord, edge: f64) -> Vec<Point> {
    let o = hex_center(c, edge);
    (0..6)
        .map(|k| {
            let a = std::f64::consts::FRAC_PI_3 * k as f64;
            Point::new(o.x + edge * a.cos(), o.y + edge * a.sin())
        })
        .collect()
}

/// Hex containing `p`, by cube rounding of the fractional axial position.
pub fn hex_at(p: Point, edge: f64) -> HexCoord {
    let qf = (2.0 / 3.0) * p.x / edge;
    let rf = (-p.x / 3.0 + 3f64.sqrt() / 3.0 * p.y) / edge;
    let sf = -qf - rf;
    let (mut q, mut r, s) = (qf.round(), rf.round(), sf.round());
    let (dq, dr, ds) = ((q - qf).abs(), (r - rf).abs(), (s - sf).abs());
    if dq > dr && dq > ds {
        q = -r - s;
    } else if dr > ds {
        r = -q - s;
    }
    HexCoord {
        q: q as i64,
        r: r as i64,
    }
}

/// Assigns every bus to one hex per layer and summarizes each occupied hex.
pub fn hex_assign(snapshot: &GridSnapshot, edges: &[f64]) -> Result<Vec<HexLayer>> {
    hex_assign_points(&snapshot.positions(), &snapshot.voltages(), edges)
}

pub fn hex_assign_points(points: &[Point], voltages: &[f64], edges: &[f64]) -> Result<Vec<HexLayer>> {
    validate_edges(edges)?;
    if points.len() != voltages.len() {
        return Err(Error::invalid("point and voltage counts differ"));
    }
    Ok(edges
        .iter()
        .enumerate()
        .map(|(level, &edge)| {
            let membership: Vec<HexCoord> = points.iter().map(|&p| hex_at(p, edge)).collect();
            layer_from_membership(level as u8, edge, &membership, voltages)
        })
        .collect())
}

pub fn layer_from_membership(level: u8, edge: f64, membership: &[HexCoord], voltages: &[f64]) -> HexLayer {
    let mut groups: BTreeMap<HexCoord, Vec<f64>> = BTreeMap::new();
    for (&c, &v) in membership.iter().zip(voltages) {
        groups.entry(c).or_default().push(v);
    }
    HexLayer {
        level,
        edge,
        cells: groups
            .into_iter()
            .map(|(c, vs)| (c, CellStats::from_values(&vs).expect("groups are nonempty")))
            .collect(),
    }
}

pub(crate) fn validate_edges(edges: &[f64]) -> Result<()> {
    if edges.is_empty() {
        return Err(Error::invalid("at least one hex layer is required"));
    }
    if edges.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::invalid("hex edge lengths must be positive"));
    }
    if edges.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("hex edge lengths must be strictly decreasing"));
    }
    Ok(())
}

/// Draw order, coarse first so the finest layer ends up on top.
pub fn hex_layer_order(layers: &[HexLayer]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..layers.len()).collect();
    order.sort_by(|&a, &b| layers[b].edge.total_cmp(&layers[a].edge).then(a.cmp(&b)));
    order
}
