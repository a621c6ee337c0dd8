//! Bounded Voronoi cells by per-site half-plane clipping.
//!
//! Each cell starts as the boundary polygon and is clipped by the bisector
//! against its nearest sites in distance order. Once the next unprocessed
//! site is at least twice as far as the farthest cell vertex, no remaining
//! bisector can reach the cell and it is final.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{clip_half_plane, signed_area, Extent, Point};
use crate::model::GridSnapshot;
use crate::spatial::PointIndex;
use crate::{Error, Result};

/// Padding between the bus extent and the default clipping rectangle.
pub const BOUNDARY_PAD_M: f64 = 200.0;

/// Largest offset applied to separate buses at identical coordinates.
pub const DUPLICATE_JITTER_M: f64 = 1e-6;

const INITIAL_K: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoronoiCell {
    pub site: usize,
    /// Counter-clockwise ring, first vertex not repeated.
    pub polygon: Vec<Point>,
}

/// Extent rectangle padded by [`BOUNDARY_PAD_M`].
pub fn default_boundary(snapshot: &GridSnapshot) -> Vec<Point> {
    snapshot.extent.padded(BOUNDARY_PAD_M).to_polygon()
}

pub fn voronoi(snapshot: &GridSnapshot, boundary: &[Point]) -> Result<Vec<VoronoiCell>> {
    voronoi_points(&snapshot.positions(), boundary)
}

/// One clipped cell per site, in site order.
pub fn voronoi_points(sites: &[Point], boundary: &[Point]) -> Result<Vec<VoronoiCell>> {
    if sites.len() < 2 {
        return Err(Error::invalid("a Voronoi diagram needs at least 2 sites"));
    }
    let boundary = convex_ccw(boundary)?;
    for (i, &p) in sites.iter().enumerate() {
        if !inside_convex(&boundary, p) {
            return Err(Error::invalid(format!("site {i} lies outside the boundary")));
        }
    }
    let sites = separate_duplicates(sites);
    let index = PointIndex::build(&sites)?;
    (0..sites.len())
        .into_par_iter()
        .map(|i| {
            Ok(VoronoiCell {
                site: i,
                polygon: build_cell(&index, &sites, &boundary, i)?,
            })
        })
        .collect()
}

fn build_cell(index: &PointIndex, sites: &[Point], boundary: &[Point], i: usize) -> Result<Vec<Point>> {
    let n = sites.len();
    let p = sites[i];
    let mut cell = boundary.to_vec();
    let mut k = INITIAL_K.min(n);
    let mut processed = 0;
    loop {
        let neighbors = index.knn(p, k)?;
        for &(j, _) in &neighbors[processed..] {
            if j == i {
                continue;
            }
            let q = sites[j];
            let mid = Point::new(0.5 * (p.x + q.x), 0.5 * (p.y + q.y));
            let normal = Point::new(q.x - p.x, q.y - p.y);
            cell = clip_half_plane(&cell, mid, normal);
        }
        processed = k;
        let reach2 = cell.iter().map(|v| v.dist2(p)).fold(0.0, f64::max);
        let next_d = neighbors[k - 1].1;
        if k == n || next_d * next_d >= 4.0 * reach2 {
            return Ok(cell);
        }
        k = (2 * k).min(n);
    }
}

fn convex_ccw(boundary: &[Point]) -> Result<Vec<Point>> {
    if boundary.len() < 3 {
        return Err(Error::invalid("boundary needs at least 3 vertices"));
    }
    let mut ring = boundary.to_vec();
    if signed_area(&ring) < 0.0 {
        ring.reverse();
    }
    let n = ring.len();
    for i in 0..n {
        let (a, b, c) = (ring[i], ring[(i + 1) % n], ring[(i + 2) % n]);
        let turn = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        if turn < 0.0 {
            return Err(Error::invalid("boundary polygon is not convex"));
        }
    }
    Ok(ring)
}

fn inside_convex(ring: &[Point], p: Point) -> bool {
    let n = ring.len();
    (0..n).all(|i| {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) >= 0.0
    })
}

/// Moves every repeated coordinate by at most [`DUPLICATE_JITTER_M`] in a
/// direction seeded by the bus index. The first occurrence stays put.
fn separate_duplicates(sites: &[Point]) -> Vec<Point> {
    let key = |p: Point| (p.x.to_bits(), p.y.to_bits());
    let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(sites.len());
    let mut out = sites.to_vec();
    let mut moved = 0usize;
    for i in 0..out.len() {
        let mut attempt = 0u64;
        while seen.contains_key(&key(out[i])) {
            let mut rng = ChaCha8Rng::seed_from_u64((i as u64) << 8 | attempt);
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            let radius = DUPLICATE_JITTER_M * rng.gen_range(0.5..1.0);
            out[i] = Point::new(sites[i].x + radius * angle.cos(), sites[i].y + radius * angle.sin());
            attempt += 1;
        }
        if attempt > 0 {
            moved += 1;
        }
        seen.insert(key(out[i]), i);
    }
    if moved > 0 {
        log::warn!("perturbed {moved} buses sharing coordinates with another bus");
    }
    out
}

/// Sum of cell areas, for checking against the boundary area.
pub fn total_area(cells: &[VoronoiCell]) -> f64 {
    cells.iter().map(|c| signed_area(&c.polygon)).sum()
}

pub fn cell_extent(cell: &VoronoiCell) -> Extent {
    Extent::from_points(cell.polygon.iter().copied()).expect("cells are nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{point_in_polygon, polygon_area};
    use rand::{Rng, SeedableRng};

    fn square(half: f64) -> Vec<Point> {
        Extent {
            min_x: -half,
            min_y: -half,
            max_x: half,
            max_y: half,
        }
        .to_polygon()
    }

    #[test]
    fn two_sites_split_by_bisector() {
        let sites = [Point::new(-1.0, 0.0), Point::new(1.0, 0.0)];
        let cells = voronoi_points(&sites, &square(2.0)).unwrap();
        assert!((polygon_area(&cells[0].polygon) - 8.0).abs() < 1e-12);
        assert!(cells[0].polygon.iter().all(|p| p.x <= 1e-12));
        assert!(cells[1].polygon.iter().all(|p| p.x >= -1e-12));
    }

    #[test]
    fn four_corners_give_quadrants() {
        let sites = [
            Point::new(-0.5, -0.5),
            Point::new(0.5, -0.5),
            Point::new(0.5, 0.5),
            Point::new(-0.5, 0.5),
        ];
        let cells = voronoi_points(&sites, &square(1.0)).unwrap();
        for c in &cells {
            assert!((polygon_area(&c.polygon) - 1.0).abs() < 1e-12);
            assert!(signed_area(&c.polygon) > 0.0);
            assert!(point_in_polygon(sites[c.site], &c.polygon));
        }
    }

    #[test]
    fn nearest_site_oracle_on_50_sites() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let sites: Vec<Point> = (0..50)
            .map(|_| Point::new(rng.gen_range(-90.0..90.0), rng.gen_range(-90.0..90.0)))
            .collect();
        let boundary = square(100.0);
        let cells = voronoi_points(&sites, &boundary).unwrap();
        assert!((total_area(&cells) - 40_000.0).abs() / 40_000.0 < 1e-9);
        for _ in 0..10_000 {
            let q = Point::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
            let mut d: Vec<(f64, usize)> = sites.iter().enumerate().map(|(i, s)| (s.dist(q), i)).collect();
            d.sort_by(|a, b| a.0.total_cmp(&b.0));
            if d[1].0 - d[0].0 < 1e-9 {
                continue;
            }
            let hits: Vec<usize> = cells.iter().filter(|c| point_in_polygon(q, &c.polygon)).map(|c| c.site).collect();
            assert_eq!(hits, vec![d[0].1]);
        }
    }

    #[test]
    fn duplicates_are_separated() {
        let sites = [Point::new(0.0, 0.0), Point::new(0.0, 0.0), Point::new(5.0, 5.0), Point::new(0.0, 0.0)];
        let cells = voronoi_points(&sites, &square(10.0)).unwrap();
        assert_eq!(cells.len(), 4);
        assert!((total_area(&cells) - 400.0).abs() < 1e-6);
        assert!(cells.iter().all(|c| c.polygon.len() >= 3));
        let again = voronoi_points(&sites, &square(10.0)).unwrap();
        assert_eq!(cells, again);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(voronoi_points(&[Point::new(0.0, 0.0)], &square(1.0)).is_err());
        assert!(voronoi_points(&[Point::new(0.0, 0.0), Point::new(5.0, 0.0)], &square(1.0)).is_err());
        let notch = vec![
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(4.0, 4.0),
            Point::new(0.0, 4.0),
        ];
        assert!(voronoi_points(&[Point::new(1.0, 1.0), Point::new(1.0, 3.0)], &notch).is_err());
    }

    #[test]
    fn clockwise_boundary_is_accepted() {
        let mut b = square(3.0);
        b.reverse();
        let cells = voronoi_points(&[Point::new(-1.0, 0.0), Point::new(1.0, 0.0)], &b).unwrap();
        assert!(cells.iter().all(|c| signed_area(&c.polygon) > 0.0));
    }
}
