use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SegmentIndex;
use crate::geometry::{Extent, Point};
use crate::{Error, Result};

/// Regular grid of square cells. Row 0 is the northern edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RasterGrid {
    /// Western edge, meters.
    pub min_x: f64,
    /// Northern edge, meters.
    pub max_y: f64,
    pub cell_size: f64,
    pub n_cols: usize,
    pub n_rows: usize,
}

impl RasterGrid {
    pub fn new(min_x: f64, max_y: f64, cell_size: f64, n_cols: usize, n_rows: usize) -> Result<Self> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(Error::invalid(format!("cell size must be positive, got {cell_size}")));
        }
        if n_cols == 0 || n_rows == 0 {
            return Err(Error::invalid("raster needs at least one cell"));
        }
        Ok(RasterGrid {
            min_x,
            max_y,
            cell_size,
            n_cols,
            n_rows,
        })
    }

    /// Grid covering `extent` padded by `pad` meters on every side.
    /// An infinite pad is treated as zero.
    pub fn covering(extent: &Extent, cell_size: f64, pad: f64) -> Result<Self> {
        let pad = if pad.is_finite() { pad.max(0.0) } else { 0.0 };
        let e = extent.padded(pad);
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(Error::invalid(format!("cell size must be positive, got {cell_size}")));
        }
        let n_cols = ((e.width() / cell_size).ceil() as usize).max(1);
        let n_rows = ((e.height() / cell_size).ceil() as usize).max(1);
        RasterGrid::new(e.min_x, e.max_y, cell_size, n_cols, n_rows)
    }

    pub fn len(&self) -> usize {
        self.n_cols * self.n_rows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn center(&self, col: usize, row: usize) -> Point {
        Point::new(
            self.min_x + (col as f64 + 0.5) * self.cell_size,
            self.max_y - (row as f64 + 0.5) * self.cell_size,
        )
    }

    pub fn center_of(&self, idx: usize) -> Point {
        self.center(idx % self.n_cols, idx / self.n_cols)
    }

    /// `(col, row)` of the cell containing `p`, if inside the grid.
    pub fn cell_at(&self, p: Point) -> Option<(usize, usize)> {
        let c = ((p.x - self.min_x) / self.cell_size).floor();
        let r = ((self.max_y - p.y) / self.cell_size).floor();
        if c < 0.0 || r < 0.0 || c >= self.n_cols as f64 || r >= self.n_rows as f64 {
            return None;
        }
        Some((c as usize, r as usize))
    }

    pub fn extent(&self) -> Extent {
        Extent {
            min_x: self.min_x,
            min_y: self.max_y - self.n_rows as f64 * self.cell_size,
            max_x: self.min_x + self.n_cols as f64 * self.cell_size,
            max_y: self.max_y,
        }
    }
}

/// Per-cell render flag over a [`RasterGrid`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    n_cols: usize,
    n_rows: usize,
    cells: Vec<bool>,
}

impl Mask {
    pub fn filled(grid: &RasterGrid, value: bool) -> Mask {
        Mask {
            n_cols: grid.n_cols,
            n_rows: grid.n_rows,
            cells: vec![value; grid.len()],
        }
    }

    pub fn from_cells(grid: &RasterGrid, cells: Vec<bool>) -> Result<Mask> {
        if cells.len() != grid.len() {
            return Err(Error::invalid("mask size does not match grid"));
        }
        Ok(Mask {
            n_cols: grid.n_cols,
            n_rows: grid.n_rows,
            cells,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n_cols, self.n_rows)
    }

    pub fn matches(&self, grid: &RasterGrid) -> bool {
        self.n_cols == grid.n_cols && self.n_rows == grid.n_rows
    }

    pub fn get(&self, idx: usize) -> bool {
        self.cells[idx]
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }
}

/// Marks every cell whose center lies within `radius` of a segment.
pub fn make_mask(grid: &RasterGrid, segs: &SegmentIndex, radius: f64) -> Result<Mask> {
    if !(radius > 0.0) {
        return Err(Error::invalid(format!("mask radius must be positive, got {radius}")));
    }
    if radius == f64::INFINITY {
        return Ok(Mask::filled(grid, true));
    }
    let cells = (0..grid.len())
        .into_par_iter()
        .map(|i| segs.distance_within(grid.center_of(i), radius) <= radius)
        .collect();
    Mask::from_cells(grid, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point_segment_distance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn one_segment_grid() -> (RasterGrid, SegmentIndex) {
        let seg = (Point::new(0.0, 0.0), Point::new(1000.0, 0.0));
        // Cells of 100 m; row 0 spans y in [200, 300].
        let grid = RasterGrid::new(0.0, 300.0, 100.0, 10, 6).unwrap();
        (grid, SegmentIndex::from_segments(vec![seg]))
    }

    #[test]
    fn center_inside_radius() {
        let (grid, segs) = one_segment_grid();
        let mask = make_mask(&grid, &segs, 100.0).unwrap();
        // Row 2 centers sit at y = 50.
        assert_eq!(grid.center(3, 2).y, 50.0);
        assert!(mask.get(2 * 10 + 3));
        // Row 1 centers sit at y = 150.
        assert_eq!(grid.center(3, 1).y, 150.0);
        assert!(!mask.get(10 + 3));
    }

    #[test]
    fn infinite_radius_fills_everything() {
        let (grid, _) = one_segment_grid();
        let mask = make_mask(&grid, &SegmentIndex::from_segments(vec![]), f64::INFINITY).unwrap();
        assert_eq!(mask.count(), grid.len());
    }

    #[test]
    fn nonpositive_radius_rejected() {
        let (grid, segs) = one_segment_grid();
        assert!(make_mask(&grid, &segs, 0.0).is_err());
        assert!(make_mask(&grid, &segs, -5.0).is_err());
    }

    #[test]
    fn mask_matches_brute_force_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let segs: Vec<(Point, Point)> = (0..40)
            .map(|_| {
                let a = Point::new(rng.gen_range(0.0..500.0), rng.gen_range(0.0..500.0));
                (a, Point::new(a.x + rng.gen_range(-60.0..60.0), a.y + rng.gen_range(-60.0..60.0)))
            })
            .collect();
        let idx = SegmentIndex::from_segments(segs.clone());
        let grid = RasterGrid::new(-20.0, 520.0, 540.0 / 50.0, 50, 50).unwrap();
        for radius in [5.0, 25.0, 100.0] {
            let mask = make_mask(&grid, &idx, radius).unwrap();
            for i in 0..grid.len() {
                let c = grid.center_of(i);
                let brute = segs
                    .iter()
                    .any(|&(a, b)| point_segment_distance(c, a, b) <= radius);
                assert_eq!(mask.get(i), brute, "cell {i} radius {radius}");
            }
        }
    }

    #[test]
    fn covering_grid_contains_padded_extent() {
        let e = Extent {
            min_x: -1234.0,
            min_y: 10.0,
            max_x: 1766.0,
            max_y: 3010.0,
        };
        let g = RasterGrid::covering(&e, 10.0, 100.0).unwrap();
        let ge = g.extent();
        assert!(ge.min_x <= -1334.0 && ge.max_x >= 1866.0);
        assert!(ge.min_y <= -90.0 && ge.max_y >= 3110.0);
        // A few square kilometers at 10 m cells lands on the order of 1e5 cells.
        assert!((50_000..200_000).contains(&g.len()));
        assert_eq!(g.cell_at(g.center(7, 3)), Some((7, 3)));
    }
}
