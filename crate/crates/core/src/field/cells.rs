use rayon::prelude::*;

use super::{check_mask, ScalarField};
use crate::geometry::{point_in_polygon, polygon_extent, Point};
use crate::spatial::{Mask, RasterGrid};
use crate::{Error, Result};

/// For every masked cell, the index of the last polygon whose interior
/// contains the cell center. Later polygons are drawn over earlier ones.
pub fn polygon_owners(polygons: &[Vec<Point>], grid: &RasterGrid, mask: &Mask) -> Result<Vec<Option<u32>>> {
    check_mask(grid, mask)?;
    let hits: Vec<Vec<u32>> = polygons
        .par_iter()
        .map(|poly| covered_cells(poly, grid, mask))
        .collect();
    let mut owners = vec![None; grid.len()];
    for (p, cells) in hits.iter().enumerate() {
        for &c in cells {
            owners[c as usize] = Some(p as u32);
        }
    }
    Ok(owners)
}

fn covered_cells(poly: &[Point], grid: &RasterGrid, mask: &Mask) -> Vec<u32> {
    let Some(e) = polygon_extent(poly) else {
        return Vec::new();
    };
    let cs = grid.cell_size;
    let col_lo = ((e.min_x - grid.min_x) / cs - 0.5).floor().max(0.0);
    let col_hi = ((e.max_x - grid.min_x) / cs - 0.5).ceil().min(grid.n_cols as f64 - 1.0);
    let row_lo = ((grid.max_y - e.max_y) / cs - 0.5).floor().max(0.0);
    let row_hi = ((grid.max_y - e.min_y) / cs - 0.5).ceil().min(grid.n_rows as f64 - 1.0);
    let mut out = Vec::new();
    if col_lo > col_hi || row_lo > row_hi {
        return out;
    }
    for row in row_lo as usize..=row_hi as usize {
        for col in col_lo as usize..=col_hi as usize {
            let idx = row * grid.n_cols + col;
            if mask.get(idx) && point_in_polygon(grid.center(col, row), poly) {
                out.push(idx as u32);
            }
        }
    }
    out
}

/// Field taking `values[owner]` in owned cells, undefined elsewhere.
pub fn field_from_owners(grid: &RasterGrid, mask: &Mask, owners: &[Option<u32>], values: &[f64]) -> Result<ScalarField> {
    check_mask(grid, mask)?;
    if owners.len() != grid.len() {
        return Err(Error::invalid("owner raster does not match the grid"));
    }
    let values = owners
        .iter()
        .map(|o| o.map_or(f64::NAN, |i| values[i as usize]))
        .collect();
    Ok(ScalarField {
        grid: *grid,
        values,
        mask: mask.clone(),
    })
}

/// Paints polygons in the given order, each with a single value.
pub fn rasterize_cells(cells: &[(Vec<Point>, f64)], grid: &RasterGrid, mask: &Mask) -> Result<ScalarField> {
    let polys: Vec<Vec<Point>> = cells.iter().map(|(p, _)| p.clone()).collect();
    let values: Vec<f64> = cells.iter().map(|(_, v)| *v).collect();
    let owners = polygon_owners(&polys, grid, mask)?;
    field_from_owners(grid, mask, &owners, &values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Extent;
    use crate::tessellation::voronoi::voronoi_points;
    use crate::field::idw_field_values;
    use crate::spatial::PointIndex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rect(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Vec<Point> {
        Extent { min_x, min_y, max_x, max_y }.to_polygon()
    }

    #[test]
    fn covering_polygon_gives_constant_field() {
        let grid = RasterGrid::new(0.0, 10.0, 1.0, 10, 10).unwrap();
        let mask = Mask::filled(&grid, true);
        let f = rasterize_cells(&[(rect(-1.0, -1.0, 11.0, 11.0), 1.02)], &grid, &mask).unwrap();
        assert!(f.values.iter().all(|&v| v == 1.02));
    }

    #[test]
    fn later_layers_overdraw() {
        let grid = RasterGrid::new(0.0, 10.0, 1.0, 10, 10).unwrap();
        let mask = Mask::filled(&grid, true);
        let cells = [(rect(0.0, 0.0, 10.0, 10.0), 1.0), (rect(0.0, 0.0, 5.0, 5.0), 1.05)];
        let f = rasterize_cells(&cells, &grid, &mask).unwrap();
        assert_eq!(f.get(0, 9), Some(1.05));
        assert_eq!(f.get(9, 0), Some(1.0));
    }

    #[test]
    fn uncovered_and_masked_cells_are_undefined() {
        let grid = RasterGrid::new(0.0, 4.0, 1.0, 4, 4).unwrap();
        let mut cells = vec![true; 16];
        cells[0] = false;
        let mask = Mask::from_cells(&grid, cells).unwrap();
        let f = rasterize_cells(&[(rect(0.0, 2.0, 4.0, 4.0), 1.0)], &grid, &mask).unwrap();
        assert_eq!(f.defined_count(), 7);
        assert!(f.values[0].is_nan());
    }

    fn winding_number(p: Point, poly: &[Point]) -> i32 {
        let mut wn = 0;
        for i in 0..poly.len() {
            let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
            let side = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
            if a.y <= p.y && b.y > p.y && side > 0.0 {
                wn += 1;
            } else if a.y > p.y && b.y <= p.y && side < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    #[test]
    fn containment_agrees_with_winding_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let poly: Vec<Point> = (0..9)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / 9.0;
                let r = rng.gen_range(10.0..40.0);
                Point::new(50.0 + r * a.cos(), 50.0 + r * a.sin())
            })
            .collect();
        let grid = RasterGrid::new(0.0, 100.0, 1.0, 100, 100).unwrap();
        let mask = Mask::filled(&grid, true);
        let owners = polygon_owners(std::slice::from_ref(&poly), &grid, &mask).unwrap();
        for _ in 0..1000 {
            let idx = rng.gen_range(0..grid.len());
            let inside = winding_number(grid.center_of(idx), &poly) != 0;
            assert_eq!(owners[idx].is_some(), inside);
        }
    }

    #[test]
    fn voronoi_raster_matches_nearest_neighbor_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts: Vec<Point> = (0..80)
            .map(|_| Point::new(rng.gen_range(5.0..95.0), rng.gen_range(5.0..95.0)))
            .collect();
        let volts: Vec<f64> = (0..80).map(|_| rng.gen_range(0.95..1.05)).collect();
        let cells = voronoi_points(&pts, &rect(0.0, 0.0, 100.0, 100.0)).unwrap();
        let grid = RasterGrid::new(0.0, 100.0, 0.5, 200, 200).unwrap();
        let mask = Mask::filled(&grid, true);
        let polys: Vec<Vec<Point>> = cells.into_iter().map(|c| c.polygon).collect();
        let owners = polygon_owners(&polys, &grid, &mask).unwrap();
        let vor = field_from_owners(&grid, &mask, &owners, &volts).unwrap();
        let index = PointIndex::build(&pts).unwrap();
        let nn = idw_field_values(&volts, &index, &grid, &mask, 1, 1e-9).unwrap();
        let mut compared = 0;
        for i in 0..grid.len() {
            let c = grid.center_of(i);
            let near = index.knn(c, 2).unwrap();
            // Distance from c to the bisector of the two nearest sites.
            let gap = (near[1].1 * near[1].1 - near[0].1 * near[0].1) / (2.0 * pts[near[0].0].dist(pts[near[1].0]));
            if gap > 1e-6 {
                assert_eq!(vor.values[i], nn.values[i]);
                compared += 1;
            }
        }
        assert!(compared > grid.len() * 99 / 100);
    }
}
