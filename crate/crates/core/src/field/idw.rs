use rayon::prelude::*;

use super::{check_mask, FieldParams, ScalarField};
use crate::model::GridSnapshot;
use crate::network::{smooth_with, HopNeighborhood, NetworkGraph};
use crate::spatial::{Mask, PointIndex, RasterGrid};
use crate::weighting::weighted_mean;
use crate::{Error, Result};

/// Inverse-distance field over the snapshot's voltages.
pub fn idw_field(
    snapshot: &GridSnapshot,
    index: &PointIndex,
    grid: &RasterGrid,
    mask: &Mask,
    k: usize,
) -> Result<ScalarField> {
    idw_field_values(&snapshot.voltages(), index, grid, mask, k, super::DEFAULT_EPSILON_M)
}

/// Inverse-distance field over arbitrary per-bus values.
///
/// Each masked cell averages the `k` nearest buses with weight `1/d`; a
/// cell within `epsilon` of a bus takes that bus's value. Neighbors are
/// summed in (distance, index) order, so the result does not depend on
/// thread scheduling.
pub fn idw_field_values(
    values: &[f64],
    index: &PointIndex,
    grid: &RasterGrid,
    mask: &Mask,
    k: usize,
    epsilon: f64,
) -> Result<ScalarField> {
    check_mask(grid, mask)?;
    if values.len() != index.len() {
        return Err(Error::invalid("value count does not match indexed bus count"));
    }
    if k == 0 || k > index.len() {
        return Err(Error::invalid(format!("k = {k} must lie in 1..={}", index.len())));
    }
    let cells: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            if !mask.get(i) {
                return f64::NAN;
            }
            let near = index.knn(grid.center_of(i), k).expect("k was validated");
            if near[0].1 < epsilon {
                return values[near[0].0];
            }
            weighted_mean(near.iter().map(|&(j, d)| (values[j], 1.0 / d)))
        })
        .collect();
    Ok(ScalarField {
        grid: *grid,
        values: cells,
        mask: mask.clone(),
    })
}

/// Hop-weighted smoothing followed by the inverse-distance field.
pub fn networked_field(
    snapshot: &GridSnapshot,
    graph: &NetworkGraph,
    index: &PointIndex,
    grid: &RasterGrid,
    mask: &Mask,
    params: &FieldParams,
) -> Result<ScalarField> {
    params.validate()?;
    let hoods = crate::network::all_hop_neighbors(graph, params.n)?;
    networked_field_with(&snapshot.voltages(), &hoods, index, grid, mask, params)
}

/// Same as [`networked_field`] with precomputed neighborhoods.
pub fn networked_field_with(
    voltages: &[f64],
    hoods: &[HopNeighborhood],
    index: &PointIndex,
    grid: &RasterGrid,
    mask: &Mask,
    params: &FieldParams,
) -> Result<ScalarField> {
    params.validate()?;
    let smoothed = smooth_with(hoods, voltages)?;
    idw_field_values(&smoothed, index, grid, mask, params.k, params.epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::network::build_graph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn snapshot(points: &[Point], volts: &[f64], edges: &[(usize, usize)]) -> GridSnapshot {
        GridSnapshot::from_parts(points, volts, edges.iter().copied()).unwrap()
    }

    fn single_cell_at(p: Point) -> (RasterGrid, Mask) {
        let grid = RasterGrid::new(p.x - 0.5, p.y + 0.5, 1.0, 1, 1).unwrap();
        let mask = Mask::filled(&grid, true);
        (grid, mask)
    }

    #[test]
    fn equidistant_pair_averages() {
        let snap = snapshot(&[Point::new(-2.0, 0.0), Point::new(2.0, 0.0)], &[1.00, 1.04], &[]);
        let index = PointIndex::build(&snap.positions()).unwrap();
        let (grid, mask) = single_cell_at(Point::new(0.0, 0.0));
        let f = idw_field(&snap, &index, &grid, &mask, 2).unwrap();
        assert!((f.values[0] - 1.02).abs() < 1e-15);
    }

    #[test]
    fn unequal_distances_by_hand() {
        let snap = snapshot(&[Point::new(1.0, 0.0), Point::new(-3.0, 0.0)], &[1.00, 1.04], &[]);
        let index = PointIndex::build(&snap.positions()).unwrap();
        let (grid, mask) = single_cell_at(Point::new(0.0, 0.0));
        let f = idw_field(&snap, &index, &grid, &mask, 2).unwrap();
        assert!((f.values[0] - 1.01).abs() < 1e-15);
    }

    #[test]
    fn cell_on_a_bus_takes_its_value() {
        let snap = snapshot(&[Point::new(0.0, 0.0), Point::new(5.0, 0.0)], &[1.031, 0.97], &[]);
        let index = PointIndex::build(&snap.positions()).unwrap();
        let (grid, mask) = single_cell_at(Point::new(0.0, 0.0));
        let f = idw_field(&snap, &index, &grid, &mask, 2).unwrap();
        assert_eq!(f.values[0], 1.031);
    }

    #[test]
    fn masked_out_cells_are_undefined() {
        let snap = snapshot(&[Point::new(0.0, 0.0), Point::new(5.0, 0.0)], &[1.0, 1.0], &[]);
        let index = PointIndex::build(&snap.positions()).unwrap();
        let grid = RasterGrid::new(0.0, 2.0, 1.0, 2, 2).unwrap();
        let mask = Mask::from_cells(&grid, vec![true, false, false, true]).unwrap();
        let f = idw_field(&snap, &index, &grid, &mask, 1).unwrap();
        assert!(f.values[1].is_nan() && f.values[2].is_nan());
        assert_eq!(f.defined_count(), 2);
    }

    #[test]
    fn brute_force_oracle_and_convexity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let n = rng.gen_range(2..200);
            let pts: Vec<Point> = (0..n)
                .map(|_| Point::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
                .collect();
            let volts: Vec<f64> = (0..n).map(|_| rng.gen_range(0.94..1.07)).collect();
            let snap = snapshot(&pts, &volts, &[]);
            let index = PointIndex::build(&pts).unwrap();
            let grid = RasterGrid::new(0.0, 100.0, 4.0, 25, 25).unwrap();
            let mask = Mask::filled(&grid, true);
            let k = rng.gen_range(1..=n.min(30));
            let f = idw_field(&snap, &index, &grid, &mask, k).unwrap();
            let (lo, hi) = volts.iter().fold((f64::MAX, f64::MIN), |a, &v| (a.0.min(v), a.1.max(v)));
            for i in 0..grid.len() {
                let c = grid.center_of(i);
                let mut all: Vec<(f64, usize)> = pts.iter().enumerate().map(|(j, p)| (p.dist2(c), j)).collect();
                all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                let (num, den) = all[..k].iter().fold((0.0, 0.0), |(n, d), &(d2, j)| {
                    let w = 1.0 / d2.sqrt();
                    (n + volts[j] * w, d + w)
                });
                assert!((f.values[i] - num / den).abs() < 1e-12);
                assert!(f.values[i] >= lo && f.values[i] <= hi);
            }
        }
    }

    #[test]
    fn scaling_voltages_scales_field() {
        let pts = [Point::new(0.0, 0.0), Point::new(10.0, 3.0), Point::new(4.0, 9.0)];
        let volts = [1.01, 0.98, 1.03];
        let index = PointIndex::build(&pts).unwrap();
        let grid = RasterGrid::new(0.0, 10.0, 1.0, 10, 10).unwrap();
        let mask = Mask::filled(&grid, true);
        let a = idw_field_values(&volts, &index, &grid, &mask, 3, 1e-9).unwrap();
        let scaled: Vec<f64> = volts.iter().map(|v| v * 2.0).collect();
        let b = idw_field_values(&scaled, &index, &grid, &mask, 3, 1e-9).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((2.0 * x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn networked_with_one_neighbor_is_plain_idw() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<Point> = (0..60)
            .map(|_| Point::new(rng.gen_range(0.0..50.0), rng.gen_range(0.0..50.0)))
            .collect();
        let volts: Vec<f64> = (0..60).map(|_| rng.gen_range(0.95..1.05)).collect();
        let edges: Vec<(usize, usize)> = (1..60).map(|i| (i, rng.gen_range(0..i))).collect();
        let snap = snapshot(&pts, &volts, &edges);
        let graph = build_graph(&snap);
        let index = PointIndex::build(&pts).unwrap();
        let grid = RasterGrid::new(0.0, 50.0, 2.0, 25, 25).unwrap();
        let mask = Mask::filled(&grid, true);
        for k in [1, 60] {
            let params = FieldParams { k, n: 1, epsilon: 1e-9 };
            let net = networked_field(&snap, &graph, &index, &grid, &mask, &params).unwrap();
            let plain = idw_field(&snap, &index, &grid, &mask, k).unwrap();
            assert!(net.values.iter().zip(&plain.values).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }

    #[test]
    fn star_with_default_params_uses_smoothed_nearest() {
        // Center 1.00 with three 1.06 leaves smooths to 1.036.
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(30.0, 0.0),
            Point::new(-30.0, 0.0),
            Point::new(0.0, 30.0),
        ];
        let snap = snapshot(&pts, &[1.00, 1.06, 1.06, 1.06], &[(0, 1), (0, 2), (0, 3)]);
        let graph = build_graph(&snap);
        let index = PointIndex::build(&pts).unwrap();
        let (grid, mask) = single_cell_at(Point::new(2.0, 1.0));
        let f = networked_field(&snap, &graph, &index, &grid, &mask, &FieldParams::default()).unwrap();
        assert!((f.values[0] - 1.036).abs() < 1e-12);
    }

    #[test]
    fn k_out_of_range_is_rejected() {
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
        let index = PointIndex::build(&pts).unwrap();
        let (grid, mask) = single_cell_at(Point::new(0.0, 0.0));
        assert!(idw_field_values(&[1.0, 1.0], &index, &grid, &mask, 3, 1e-9).is_err());
        assert!(idw_field_values(&[1.0, 1.0], &index, &grid, &mask, 0, 1e-9).is_err());
    }
}
