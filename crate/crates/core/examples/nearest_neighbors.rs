//! k-nearest-bus queries and the line-distance mask.

use gridviz::geometry::Point;
use gridviz::model::{gen_synthetic, Profile};
use gridviz::pipeline::{evaluation_grid, line_mask};
use gridviz::render::RenderConfig;
use gridviz::spatial::build_point_index;

fn main() -> gridviz::Result<()> {
    let snap = gen_synthetic(2000, 2, Profile::Uniform)?;
    let index = build_point_index(&snap)?;
    let e = snap.extent;
    let q = Point::new((e.min_x + e.max_x) / 2.0, (e.min_y + e.max_y) / 2.0);
    for (bus, d) in index.knn(q, 5)? {
        println!("bus {:>5} {:>8.2} m  {:.4} p.u.", snap.names[bus], d, snap.buses[bus].voltage);
    }

    let grid = evaluation_grid(&snap, &RenderConfig::default())?;
    for radius in [10.0, 50.0, 100.0] {
        let mask = line_mask(&snap, &grid, radius)?;
        println!("{radius:>5} m mask: {:.1}% of {} cells", 100.0 * mask.count() as f64 / grid.len() as f64, grid.len());
    }
    Ok(())
}
