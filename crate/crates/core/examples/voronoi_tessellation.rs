//! Voronoi cells of every bus, written as SVG and GeoJSON.

use std::path::Path;

use gridviz::model::{gen_synthetic, Profile};
use gridviz::render::{write_vector, RenderConfig, Shape, VectorFeature, VectorFormat};
use gridviz::tessellation::{default_boundary, voronoi};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "gridviz-out".into());
    std::fs::create_dir_all(&out)?;
    let snap = gen_synthetic(800, 4, Profile::Clustered)?;
    let boundary = default_boundary(&snap);
    let cells = voronoi(&snap, &boundary)?;
    let area: f64 = cells.iter().map(|c| gridviz::geometry::polygon_area(&c.polygon)).sum();
    println!("{} cells covering {:.0} m²", cells.len(), area);

    let features: Vec<VectorFeature> = cells
        .iter()
        .map(|c| VectorFeature {
            shape: Shape::Polygon(c.polygon.clone()),
            value: snap.buses[c.site].voltage,
            stats: None,
            level: None,
            bus: Some(c.site),
        })
        .collect();
    let map = RenderConfig::default().colormap();
    let lines: Vec<_> = snap.edges.iter().map(|&e| snap.segment(e)).collect();
    for (fmt, name) in [(VectorFormat::Svg, "voronoi.svg"), (VectorFormat::GeoJson, "voronoi.geojson")] {
        let path = Path::new(&out).join(name);
        write_vector(&features, &lines, &path, fmt, &map, snap.projection.as_ref())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
