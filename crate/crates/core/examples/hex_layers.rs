//! Three nested hexagon layers: per-cell statistics and the rendered map.

use std::path::Path;

use gridviz::model::{gen_synthetic, Profile};
use gridviz::pipeline::{prepare, Method};
use gridviz::render::RenderConfig;
use gridviz::tessellation::{hex_assign, hex_layer_order};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "gridviz-out".into());
    std::fs::create_dir_all(&out)?;
    let snap = gen_synthetic(3000, 5, Profile::Clustered)?;
    let cfg = RenderConfig {
        method: Method::Hex,
        ..RenderConfig::default()
    };

    let layers = hex_assign(&snap, &cfg.hex_edges)?;
    for i in hex_layer_order(&layers) {
        let l = &layers[i];
        let worst = l.cells.values().map(|s| s.sd).fold(0.0, f64::max);
        println!(
            "level {} edge {:>6.2} m area {:>8.1} m²: {:>4} cells, largest sd {:.4}",
            l.level,
            l.edge,
            l.cell_area(),
            l.cells.len(),
            worst
        );
    }

    let rendered = prepare(&snap, &cfg)?.render(&snap.voltages())?;
    let path = Path::new(&out).join("hex.png");
    rendered.image.write_png(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}
