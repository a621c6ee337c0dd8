//! Circle glyphs sized by deviation from nominal, largest drawn last.

use std::path::Path;

use gridviz::field::glyph_layout;
use gridviz::model::{gen_synthetic, Profile};
use gridviz::pipeline::{prepare, Method};
use gridviz::render::{RenderConfig, VectorFormat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "gridviz-out".into());
    std::fs::create_dir_all(&out)?;
    let snap = gen_synthetic(1000, 8, Profile::Clustered)?;
    let cfg = RenderConfig {
        method: Method::Glyph,
        ..RenderConfig::default()
    };

    let spec = glyph_layout(&snap, cfg.glyph_r_min, cfg.glyph_r_max, cfg.glyph_scale)?;
    for g in spec.in_paint_order().rev().take(3) {
        println!("top glyph: {} at {:.4} p.u., radius {:.1} m", snap.names[g.bus], g.value, g.radius);
    }

    let prepared = prepare(&snap, &cfg)?;
    let r = prepared.render(&snap.voltages())?;
    let dir = Path::new(&out);
    r.image.write_png(&dir.join("glyphs.png"))?;
    let lines: Vec<_> = snap.edges.iter().map(|&e| snap.segment(e)).collect();
    gridviz::render::write_vector(
        &r.features,
        &lines,
        &dir.join("glyphs.svg"),
        VectorFormat::Svg,
        &cfg.colormap(),
        None,
    )?;
    println!("wrote glyphs.png and glyphs.svg to {}", dir.display());
    Ok(())
}
