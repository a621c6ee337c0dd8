//! Plain and networked contour maps side by side.

use std::path::Path;

use gridviz::eval::{summary, visualized_samples};
use gridviz::model::{gen_synthetic, Profile};
use gridviz::pipeline::{prepare, Method};
use gridviz::render::RenderConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "gridviz-out".into());
    std::fs::create_dir_all(&out)?;
    let snap = gen_synthetic(2000, 7, Profile::Uniform)?;

    let runs = [
        ("contour", Method::Contour, None, 10),
        ("netcontour-n10", Method::NetContour, None, 10),
        ("netcontour-n1-k100", Method::NetContour, Some(100), 1),
    ];
    for (name, method, k, n) in runs {
        let cfg = RenderConfig {
            method,
            k,
            n,
            ..RenderConfig::default()
        };
        let r = prepare(&snap, &cfg)?.render(&snap.voltages())?;
        let s = summary(&visualized_samples(&r.field)?)?;
        let path = Path::new(&out).join(format!("{name}.png"));
        r.image.write_png(&path)?;
        println!("{name:<20} min {:.4} max {:.4} -> {}", s.min, s.max, path.display());
    }
    Ok(())
}
