//! Pre-processing and rendering time of each method as the network grows.
//!
//! cargo run --release --example benchmark_scaling

use gridviz::eval::bench;
use gridviz::model::{gen_synthetic, Profile};
use gridviz::pipeline::Method;
use gridviz::render::RenderConfig;

fn main() -> gridviz::Result<()> {
    let cfg = RenderConfig::default();
    println!("{:<11} {:>6} {:>12} {:>12}", "method", "buses", "prep (ms)", "render (ms)");
    for n in [2_500, 5_000, 10_000] {
        let snap = gen_synthetic(n, 10, Profile::Uniform)?;
        for m in Method::ALL {
            let t = bench(m, &snap, &cfg, 3)?;
            println!(
                "{:<11} {:>6} {:>12.2} {:>12.2}",
                t.method,
                n,
                t.pre_processing_seconds * 1e3,
                t.rendering_seconds * 1e3
            );
        }
    }
    Ok(())
}
