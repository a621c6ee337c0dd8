//! Generates a synthetic network, writes it as CSV, and loads it back
//! through the same path real inputs take.
//!
//! cargo run --example load_and_preprocess -- [out-dir]

use gridviz::model::{gen_synthetic, load_snapshot, CoordKind, Profile};

fn main() -> gridviz::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "gridviz-out".into());
    let snap = gen_synthetic(500, 1, Profile::Clustered)?;
    gridviz::model::write_snapshot(&snap, &out)?;

    let dir = std::path::Path::new(&out);
    let loaded = load_snapshot(dir.join("buses.csv"), Some(&dir.join("edges.csv")), CoordKind::LonLat)?;
    let e = loaded.extent;
    println!("{} buses, {} edges", loaded.len(), loaded.edges.len());
    println!("extent {:.1} m x {:.1} m", e.width(), e.height());
    if let Some(p) = loaded.projection {
        println!("projected about lon {:.5}, lat {:.5}", p.lon0, p.lat0);
    }
    Ok(())
}
