//! Hop-weighted smoothing over the network for a few neighborhood sizes.

use gridviz::eval::summary;
use gridviz::model::{gen_synthetic, Profile};
use gridviz::network::{build_graph, hop_neighbors, smooth};

fn main() -> gridviz::Result<()> {
    let snap = gen_synthetic(1500, 3, Profile::Uniform)?;
    let graph = build_graph(&snap);
    println!("connected: {}", graph.is_connected());

    let hood = hop_neighbors(&graph, 0, 8)?;
    println!("8 network-closest buses to {}: {:?}", snap.names[0], hood.entries);

    for n in [1, 5, 10, 25] {
        let s = summary(&smooth(&snap, &graph, n)?)?;
        println!("n = {n:>2}: min {:.4} max {:.4} sd {:.5}", s.min, s.max, s.sd);
    }
    Ok(())
}
