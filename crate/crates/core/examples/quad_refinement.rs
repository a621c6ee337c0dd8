//! Quadtree refinement at several SD thresholds.

use gridviz::model::{gen_synthetic, Profile};
use gridviz::tessellation::{quad_build, quad_refine};

fn main() -> gridviz::Result<()> {
    let snap = gen_synthetic(3000, 6, Profile::Uniform)?;
    let tree = quad_build(&snap, 158.0, 4)?;
    println!("{} occupied cells across {} levels", tree.iter().count(), tree.levels);
    for threshold in [0.0, 0.001, 0.003, 0.01, 1.0] {
        let cover = quad_refine(&tree, threshold)?;
        let mut per_level = vec![0usize; tree.levels as usize];
        for c in &cover.cells {
            per_level[c.level as usize] += 1;
        }
        println!("sd <= {threshold:<5}: {:>4} cells, per level {per_level:?}", cover.cells.len());
    }
    Ok(())
}
