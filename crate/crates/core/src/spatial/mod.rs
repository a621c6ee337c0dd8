//! Exact nearest-neighbor queries, segment distances and the evaluation
//! raster with its render mask.

mod kdtree;
mod raster;
mod segments;

pub use kdtree::PointIndex;
pub use raster::{make_mask, Mask, RasterGrid};
pub use segments::SegmentIndex;

use crate::model::GridSnapshot;
use crate::Result;

pub fn build_point_index(snapshot: &GridSnapshot) -> Result<PointIndex> {
    PointIndex::build(&snapshot.positions())
}

pub fn build_segment_index(snapshot: &GridSnapshot) -> SegmentIndex {
    SegmentIndex::build(snapshot)
}
