//! Voronoi cells, layered hex grids and the SD-refined quadtree cover.

pub mod hex;
pub mod quad;
mod stats;
pub mod voronoi;

pub use hex::{hex_assign, hex_layer_order, HexCoord, HexLayer};
pub use quad::{quad_build, quad_refine, CoverCell, MultiResCover, QuadCell, QuadTree};
pub use stats::CellStats;
pub use voronoi::{default_boundary, voronoi, VoronoiCell};
