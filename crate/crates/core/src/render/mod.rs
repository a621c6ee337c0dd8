//! Colors, raster images, overlays, vector export and render configuration.

mod colormap;
mod config;
mod image;
mod overlay;
mod vector;

pub use colormap::{apply_colormap, hex_color, ColorMap, Rgb, BLUE, RED, WHITE};
pub use config::{
    RenderConfig, DEFAULT_CELL_SIZE_M, DEFAULT_CONTOUR_K, DEFAULT_MASK_RADIUS_M, DEFAULT_N, DEFAULT_NETCONTOUR_K,
};
pub use image::Image;
pub use overlay::{draw_overlays, nice_length, StyleOverlay, BUS_GRAY, LINE_GRAY};
pub use vector::{encode_geojson, encode_svg, encode_vector, write_vector, Shape, VectorFeature, VectorFormat};

/// Canvas color outside the rendered area.
pub const BACKGROUND: Rgb = [255, 255, 255];
