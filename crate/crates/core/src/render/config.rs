use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ColorMap, StyleOverlay};
use crate::field::{DEFAULT_R_MAX_M, DEFAULT_R_MIN_M, DEFAULT_SCALE_M_PER_PU};
use crate::pipeline::Method;
use crate::tessellation::hex::{default_edges, edge_for_area, DEFAULT_COARSE_AREA_M2};
use crate::tessellation::quad::{DEFAULT_BASE_CELL_M, DEFAULT_LEVELS, DEFAULT_SD_THRESHOLD};
use crate::{Error, Result};

pub const DEFAULT_CONTOUR_K: usize = 100;
pub const DEFAULT_NETCONTOUR_K: usize = 1;
pub const DEFAULT_N: usize = 10;
pub const DEFAULT_CELL_SIZE_M: f64 = 10.0;
pub const DEFAULT_MASK_RADIUS_M: f64 = 100.0;

/// Every knob of a rendering, read from a flat TOML table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderConfig {
    pub method: Method,
    /// Raster cell edge in meters; one cell is one image pixel.
    pub cell_size: f64,
    /// Spatial neighbors for the contour methods. Unset means 100 for the
    /// classic contour and 1 for the networked one.
    pub k: Option<usize>,
    pub n: usize,
    pub sd_threshold: f64,
    pub hex_edges: Vec<f64>,
    pub quad_base: f64,
    pub quad_levels: u8,
    /// Color is only drawn within this distance of a line. `inf` disables it.
    pub mask_radius: f64,
    pub color_low: f64,
    pub color_center: f64,
    pub color_high: f64,
    pub glyph_r_min: f64,
    pub glyph_r_max: f64,
    pub glyph_scale: f64,
    pub draw_lines: bool,
    pub draw_buses: bool,
    pub scale_bar: bool,
    pub line_width_px: f64,
    pub bus_radius_px: f64,
    pub seed: u64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            method: Method::Contour,
            cell_size: DEFAULT_CELL_SIZE_M,
            k: None,
            n: DEFAULT_N,
            sd_threshold: DEFAULT_SD_THRESHOLD,
            hex_edges: default_edges(edge_for_area(DEFAULT_COARSE_AREA_M2), 3),
            quad_base: DEFAULT_BASE_CELL_M,
            quad_levels: DEFAULT_LEVELS,
            mask_radius: DEFAULT_MASK_RADIUS_M,
            color_low: 0.95,
            color_center: 1.0,
            color_high: 1.05,
            glyph_r_min: DEFAULT_R_MIN_M,
            glyph_r_max: DEFAULT_R_MAX_M,
            glyph_scale: DEFAULT_SCALE_M_PER_PU,
            draw_lines: true,
            draw_buses: false,
            scale_bar: true,
            line_width_px: 1.0,
            bus_radius_px: 1.5,
            seed: 0,
        }
    }
}

impl RenderConfig {
    pub fn from_toml_str(text: &str) -> Result<RenderConfig> {
        let cfg: RenderConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RenderConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RenderConfig::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// `k` with the per-method default applied.
    pub fn effective_k(&self) -> usize {
        self.k.unwrap_or(match self.method {
            Method::NetContour => DEFAULT_NETCONTOUR_K,
            _ => DEFAULT_CONTOUR_K,
        })
    }

    pub fn colormap(&self) -> ColorMap {
        ColorMap::new(self.color_low, self.color_center, self.color_high)
    }

    pub fn overlay(&self) -> StyleOverlay {
        StyleOverlay {
            lines: self.draw_lines,
            buses: self.draw_buses,
            scale_bar: self.scale_bar,
            line_width_px: self.line_width_px,
            bus_radius_px: self.bus_radius_px,
            ..StyleOverlay::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.cell_size) {
            return Err(Error::Config("cell_size must be positive".into()));
        }
        if self.k == Some(0) || self.n == 0 {
            return Err(Error::Config("k and n must be at least 1".into()));
        }
        if !(self.sd_threshold >= 0.0) {
            return Err(Error::Config("sd_threshold must be non-negative".into()));
        }
        crate::tessellation::hex::validate_edges(&self.hex_edges).map_err(|e| Error::Config(e.to_string()))?;
        if !positive(self.quad_base) {
            return Err(Error::Config("quad_base must be positive".into()));
        }
        if !(2..=20).contains(&self.quad_levels) {
            return Err(Error::Config("quad_levels must lie in 2..=20".into()));
        }
        if !(self.mask_radius > 0.0) {
            return Err(Error::Config("mask_radius must be positive".into()));
        }
        self.colormap().validate().map_err(|e| Error::Config(e.to_string()))?;
        if !(positive(self.glyph_r_min) && self.glyph_r_min <= self.glyph_r_max && positive(self.glyph_r_max)) {
            return Err(Error::Config("glyph radii must satisfy 0 < r_min <= r_max".into()));
        }
        if !positive(self.glyph_scale) {
            return Err(Error::Config("glyph_scale must be positive".into()));
        }
        if !(positive(self.line_width_px) && positive(self.bus_radius_px)) {
            return Err(Error::Config("overlay sizes must be positive".into()));
        }
        Ok(())
    }
}
