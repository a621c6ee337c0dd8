//! Rasterized voltage fields over a [`RasterGrid`].

mod cells;
mod glyph;
mod idw;

pub use cells::{field_from_owners, polygon_owners, rasterize_cells};
pub use glyph::{
    glyph_layout, rasterize_glyphs, Glyph, GlyphSpec, DEFAULT_R_MAX_M, DEFAULT_R_MIN_M, DEFAULT_SCALE_M_PER_PU,
};
pub use idw::{idw_field, idw_field_values, networked_field, networked_field_with};

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::spatial::{Mask, RasterGrid};
use crate::{Error, Result};

/// Guard distance below which a cell takes the coincident bus's value.
pub const DEFAULT_EPSILON_M: f64 = 1e-9;

const BINARY_MAGIC: &[u8; 4] = b"GVF1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldParams {
    /// Spatial neighbors in the inverse-distance average.
    pub k: usize,
    /// Network neighbors in the hop-weighted smoothing.
    pub n: usize,
    pub epsilon: f64,
}

impl Default for FieldParams {
    fn default() -> Self {
        FieldParams {
            k: 1,
            n: 10,
            epsilon: DEFAULT_EPSILON_M,
        }
    }
}

impl FieldParams {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.n == 0 {
            return Err(Error::invalid("k and n must be at least 1"));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::invalid("epsilon must be positive"));
        }
        Ok(())
    }
}

/// Per-cell voltage, `NaN` where undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: RasterGrid,
    pub values: Vec<f64>,
    pub mask: Mask,
}

impl ScalarField {
    pub fn undefined(grid: RasterGrid, mask: Mask) -> ScalarField {
        ScalarField {
            values: vec![f64::NAN; grid.len()],
            grid,
            mask,
        }
    }

    pub fn get(&self, col: usize, row: usize) -> Option<f64> {
        let v = self.values[row * self.grid.n_cols + col];
        (!v.is_nan()).then_some(v)
    }

    /// Values of all defined cells in row-major order.
    pub fn defined_values(&self) -> Vec<f64> {
        self.values.iter().copied().filter(|v| !v.is_nan()).collect()
    }

    pub fn defined_count(&self) -> usize {
        self.values.iter().filter(|v| !v.is_nan()).count()
    }

    /// Comma-separated rows, north first, `NaN` for undefined cells.
    pub fn encode_text(&self) -> String {
        let mut out = String::with_capacity(8 * self.values.len());
        for row in self.values.chunks(self.grid.n_cols) {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Little-endian dump: magic, `n_cols` and `n_rows` as u32, `min_x`,
    /// `max_y` and `cell_size` as f64, then the values row-major.
    pub fn encode_binary(&self) -> Vec<u8> {
        let g = &self.grid;
        let mut buf = Vec::with_capacity(36 + 8 * self.values.len());
        buf.extend_from_slice(BINARY_MAGIC);
        buf.extend_from_slice(&(g.n_cols as u32).to_le_bytes());
        buf.extend_from_slice(&(g.n_rows as u32).to_le_bytes());
        for x in [g.min_x, g.max_y, g.cell_size] {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        for v in &self.values {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        buf
    }

    pub fn write_text(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.encode_text()).map_err(|e| Error::io(path, e))
    }

    pub fn write_binary(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.encode_binary()).map_err(|e| Error::io(path, e))
    }

    /// Reads a binary dump. The mask is rebuilt from the defined cells.
    pub fn read_binary(path: &Path) -> Result<ScalarField> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| Error::io(path, e))?;
        let bad = || Error::Record {
            path: path.to_path_buf(),
            line: 0,
            message: "not a field dump".into(),
        };
        if bytes.len() < 36 || &bytes[..4] != BINARY_MAGIC {
            return Err(bad());
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
        let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let (n_cols, n_rows) = (u32_at(4), u32_at(8));
        if bytes.len() != 36 + 8 * n_cols * n_rows {
            return Err(bad());
        }
        let grid = RasterGrid::new(f64_at(12), f64_at(20), f64_at(28), n_cols, n_rows)?;
        let values: Vec<f64> = (0..grid.len()).map(|i| f64_at(36 + 8 * i)).collect();
        let mask = Mask::from_cells(&grid, values.iter().map(|v| !v.is_nan()).collect())?;
        Ok(ScalarField { grid, values, mask })
    }
}

pub(crate) fn check_mask(grid: &RasterGrid, mask: &Mask) -> Result<()> {
    if mask.matches(grid) {
        Ok(())
    } else {
        Err(Error::invalid("mask dimensions do not match the grid"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ScalarField {
        let grid = RasterGrid::new(-5.0, 7.0, 2.5, 3, 2).unwrap();
        let mask = Mask::from_cells(&grid, vec![true, true, false, true, true, true]).unwrap();
        ScalarField {
            grid,
            values: vec![1.0, 1.01, f64::NAN, 0.99, 1.049, 1.0],
            mask,
        }
    }

    #[test]
    fn binary_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.bin");
        let f = sample();
        f.write_binary(&path).unwrap();
        let g = ScalarField::read_binary(&path).unwrap();
        assert_eq!(g.grid, f.grid);
        assert_eq!(g.mask, f.mask);
        assert!(f.values.iter().zip(&g.values).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn text_dump_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        sample().write_text(&path).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        assert_eq!(text, "1,1.01,NaN\n0.99,1.049,1\n");
    }

    #[test]
    fn defined_values_skip_nan() {
        assert_eq!(sample().defined_values().len(), 5);
        assert_eq!(sample().get(2, 0), None);
        assert_eq!(sample().get(1, 1), Some(1.049));
    }

    #[test]
    fn params_validation() {
        assert!(FieldParams::default().validate().is_ok());
        assert!(FieldParams { k: 0, ..Default::default() }.validate().is_err());
        assert!(FieldParams { epsilon: 0.0, ..Default::default() }.validate().is_err());
    }
}
