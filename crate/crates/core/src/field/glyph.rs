use serde::{Deserialize, Serialize};

use super::{check_mask, ScalarField};
use crate::geometry::Point;
use crate::model::GridSnapshot;
use crate::spatial::{Mask, RasterGrid};
use crate::{Error, Result};

pub const DEFAULT_R_MIN_M: f64 = 5.0;
pub const DEFAULT_R_MAX_M: f64 = 30.0;
/// Radius growth in meters per p.u. of deviation from nominal.
pub const DEFAULT_SCALE_M_PER_PU: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Glyph {
    pub bus: usize,
    pub center: Point,
    pub radius: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlyphSpec {
    /// One glyph per bus, indexed by bus.
    pub glyphs: Vec<Glyph>,
    /// Bus indices in paint order; the last one ends up on top.
    pub order: Vec<usize>,
}

impl GlyphSpec {
    pub fn in_paint_order(&self) -> impl DoubleEndedIterator<Item = &Glyph> {
        self.order.iter().map(|&i| &self.glyphs[i])
    }
}

/// Circles sized by deviation from 1.0 p.u., the largest deviations last.
pub fn glyph_layout(snapshot: &GridSnapshot, r_min: f64, r_max: f64, scale: f64) -> Result<GlyphSpec> {
    if !(r_min > 0.0 && r_min <= r_max && r_max.is_finite()) {
        return Err(Error::invalid("glyph radii must satisfy 0 < r_min <= r_max"));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::invalid("glyph scale must be positive"));
    }
    let glyphs: Vec<Glyph> = snapshot
        .buses
        .iter()
        .map(|b| Glyph {
            bus: b.id,
            center: b.pos(),
            radius: (r_min + scale * (b.voltage - 1.0).abs()).clamp(r_min, r_max),
            value: b.voltage,
        })
        .collect();
    let mut order: Vec<usize> = (0..glyphs.len()).collect();
    order.sort_by(|&a, &b| {
        let da = (glyphs[a].value - 1.0).abs();
        let db = (glyphs[b].value - 1.0).abs();
        da.total_cmp(&db).then(a.cmp(&b))
    });
    Ok(GlyphSpec { glyphs, order })
}

/// Paints glyph disks in order onto the grid without anti-aliasing.
///
/// A cell is painted when its center lies within the radius. The cell
/// containing the glyph center is always painted, so no bus disappears at
/// coarse resolutions. Unpainted cells stay undefined.
pub fn rasterize_glyphs(spec: &GlyphSpec, grid: &RasterGrid, mask: &Mask) -> Result<ScalarField> {
    check_mask(grid, mask)?;
    let mut field = ScalarField::undefined(*grid, mask.clone());
    let cs = grid.cell_size;
    for g in spec.in_paint_order() {
        let col_lo = ((g.center.x - g.radius - grid.min_x) / cs - 0.5).floor().max(0.0);
        let col_hi = ((g.center.x + g.radius - grid.min_x) / cs - 0.5).ceil().min(grid.n_cols as f64 - 1.0);
        let row_lo = ((grid.max_y - g.center.y - g.radius) / cs - 0.5).floor().max(0.0);
        let row_hi = ((grid.max_y - g.center.y + g.radius) / cs - 0.5).ceil().min(grid.n_rows as f64 - 1.0);
        let r2 = g.radius * g.radius;
        if col_lo <= col_hi && row_lo <= row_hi {
            for row in row_lo as usize..=row_hi as usize {
                for col in col_lo as usize..=col_hi as usize {
                    let idx = row * grid.n_cols + col;
                    if mask.get(idx) && grid.center(col, row).dist2(g.center) <= r2 {
                        field.values[idx] = g.value;
                    }
                }
            }
        }
        if let Some((col, row)) = grid.cell_at(g.center) {
            let idx = row * grid.n_cols + col;
            if mask.get(idx) {
                field.values[idx] = g.value;
            }
        }
    }
    Ok(field)
}
