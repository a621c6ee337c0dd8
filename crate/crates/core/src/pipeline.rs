//! End-to-end rendering of one method, split into a voltage-independent
//! preparation phase and a per-voltage rendering phase.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::field::{
    field_from_owners, glyph_layout, idw_field_values, networked_field_with, polygon_owners, rasterize_cells,
    rasterize_glyphs, FieldParams, ScalarField, DEFAULT_EPSILON_M,
};
use crate::geometry::Point;
use crate::model::GridSnapshot;
use crate::network::{all_hop_neighbors, build_graph, HopNeighborhood};
use crate::render::{apply_colormap, draw_overlays, Image, RenderConfig, Shape, VectorFeature, BACKGROUND};
use crate::spatial::{build_point_index, build_segment_index, make_mask, Mask, PointIndex, RasterGrid};
use crate::tessellation::hex::{hex_at, hex_polygon, layer_from_membership};
use crate::tessellation::quad::quad_build_points;
use crate::tessellation::{default_boundary, quad_refine, voronoi, HexCoord, VoronoiCell};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Contour,
    Glyph,
    Voronoi,
    Hex,
    Quad,
    #[serde(rename = "netcontour")]
    NetContour,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Contour,
        Method::Glyph,
        Method::Voronoi,
        Method::Hex,
        Method::Quad,
        Method::NetContour,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Contour => "contour",
            Method::Glyph => "glyph",
            Method::Voronoi => "voronoi",
            Method::Hex => "hex",
            Method::Quad => "quad",
            Method::NetContour => "netcontour",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s || (s == "glyphs" && *m == Method::Glyph))
            .ok_or(Error::UnknownMethod(s))
    }
}

enum Stage {
    Contour {
        index: PointIndex,
        k: usize,
    },
    NetContour {
        index: PointIndex,
        hoods: Vec<HopNeighborhood>,
        params: FieldParams,
    },
    Glyph,
    Voronoi {
        cells: Vec<VoronoiCell>,
        owners: Vec<Option<u32>>,
    },
    Hex {
        membership: Vec<Vec<HexCoord>>,
        /// Occupied `(layer, cell)` pairs in draw order.
        polys: Vec<(usize, HexCoord)>,
        owners: Vec<Option<u32>>,
    },
    Quad,
}

/// Everything about a rendering that does not depend on voltages.
pub struct Prepared<'a> {
    pub method: Method,
    pub config: RenderConfig,
    pub snapshot: &'a GridSnapshot,
    pub grid: RasterGrid,
    pub mask: Mask,
    stage: Stage,
}

pub struct Rendered {
    pub field: ScalarField,
    pub image: Image,
    pub features: Vec<VectorFeature>,
}

/// Evaluation grid shared by every method: the bus extent padded by the
/// mask radius (when finite) and by the largest glyph radius.
pub fn evaluation_grid(snapshot: &GridSnapshot, config: &RenderConfig) -> Result<RasterGrid> {
    let mask_pad = if config.mask_radius.is_finite() { config.mask_radius } else { 0.0 };
    RasterGrid::covering(&snapshot.extent, config.cell_size, mask_pad.max(config.glyph_r_max))
}

/// Cells within the mask radius of a line; every cell when the radius is
/// infinite.
pub fn line_mask(snapshot: &GridSnapshot, grid: &RasterGrid, radius: f64) -> Result<Mask> {
    if radius.is_infinite() {
        return Ok(Mask::filled(grid, true));
    }
    if snapshot.edges.is_empty() {
        log::warn!("snapshot has no lines; the {radius} m line mask is empty");
    }
    make_mask(grid, &build_segment_index(snapshot), radius)
}

pub fn prepare<'a>(snapshot: &'a GridSnapshot, config: &RenderConfig) -> Result<Prepared<'a>> {
    config.validate()?;
    let method = config.method;
    let grid = evaluation_grid(snapshot, config)?;
    // Glyphs are drawn at buses and need neither a mask nor an index.
    if method == Method::Glyph {
        return Ok(Prepared {
            method,
            config: config.clone(),
            snapshot,
            mask: Mask::filled(&grid, true),
            grid,
            stage: Stage::Glyph,
        });
    }
    let mask = line_mask(snapshot, &grid, config.mask_radius)?;
    let stage = match method {
        Method::Contour => Stage::Contour {
            index: build_point_index(snapshot)?,
            k: clamp_k(config.effective_k(), snapshot.len()),
        },
        Method::NetContour => {
            let params = FieldParams {
                k: clamp_k(config.effective_k(), snapshot.len()),
                n: config.n,
                epsilon: DEFAULT_EPSILON_M,
            };
            Stage::NetContour {
                index: build_point_index(snapshot)?,
                hoods: all_hop_neighbors(&build_graph(snapshot), params.n)?,
                params,
            }
        }
        Method::Voronoi => {
            let cells = voronoi(snapshot, &default_boundary(snapshot))?;
            let polys: Vec<Vec<Point>> = cells.iter().map(|c| c.polygon.clone()).collect();
            let owners = polygon_owners(&polys, &grid, &mask)?;
            Stage::Voronoi { cells, owners }
        }
        Method::Hex => {
            let membership: Vec<Vec<HexCoord>> = config
                .hex_edges
                .iter()
                .map(|&edge| snapshot.buses.iter().map(|b| hex_at(b.pos(), edge)).collect())
                .collect();
            let mut polys = Vec::new();
            for (layer, m) in membership.iter().enumerate() {
                let mut cells = m.clone();
                cells.sort_unstable();
                cells.dedup();
                polys.extend(cells.into_iter().map(|c| (layer, c)));
            }
            let shapes: Vec<Vec<Point>> = polys
                .iter()
                .map(|&(layer, c)| hex_polygon(c, config.hex_edges[layer]))
                .collect();
            let owners = polygon_owners(&shapes, &grid, &mask)?;
            Stage::Hex {
                membership,
                polys,
                owners,
            }
        }
        Method::Quad => Stage::Quad,
        Method::Glyph => unreachable!(),
    };
    Ok(Prepared {
        method,
        config: config.clone(),
        snapshot,
        grid,
        mask,
        stage,
    })
}

fn clamp_k(k: usize, n: usize) -> usize {
    if k > n {
        log::warn!("k = {k} exceeds the {n} available buses; using k = {n}");
    }
    k.min(n)
}

impl Prepared<'_> {
    /// Field and vector features for the given per-bus voltages.
    pub fn render_field(&self, voltages: &[f64]) -> Result<(ScalarField, Vec<VectorFeature>)> {
        if voltages.len() != self.snapshot.len() {
            return Err(Error::invalid("voltage count does not match bus count"));
        }
        let cfg = &self.config;
        match &self.stage {
            Stage::Contour { index, k } => Ok((
                idw_field_values(voltages, index, &self.grid, &self.mask, *k, DEFAULT_EPSILON_M)?,
                Vec::new(),
            )),
            Stage::NetContour { index, hoods, params } => Ok((
                networked_field_with(voltages, hoods, index, &self.grid, &self.mask, params)?,
                Vec::new(),
            )),
            Stage::Glyph => {
                let snap = self.snapshot.with_voltages(voltages)?;
                let spec = glyph_layout(&snap, cfg.glyph_r_min, cfg.glyph_r_max, cfg.glyph_scale)?;
                let field = rasterize_glyphs(&spec, &self.grid, &self.mask)?;
                let features = spec
                    .in_paint_order()
                    .map(|g| VectorFeature {
                        shape: Shape::Circle {
                            center: g.center,
                            radius: g.radius,
                        },
                        value: g.value,
                        stats: None,
                        level: None,
                        bus: Some(g.bus),
                    })
                    .collect();
                Ok((field, features))
            }
            Stage::Voronoi { cells, owners } => {
                let field = field_from_owners(&self.grid, &self.mask, owners, voltages)?;
                let features = cells
                    .iter()
                    .map(|c| VectorFeature {
                        shape: Shape::Polygon(c.polygon.clone()),
                        value: voltages[c.site],
                        stats: None,
                        level: None,
                        bus: Some(c.site),
                    })
                    .collect();
                Ok((field, features))
            }
            Stage::Hex {
                membership,
                polys,
                owners,
            } => {
                let layers: Vec<_> = membership
                    .iter()
                    .enumerate()
                    .map(|(l, m)| layer_from_membership(l as u8, cfg.hex_edges[l], m, voltages))
                    .collect();
                let stats: Vec<_> = polys.iter().map(|&(l, c)| layers[l].cells[&c]).collect();
                let means: Vec<f64> = stats.iter().map(|s| s.mean).collect();
                let field = field_from_owners(&self.grid, &self.mask, owners, &means)?;
                let features = polys
                    .iter()
                    .zip(&stats)
                    .map(|(&(l, c), s)| VectorFeature {
                        shape: Shape::Polygon(hex_polygon(c, cfg.hex_edges[l])),
                        value: s.mean,
                        stats: Some(*s),
                        level: Some(l as u8),
                        bus: None,
                    })
                    .collect();
                Ok((field, features))
            }
            Stage::Quad => {
                let e = &self.snapshot.extent;
                let tree = quad_build_points(
                    &self.snapshot.positions(),
                    voltages,
                    Point::new(e.min_x, e.min_y),
                    cfg.quad_base,
                    cfg.quad_levels,
                )?;
                let cover = quad_refine(&tree, cfg.sd_threshold)?;
                let cells: Vec<(Vec<Point>, f64)> = cover
                    .cells
                    .iter()
                    .map(|c| (c.extent.to_polygon(), c.stats.mean))
                    .collect();
                let field = rasterize_cells(&cells, &self.grid, &self.mask)?;
                let features = cover
                    .cells
                    .iter()
                    .map(|c| VectorFeature {
                        shape: Shape::Polygon(c.extent.to_polygon()),
                        value: c.stats.mean,
                        stats: Some(c.stats),
                        level: Some(c.level),
                        bus: None,
                    })
                    .collect();
                Ok((field, features))
            }
        }
    }

    /// Field, colored image with overlays, and vector features.
    pub fn render(&self, voltages: &[f64]) -> Result<Rendered> {
        let (field, features) = self.render_field(voltages)?;
        let mut image = apply_colormap(&field, &self.config.colormap(), BACKGROUND)?;
        draw_overlays(&mut image, &self.grid, self.snapshot, &self.config.overlay());
        Ok(Rendered { field, image, features })
    }

    /// Whether this method produces vector geometry.
    pub fn has_vector_output(&self) -> bool {
        !matches!(self.method, Method::Contour | Method::NetContour)
    }
}

/// Prepares and renders the snapshot's own voltages in one call.
pub fn render_snapshot(snapshot: &GridSnapshot, config: &RenderConfig) -> Result<Rendered> {
    prepare(snapshot, config)?.render(&snapshot.voltages())
}
