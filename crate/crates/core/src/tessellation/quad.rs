//! Square quadtree over the projected plane and its SD-driven refinement.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::CellStats;
use crate::geometry::{Extent, Point};
use crate::model::GridSnapshot;
use crate::{Error, Result};

/// Base cell edge, about 25,000 m² per cell.
pub const DEFAULT_BASE_CELL_M: f64 = 158.0;
pub const DEFAULT_LEVELS: u8 = 3;
pub const DEFAULT_SD_THRESHOLD: f64 = 0.003;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadCell {
    /// 0 is the base (coarsest) level.
    pub level: u8,
    pub i: i64,
    pub j: i64,
    pub stats: CellStats,
    /// Bus-containing children, empty at the finest level.
    pub children: Vec<QuadCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadTree {
    pub origin: Point,
    pub base_size: f64,
    pub levels: u8,
    pub roots: Vec<QuadCell>,
}

impl QuadTree {
    pub fn cell_size(&self, level: u8) -> f64 {
        self.base_size / f64::from(1u32 << level)
    }

    pub fn cell_extent(&self, level: u8, i: i64, j: i64) -> Extent {
        let s = self.cell_size(level);
        let min_x = self.origin.x + i as f64 * s;
        let min_y = self.origin.y + j as f64 * s;
        Extent {
            min_x,
            min_y,
            max_x: min_x + s,
            max_y: min_y + s,
        }
    }

    /// Every cell of the tree, parents before children.
    pub fn iter(&self) -> impl Iterator<Item = &QuadCell> {
        let mut stack: Vec<&QuadCell> = self.roots.iter().rev().collect();
        std::iter::from_fn(move || {
            let c = stack.pop()?;
            stack.extend(c.children.iter().rev());
            Some(c)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverCell {
    pub level: u8,
    pub i: i64,
    pub j: i64,
    pub extent: Extent,
    pub stats: CellStats,
}

/// Interior-disjoint cells of mixed levels.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MultiResCover {
    pub cells: Vec<CoverCell>,
}

pub fn quad_build(snapshot: &GridSnapshot, base_cell_size: f64, levels: u8) -> Result<QuadTree> {
    let origin = Point::new(snapshot.extent.min_x, snapshot.extent.min_y);
    quad_build_points(&snapshot.positions(), &snapshot.voltages(), origin, base_cell_size, levels)
}

pub fn quad_build_points(
    points: &[Point],
    voltages: &[f64],
    origin: Point,
    base_cell_size: f64,
    levels: u8,
) -> Result<QuadTree> {
    if !(base_cell_size.is_finite() && base_cell_size > 0.0) {
        return Err(Error::invalid("quad base cell size must be positive"));
    }
    if levels == 0 || levels > 30 {
        return Err(Error::invalid("quad levels must be between 1 and 30"));
    }
    if points.len() != voltages.len() {
        return Err(Error::invalid("point and voltage counts differ"));
    }
    let tree = QuadTree {
        origin,
        base_size: base_cell_size,
        levels,
        roots: Vec::new(),
    };
    // Coarser indices are derived from the finest by shifting, so nesting
    // is exact regardless of floating-point rounding at cell borders.
    let fine = tree.cell_size(levels - 1);
    let mut per_level: Vec<BTreeMap<(i64, i64), Vec<f64>>> = vec![BTreeMap::new(); levels as usize];
    for (p, &v) in points.iter().zip(voltages) {
        let fi = ((p.x - origin.x) / fine).floor() as i64;
        let fj = ((p.y - origin.y) / fine).floor() as i64;
        for (l, map) in per_level.iter_mut().enumerate() {
            let shift = u32::from(levels) - 1 - l as u32;
            map.entry((fi >> shift, fj >> shift)).or_default().push(v);
        }
    }
    let roots = per_level[0]
        .keys()
        .map(|&(i, j)| build_cell(&per_level, 0, i, j))
        .collect();
    Ok(QuadTree { roots, ..tree })
}

fn build_cell(per_level: &[BTreeMap<(i64, i64), Vec<f64>>], level: usize, i: i64, j: i64) -> QuadCell {
    let stats = CellStats::from_values(&per_level[level][&(i, j)]).expect("only occupied cells are built");
    let children = if level + 1 < per_level.len() {
        let next = &per_level[level + 1];
        [(0, 0), (1, 0), (0, 1), (1, 1)]
            .iter()
            .map(|&(a, b)| (2 * i + a, 2 * j + b))
            .filter(|k| next.contains_key(k))
            .map(|(ci, cj)| build_cell(per_level, level + 1, ci, cj))
            .collect()
    } else {
        Vec::new()
    };
    QuadCell {
        level: level as u8,
        i,
        j,
        stats,
        children,
    }
}

/// Keeps a cell when its SD is within `sd_threshold` or it has no children,
/// otherwise descends into its occupied children.
pub fn quad_refine(tree: &QuadTree, sd_threshold: f64) -> Result<MultiResCover> {
    if tree.levels < 2 {
        return Err(Error::invalid("refinement needs a tree with at least 2 levels"));
    }
    if sd_threshold.is_nan() || sd_threshold < 0.0 {
        return Err(Error::invalid("sd threshold must be non-negative"));
    }
    let mut cover = MultiResCover::default();
    let mut stack: Vec<&QuadCell> = tree.roots.iter().rev().collect();
    while let Some(c) = stack.pop() {
        if c.stats.sd <= sd_threshold || c.children.is_empty() {
            cover.cells.push(CoverCell {
                level: c.level,
                i: c.i,
                j: c.j,
                extent: tree.cell_extent(c.level, c.i, c.j),
                stats: c.stats,
            });
        } else {
            stack.extend(c.children.iter().rev());
        }
    }
    Ok(cover)
}
