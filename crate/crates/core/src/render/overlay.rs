use serde::{Deserialize, Serialize};

use super::{Image, Rgb};
use crate::geometry::{point_segment_distance, Point};
use crate::model::GridSnapshot;
use crate::spatial::RasterGrid;

pub const LINE_GRAY: Rgb = [150, 150, 150];
pub const BUS_GRAY: Rgb = [70, 70, 70];
pub const SCALE_BAR: Rgb = [0, 0, 0];

/// Line, bus and scale-bar layers drawn over the colors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StyleOverlay {
    pub lines: bool,
    pub buses: bool,
    pub scale_bar: bool,
    pub line_width_px: f64,
    pub bus_radius_px: f64,
    pub line_color: Rgb,
}

impl Default for StyleOverlay {
    fn default() -> Self {
        StyleOverlay {
            lines: true,
            buses: false,
            scale_bar: true,
            line_width_px: 1.0,
            bus_radius_px: 1.5,
            line_color: LINE_GRAY,
        }
    }
}

struct PixelFrame {
    min_x: f64,
    max_y: f64,
    cell: f64,
}

impl PixelFrame {
    fn of(grid: &RasterGrid) -> Self {
        PixelFrame {
            min_x: grid.min_x,
            max_y: grid.max_y,
            cell: grid.cell_size,
        }
    }

    /// Continuous pixel coordinates, pixel `(i, j)` spanning `[i, i+1)`.
    fn to_px(&self, p: Point) -> Point {
        Point::new((p.x - self.min_x) / self.cell, (self.max_y - p.y) / self.cell)
    }
}

pub fn draw_overlays(img: &mut Image, grid: &RasterGrid, snapshot: &GridSnapshot, style: &StyleOverlay) {
    let frame = PixelFrame::of(grid);
    if style.lines {
        for &e in &snapshot.edges {
            let (a, b) = snapshot.segment(e);
            draw_segment(img, frame.to_px(a), frame.to_px(b), style.line_width_px, style.line_color);
        }
    }
    if style.buses {
        for b in &snapshot.buses {
            fill_disk(img, frame.to_px(b.pos()), style.bus_radius_px, BUS_GRAY);
        }
    }
    if style.scale_bar {
        draw_scale_bar(img, grid.cell_size);
    }
}

fn draw_segment(img: &mut Image, a: Point, b: Point, width: f64, color: Rgb) {
    let half = 0.5 * width.max(1.0);
    let x0 = (a.x.min(b.x) - half).floor() as i64;
    let x1 = (a.x.max(b.x) + half).ceil() as i64;
    let y0 = (a.y.min(b.y) - half).floor() as i64;
    let y1 = (a.y.max(b.y) + half).ceil() as i64;
    let (x0, x1) = (x0.max(0), x1.min(img.width as i64 - 1));
    let (y0, y1) = (y0.max(0), y1.min(img.height as i64 - 1));
    for y in y0..=y1 {
        for x in x0..=x1 {
            let c = Point::new(x as f64 + 0.5, y as f64 + 0.5);
            if point_segment_distance(c, a, b) <= half {
                img.set(x, y, color);
            }
        }
    }
}

fn fill_disk(img: &mut Image, c: Point, r: f64, color: Rgb) {
    let (x0, x1) = ((c.x - r).floor() as i64, (c.x + r).ceil() as i64);
    let (y0, y1) = ((c.y - r).floor() as i64, (c.y + r).ceil() as i64);
    for y in y0..=y1 {
        for x in x0..=x1 {
            if Point::new(x as f64 + 0.5, y as f64 + 0.5).dist2(c) <= r * r {
                img.set(x, y, color);
            }
        }
    }
    img.set(c.x.floor() as i64, c.y.floor() as i64, color);
}

/// Longest 1-2-5 step length not exceeding `limit`.
pub fn nice_length(limit: f64) -> f64 {
    if !(limit > 0.0) {
        return 0.0;
    }
    let exp = limit.log10().floor();
    let base = 10f64.powf(exp);
    [5.0, 2.0, 1.0]
        .into_iter()
        .map(|m| m * base)
        .find(|&l| l <= limit)
        .unwrap_or(base)
}

/// Bar in the lower-left corner about a fifth of the image width long.
fn draw_scale_bar(img: &mut Image, meters_per_px: f64) {
    let margin = 8i64;
    if img.width < 40 || img.height < 20 {
        return;
    }
    let meters = nice_length(0.2 * img.width as f64 * meters_per_px);
    let len = (meters / meters_per_px).round() as i64;
    if len < 2 {
        return;
    }
    let y = img.height as i64 - margin;
    for x in margin..=margin + len {
        img.set(x, y, SCALE_BAR);
        img.set(x, y - 1, SCALE_BAR);
    }
    for dy in 0..6 {
        img.set(margin, y - dy, SCALE_BAR);
        img.set(margin + len, y - dy, SCALE_BAR);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nice_lengths() {
        assert_eq!(nice_length(730.0), 500.0);
        assert_eq!(nice_length(199.0), 100.0);
        assert_eq!(nice_length(20.0), 20.0);
    }

    #[test]
    fn lines_are_drawn_on_top() {
        let pts = [Point::new(0.0, 5.0), Point::new(100.0, 5.0)];
        let snap = GridSnapshot::from_parts(&pts, &[1.0, 1.0], [(0, 1)]).unwrap();
        let grid = RasterGrid::new(0.0, 10.0, 1.0, 100, 10).unwrap();
        let mut img = Image::new(100, 10, [255, 0, 0]).unwrap();
        let style = StyleOverlay {
            scale_bar: false,
            ..Default::default()
        };
        draw_overlays(&mut img, &grid, &snap, &style);
        assert_eq!(img.get(50, 4), LINE_GRAY);
        assert_eq!(img.get(50, 0), [255, 0, 0]);
    }

    #[test]
    fn scale_bar_is_drawn() {
        let mut img = Image::new(100, 50, [255, 255, 255]).unwrap();
        draw_scale_bar(&mut img, 10.0);
        // 20% of 1000 m is 200 m, i.e. 20 px.
        assert_eq!(img.get(8 + 20, 42), SCALE_BAR);
        assert_eq!(img.get(8 + 21, 42), [255, 255, 255]);
    }
}
