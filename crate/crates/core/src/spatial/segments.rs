use crate::geometry::{point_segment_distance, Extent, Point};
use crate::model::GridSnapshot;

/// Uniform bucket grid over line segments for distance queries.
#[derive(Debug, Clone)]
pub struct SegmentIndex {
    segments: Vec<(Point, Point)>,
    origin: Point,
    bucket: f64,
    cols: usize,
    rows: usize,
    /// Segment ids per bucket, row-major.
    buckets: Vec<Vec<u32>>,
}

impl SegmentIndex {
    pub fn build(snapshot: &GridSnapshot) -> SegmentIndex {
        let segs: Vec<(Point, Point)> = snapshot.edges.iter().map(|&e| snapshot.segment(e)).collect();
        SegmentIndex::from_segments(segs)
    }

    pub fn from_segments(segments: Vec<(Point, Point)>) -> SegmentIndex {
        let extent = Extent::from_points(segments.iter().flat_map(|&(a, b)| [a, b]))
            .unwrap_or(Extent {
                min_x: 0.0,
                min_y: 0.0,
                max_x: 0.0,
                max_y: 0.0,
            });
        // Aim for a couple of segments per bucket.
        let n = segments.len().max(1) as f64;
        let side = extent.width().max(extent.height());
        let bucket = if side > 0.0 {
            (extent.area().max(side * side / n) / n).sqrt().max(side / 2048.0) * 1.5
        } else {
            1.0
        };
        let cols = ((extent.width() / bucket).floor() as usize + 1).max(1);
        let rows = ((extent.height() / bucket).floor() as usize + 1).max(1);
        let mut index = SegmentIndex {
            origin: Point::new(extent.min_x, extent.min_y),
            bucket,
            cols,
            rows,
            buckets: vec![Vec::new(); cols * rows],
            segments: Vec::new(),
        };
        for (id, &(a, b)) in segments.iter().enumerate() {
            let (c0, r0) = index.cell_of(Point::new(a.x.min(b.x), a.y.min(b.y)));
            let (c1, r1) = index.cell_of(Point::new(a.x.max(b.x), a.y.max(b.y)));
            for r in r0..=r1 {
                for c in c0..=c1 {
                    index.buckets[r * cols + c].push(id as u32);
                }
            }
        }
        index.segments = segments;
        index
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    fn cell_of(&self, p: Point) -> (usize, usize) {
        let c = ((p.x - self.origin.x) / self.bucket).floor();
        let r = ((p.y - self.origin.y) / self.bucket).floor();
        (
            (c.max(0.0) as usize).min(self.cols - 1),
            (r.max(0.0) as usize).min(self.rows - 1),
        )
    }

    /// Distance from `p` to the nearest segment; `+inf` with no segments.
    pub fn distance(&self, p: Point) -> f64 {
        self.distance_within(p, f64::INFINITY)
    }

    /// Distance to the nearest segment if it is at most `limit`, otherwise
    /// some value greater than `limit` (possibly `+inf`).
    pub fn distance_within(&self, p: Point, limit: f64) -> f64 {
        if self.segments.is_empty() {
            return f64::INFINITY;
        }
        let (c0, r0) = self.cell_of(p);
        let max_ring = self.cols.max(self.rows);
        let mut best = f64::INFINITY;
        for ring in 0..=max_ring {
            // Buckets beyond this ring are at least `ring * bucket` away from
            // the projection of `p` onto the grid, hence from `p` itself.
            let bound = ring.saturating_sub(1) as f64 * self.bucket;
            if bound > best || bound > limit {
                break;
            }
            let rlo = r0.saturating_sub(ring);
            let rhi = (r0 + ring).min(self.rows - 1);
            let clo = c0.saturating_sub(ring);
            let chi = (c0 + ring).min(self.cols - 1);
            for r in rlo..=rhi {
                for c in clo..=chi {
                    let on_ring = r.abs_diff(r0) == ring || c.abs_diff(c0) == ring;
                    if !on_ring {
                        continue;
                    }
                    for &s in &self.buckets[r * self.cols + c] {
                        let (a, b) = self.segments[s as usize];
                        best = best.min(point_segment_distance(p, a, b));
                    }
                }
            }
        }
        best
    }
}
