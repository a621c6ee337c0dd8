use std::collections::BinaryHeap;

use crate::geometry::Point;
use crate::{Error, Result};

const LEAF_SIZE: usize = 8;

/// Static 2-d tree over bus positions answering exact k-nearest queries.
///
/// Ties at equal distance are broken by ascending bus index, so query
/// results are a deterministic function of the input points.
#[derive(Debug, Clone)]
pub struct PointIndex {
    points: Vec<Point>,
    /// Bus indexes, permuted so every node owns a contiguous range.
    order: Vec<u32>,
    nodes: Vec<Node>,
}

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: u32,
        end: u32,
    },
    Split {
        axis: u8,
        value: f64,
        left: u32,
        right: u32,
    },
}

/// Max-heap entry keyed on (squared distance, bus index).
#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    d2: f64,
    idx: u32,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.d2
            .total_cmp(&other.d2)
            .then_with(|| self.idx.cmp(&other.idx))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[inline]
fn coord(p: Point, axis: u8) -> f64 {
    if axis == 0 {
        p.x
    } else {
        p.y
    }
}

impl PointIndex {
    pub fn build(points: &[Point]) -> Result<PointIndex> {
        if points.is_empty() {
            return Err(Error::invalid("cannot index an empty point set"));
        }
        if points.len() > u32::MAX as usize {
            return Err(Error::invalid("too many points for the index"));
        }
        let mut index = PointIndex {
            points: points.to_vec(),
            order: (0..points.len() as u32).collect(),
            nodes: Vec::with_capacity(2 * points.len() / LEAF_SIZE + 1),
        };
        index.build_node(0, points.len());
        Ok(index)
    }

    fn build_node(&mut self, start: usize, end: usize) -> u32 {
        let id = self.nodes.len() as u32;
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf {
                start: start as u32,
                end: end as u32,
            });
            return id;
        }
        let slice = &mut self.order[start..end];
        let points = &self.points;
        let (mut lo, mut hi) = (Point::new(f64::MAX, f64::MAX), Point::new(f64::MIN, f64::MIN));
        for &i in slice.iter() {
            let p = points[i as usize];
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        let axis = if hi.x - lo.x >= hi.y - lo.y { 0 } else { 1 };
        let mid = slice.len() / 2;
        slice.select_nth_unstable_by(mid, |&a, &b| {
            coord(points[a as usize], axis)
                .total_cmp(&coord(points[b as usize], axis))
                .then(a.cmp(&b))
        });
        let value = coord(points[slice[mid] as usize], axis);
        // Placeholder, patched once the children exist.
        self.nodes.push(Node::Leaf { start: 0, end: 0 });
        let left = self.build_node(start, start + mid);
        let right = self.build_node(start + mid, end);
        self.nodes[id as usize] = Node::Split {
            axis,
            value,
            left,
            right,
        };
        id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, idx: usize) -> Point {
        self.points[idx]
    }

    /// The `k` nearest buses to `query`, ascending by (distance, index).
    pub fn knn(&self, query: Point, k: usize) -> Result<Vec<(usize, f64)>> {
        if k == 0 || k > self.points.len() {
            return Err(Error::invalid(format!(
                "k = {k} must lie in 1..={}",
                self.points.len()
            )));
        }
        let mut heap = BinaryHeap::with_capacity(k + 1);
        self.search(0, query, k, &mut heap);
        let mut out: Vec<Candidate> = heap.into_vec();
        out.sort_unstable();
        Ok(out
            .into_iter()
            .map(|c| (c.idx as usize, c.d2.sqrt()))
            .collect())
    }

    /// Nearest bus and its distance.
    pub fn nearest(&self, query: Point) -> (usize, f64) {
        self.knn(query, 1).expect("index is nonempty")[0]
    }

    fn search(&self, node: u32, q: Point, k: usize, heap: &mut BinaryHeap<Candidate>) {
        match self.nodes[node as usize] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start as usize..end as usize] {
                    let c = Candidate {
                        d2: q.dist2(self.points[i as usize]),
                        idx: i,
                    };
                    if heap.len() < k {
                        heap.push(c);
                    } else if c < *heap.peek().expect("heap is full") {
                        heap.pop();
                        heap.push(c);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = coord(q, axis) - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.search(near, q, k, heap);
                // Equal distances must still be visited for the index tie-break.
                if heap.len() < k || diff * diff <= heap.peek().expect("heap is full").d2 {
                    self.search(far, q, k, heap);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_knn(points: &[Point], q: Point, k: usize) -> Vec<(usize, f64)> {
        let mut all: Vec<(f64, usize)> = points.iter().enumerate().map(|(i, p)| (q.dist2(*p), i)).collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        all.into_iter().take(k).map(|(d2, i)| (i, d2.sqrt())).collect()
    }

    fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
        (0..n)
            .map(|_| Point::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0)))
            .collect()
    }

    #[test]
    fn single_point() {
        let idx = PointIndex::build(&[Point::new(3.0, 4.0)]).unwrap();
        assert_eq!(idx.knn(Point::new(0.0, 0.0), 1).unwrap(), vec![(0, 5.0)]);
        assert_eq!(idx.nearest(Point::new(-100.0, 7.0)).0, 0);
    }

    #[test]
    fn query_at_bus_location() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts = random_points(&mut rng, 100);
        let idx = PointIndex::build(&pts).unwrap();
        assert_eq!(idx.len(), 100);
        assert_eq!(idx.knn(pts[42], 1).unwrap(), vec![(42, 0.0)]);
    }

    #[test]
    fn collinear_hand_example() {
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(5.0, 0.0)];
        let idx = PointIndex::build(&pts).unwrap();
        let res = idx.knn(Point::new(1.9, 0.0), 2).unwrap();
        assert_eq!(res[0].0, 1);
        assert!((res[0].1 - 0.9).abs() < 1e-12);
        assert_eq!(res[1].0, 0);
        assert!((res[1].1 - 1.9).abs() < 1e-12);
    }

    #[test]
    fn k_out_of_range() {
        let idx = PointIndex::build(&[Point::new(0.0, 0.0), Point::new(1.0, 1.0)]).unwrap();
        assert!(idx.knn(Point::default(), 3).is_err());
        assert!(idx.knn(Point::default(), 0).is_err());
        assert!(PointIndex::build(&[]).is_err());
    }

    #[test]
    fn k_equals_n_returns_all_sorted() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts = random_points(&mut rng, 57);
        let idx = PointIndex::build(&pts).unwrap();
        let q = Point::new(500.0, 500.0);
        assert_eq!(idx.knn(q, 57).unwrap(), brute_knn(&pts, q, 57));
    }

    #[test]
    fn ties_break_by_index() {
        // Four buses on a circle around the query, plus duplicates.
        let pts = [
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(-1.0, 0.0),
            Point::new(0.0, -1.0),
            Point::new(1.0, 0.0),
        ];
        let idx = PointIndex::build(&pts).unwrap();
        let ids: Vec<usize> = idx.knn(Point::default(), 3).unwrap().iter().map(|r| r.0).collect();
        assert_eq!(ids, vec![0, 1, 2]);
    }

    #[test]
    fn matches_brute_force_on_200_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts = random_points(&mut rng, 200);
        let idx = PointIndex::build(&pts).unwrap();
        let again = PointIndex::build(&pts).unwrap();
        for _ in 0..500 {
            let q = Point::new(rng.gen_range(-100.0..1100.0), rng.gen_range(-100.0..1100.0));
            let k = rng.gen_range(1..=200);
            let got = idx.knn(q, k).unwrap();
            assert_eq!(got, brute_knn(&pts, q, k));
            assert_eq!(got, again.knn(q, k).unwrap());
        }
    }

    proptest! {
        #[test]
        fn knn_is_prefix_stable(
            raw in prop::collection::vec((0i32..50, 0i32..50), 2..80),
            qx in -5.0f64..55.0,
            qy in -5.0f64..55.0,
        ) {
            // Integer lattice coordinates produce many exact ties.
            let pts: Vec<Point> = raw.iter().map(|&(x, y)| Point::new(x as f64, y as f64)).collect();
            let idx = PointIndex::build(&pts).unwrap();
            let q = Point::new(qx, qy);
            for k in 1..pts.len() {
                let a = idx.knn(q, k).unwrap();
                let b = idx.knn(q, k + 1).unwrap();
                prop_assert_eq!(&a[..], &b[..k]);
            }
            prop_assert_eq!(idx.knn(q, pts.len()).unwrap(), brute_knn(&pts, q, pts.len()));
        }
    }
}
