//! Deterministic synthetic feeders for desk-scale runs.
//!
//! Buses are scattered at urban-feeder density with a minimum spacing, wired
//! into a radial tree rooted near the middle of the area (each bus hangs off
//! its nearest bus that is closer to the root) plus a few shortcut ties.
//! Voltages sag with electrical distance from the root, carry a smooth
//! spatial ripple and per-bus noise, and a handful of buses are pushed out
//! of the 0.95-1.05 p.u. band.

use std::collections::HashMap;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{GridSnapshot, Projection};
use crate::geometry::{Extent, Point};
use crate::spatial::PointIndex;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    Uniform,
    Clustered,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Profile::Uniform),
            "clustered" => Ok(Profile::Clustered),
            other => Err(Error::invalid(format!(
                "unknown profile `{other}` (expected uniform or clustered)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticParams {
    pub n_buses: usize,
    pub seed: u64,
    pub profile: Profile,
    /// Buses per square kilometer.
    pub density_per_km2: f64,
    /// No two buses closer than this, meters.
    pub min_spacing: f64,
    /// Longitude/latitude the planar origin maps to.
    pub reference: (f64, f64),
    pub anomaly_fraction: f64,
    pub shortcut_fraction: f64,
}

impl SyntheticParams {
    pub fn new(n_buses: usize, seed: u64, profile: Profile) -> Self {
        SyntheticParams {
            n_buses,
            seed,
            profile,
            density_per_km2: 2400.0,
            min_spacing: 2.0,
            reference: (-122.19, 37.76),
            anomaly_fraction: 1.0 / 250.0,
            shortcut_fraction: 0.02,
        }
    }

    pub fn generate(&self) -> Result<GridSnapshot> {
        let n = self.n_buses;
        if n < 2 {
            return Err(Error::invalid(format!("need at least 2 buses, got {n}")));
        }
        if !(self.density_per_km2 > 0.0) || self.min_spacing < 0.0 {
            return Err(Error::invalid("density must be positive and spacing nonnegative"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let side = (n as f64 / self.density_per_km2).sqrt() * 1000.0;
        let points = self.scatter(&mut rng, side);
        let (edges, feeder_dist) = wire(&points, &mut rng, self.shortcut_fraction)?;
        let voltages = self.voltages(&mut rng, &points, &feeder_dist, side);

        let width = n.to_string().len();
        let names = (0..n).map(|i| format!("b{i:0width$}")).collect();
        let mut snap = GridSnapshot {
            extent: Extent::from_points(points.iter().copied()).expect("n >= 2"),
            buses: Vec::new(),
            edges: Vec::new(),
            projection: Some(Projection::new(self.reference.0, self.reference.1)),
            names,
        };
        snap.buses = points
            .iter()
            .zip(&voltages)
            .enumerate()
            .map(|(id, (p, &voltage))| super::Bus {
                id,
                x: p.x,
                y: p.y,
                voltage,
            })
            .collect();
        snap.set_edges(edges)?;
        Ok(snap)
    }

    fn scatter(&self, rng: &mut ChaCha8Rng, side: f64) -> Vec<Point> {
        let n = self.n_buses;
        let spacing = self.min_spacing;
        let bucket = spacing.max(1e-9);
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let mut points: Vec<Point> = Vec::with_capacity(n);

        let clusters: Vec<(Point, f64)> = match self.profile {
            Profile::Uniform => Vec::new(),
            Profile::Clustered => {
                let c = (n / 400).clamp(2, 40);
                (0..c)
                    .map(|_| {
                        let center = Point::new(rng.gen_range(0.1..0.9) * side, rng.gen_range(0.1..0.9) * side);
                        let sigma = side / (c as f64).sqrt() * rng.gen_range(0.15..0.35);
                        (center, sigma)
                    })
                    .collect()
            }
        };
        let normal = Normal::new(0.0, 1.0).expect("unit normal");

        let key = |p: Point| ((p.x / bucket).floor() as i64, (p.y / bucket).floor() as i64);
        let mut attempts = 0usize;
        while points.len() < n {
            attempts += 1;
            let candidate = if clusters.is_empty() || rng.gen_bool(0.2) || attempts > 50 * n {
                Point::new(rng.gen::<f64>() * side, rng.gen::<f64>() * side)
            } else {
                let (c, s) = clusters[rng.gen_range(0..clusters.len())];
                Point::new(
                    (c.x + s * normal.sample(rng)).clamp(0.0, side),
                    (c.y + s * normal.sample(rng)).clamp(0.0, side),
                )
            };
            let (kx, ky) = key(candidate);
            let crowded = (-1..=1).any(|dx| {
                (-1..=1).any(|dy| {
                    grid.get(&(kx + dx, ky + dy)).is_some_and(|ids| {
                        ids.iter().any(|&j| points[j].dist(candidate) < spacing)
                    })
                })
            });
            let duplicate = spacing == 0.0
                && grid
                    .get(&(kx, ky))
                    .is_some_and(|ids| ids.iter().any(|&j| points[j] == candidate));
            if crowded || duplicate {
                continue;
            }
            grid.entry((kx, ky)).or_default().push(points.len());
            points.push(candidate);
        }
        points
    }

    fn voltages(&self, rng: &mut ChaCha8Rng, points: &[Point], feeder_dist: &[f64], side: f64) -> Vec<f64> {
        let n = points.len();
        let max_dist = feeder_dist.iter().copied().fold(0.0, f64::max).max(1e-9);
        let waves: Vec<(f64, f64, f64)> = (0..3)
            .map(|_| {
                let lambda = side * rng.gen_range(0.25..0.6);
                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                let k = std::f64::consts::TAU / lambda;
                (k * theta.cos(), k * theta.sin(), rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        let noise = Normal::new(0.0, 0.0015).expect("valid sd");
        let mut volts: Vec<f64> = points
            .iter()
            .zip(feeder_dist)
            .map(|(p, &d)| {
                let ripple: f64 = waves.iter().map(|&(kx, ky, ph)| (kx * p.x + ky * p.y + ph).sin()).sum::<f64>() / 3.0;
                1.026 - 0.014 * (d / max_dist) + 0.0025 * ripple + noise.sample(rng)
            })
            .collect();

        let n_anom = ((n as f64 * self.anomaly_fraction).round() as usize).clamp(1, n);
        for (k, i) in sample(rng, n, n_anom).into_iter().enumerate() {
            volts[i] = if k % 2 == 0 {
                rng.gen_range(1.055..1.075)
            } else {
                rng.gen_range(0.935..0.948)
            };
        }
        volts
    }
}

/// Radial tree plus shortcuts; also returns along-feeder distance to the root.
fn wire(points: &[Point], rng: &mut ChaCha8Rng, shortcut_fraction: f64) -> Result<(Vec<(usize, usize)>, Vec<f64>)> {
    let n = points.len();
    let extent = Extent::from_points(points.iter().copied()).expect("nonempty");
    let middle = Point::new(
        0.5 * (extent.min_x + extent.max_x),
        0.5 * (extent.min_y + extent.max_y),
    );
    let index = PointIndex::build(points)?;
    let root = index.nearest(middle).0;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .dist2(points[root])
            .total_cmp(&points[b].dist2(points[root]))
            .then(a.cmp(&b))
    });
    let mut rank = vec![0usize; n];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }

    let mut edges = Vec::with_capacity(n + n / 20);
    let mut feeder = vec![0.0; n];
    for &i in order.iter().skip(1) {
        let mut k = 8.min(n);
        let parent = loop {
            let found = index
                .knn(points[i], k)?
                .into_iter()
                .find(|&(j, _)| rank[j] < rank[i]);
            match found {
                Some((j, _)) => break j,
                None if k < n => k = (2 * k).min(n),
                None => unreachable!("the root ranks below every other bus"),
            }
        };
        feeder[i] = feeder[parent] + points[i].dist(points[parent]);
        edges.push((parent, i));
    }

    let n_short = (n as f64 * shortcut_fraction) as usize;
    if n >= 4 {
        for _ in 0..n_short {
            let i = rng.gen_range(0..n);
            let pick = rng.gen_range(2..4);
            let j = index.knn(points[i], 4)?[pick].0;
            edges.push((i, j));
        }
    }
    Ok((edges, feeder))
}

/// Synthetic snapshot with default parameters.
pub fn gen_synthetic(n_buses: usize, seed: u64, profile: Profile) -> Result<GridSnapshot> {
    SyntheticParams::new(n_buses, seed, profile).generate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::build_graph;

    #[test]
    fn deterministic_for_seed() {
        let a = gen_synthetic(100, 7, Profile::Uniform).unwrap();
        let b = gen_synthetic(100, 7, Profile::Uniform).unwrap();
        assert_eq!(a, b);
        let c = gen_synthetic(100, 8, Profile::Uniform).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn connected() {
        for profile in [Profile::Uniform, Profile::Clustered] {
            let snap = gen_synthetic(100, 7, profile).unwrap();
            assert!(build_graph(&snap).is_connected());
            assert!(snap.edges.len() >= 99);
        }
    }

    #[test]
    fn has_anomalies() {
        let snap = gen_synthetic(1000, 1, Profile::Clustered).unwrap();
        assert!(snap.buses.iter().any(|b| !(0.95..=1.05).contains(&b.voltage)));
        assert!(snap.buses.iter().all(|b| b.voltage > 0.9 && b.voltage < 1.1));
    }

    #[test]
    fn respects_min_spacing() {
        let snap = gen_synthetic(600, 2, Profile::Clustered).unwrap();
        let idx = PointIndex::build(&snap.positions()).unwrap();
        for b in &snap.buses {
            let nn = idx.knn(b.pos(), 2).unwrap();
            assert!(nn[1].1 >= 2.0);
        }
    }

    #[test]
    fn too_small() {
        assert!(gen_synthetic(1, 0, Profile::Uniform).is_err());
        assert!(gen_synthetic(2, 0, Profile::Uniform).is_ok());
    }

    #[test]
    fn profile_tokens() {
        assert_eq!("clustered".parse::<Profile>().unwrap(), Profile::Clustered);
        assert!("dense".parse::<Profile>().is_err());
    }
}
