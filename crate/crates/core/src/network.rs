//! Bus adjacency, hop-count neighborhoods and hop-weighted voltage smoothing.
//!
//! Every edge counts as one hop, so shortest paths come from breadth-first
//! search. Only the `n` closest buses per source are ever materialized.

use rayon::prelude::*;

use crate::model::GridSnapshot;
use crate::weighting::weighted_mean;
use crate::{Error, Result};

/// Undirected adjacency lists, each sorted ascending without duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkGraph {
    adjacency: Vec<Vec<usize>>,
}

impl NetworkGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> NetworkGraph {
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in edges {
            if a != b && a < n && b < n {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        NetworkGraph { adjacency }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn degree(&self, bus: usize) -> usize {
        self.adjacency[bus].len()
    }

    pub fn neighbors(&self, bus: usize) -> &[usize] {
        &self.adjacency[bus]
    }

    /// Whether every bus is reachable from bus 0.
    pub fn is_connected(&self) -> bool {
        if self.adjacency.is_empty() {
            return true;
        }
        hop_neighbors(self, 0, self.len()).is_ok_and(|h| h.len() == self.len())
    }
}

pub fn build_graph(snapshot: &GridSnapshot) -> NetworkGraph {
    NetworkGraph::from_edges(snapshot.len(), snapshot.edges.iter().map(|e| (e.from, e.to)))
}

/// The `n` network-closest buses to one source, source first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopNeighborhood {
    /// `(bus, hops)` ascending by hops, then by bus index.
    pub entries: Vec<(usize, u32)>,
}

impl HopNeighborhood {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Breadth-first neighborhood of `source`, truncated to `n` entries.
///
/// Buses at equal hop count are taken in ascending index order. Returns
/// fewer than `n` entries when the connected component is smaller.
pub fn hop_neighbors(graph: &NetworkGraph, source: usize, n: usize) -> Result<HopNeighborhood> {
    if n == 0 {
        return Err(Error::invalid("neighborhood size must be at least 1"));
    }
    if source >= graph.len() {
        return Err(Error::invalid(format!("bus {source} out of range")));
    }
    let mut entries = vec![(source, 0u32)];
    let mut seen = std::collections::HashSet::from([source]);
    let mut frontier = vec![source];
    let mut hops = 0u32;
    while entries.len() < n && !frontier.is_empty() {
        hops += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in &graph.adjacency[u] {
                if seen.insert(v) {
                    next.push(v);
                }
            }
        }
        next.sort_unstable();
        let take = (n - entries.len()).min(next.len());
        entries.extend(next[..take].iter().map(|&v| (v, hops)));
        frontier = next;
    }
    Ok(HopNeighborhood { entries })
}

/// Neighborhoods for every bus, computed in parallel.
pub fn all_hop_neighbors(graph: &NetworkGraph, n: usize) -> Result<Vec<HopNeighborhood>> {
    (0..graph.len())
        .into_par_iter()
        .map(|i| hop_neighbors(graph, i, n))
        .collect()
}

/// Hop-weight of a neighbor: `1 / (hops + 1)`.
#[inline]
pub fn hop_weight(hops: u32) -> f64 {
    1.0 / (f64::from(hops) + 1.0)
}

/// Replaces every voltage by the hop-weighted mean over its neighborhood.
pub fn smooth(snapshot: &GridSnapshot, graph: &NetworkGraph, n: usize) -> Result<Vec<f64>> {
    let hoods = all_hop_neighbors(graph, n)?;
    smooth_with(&hoods, &snapshot.voltages())
}

/// Smoothing over precomputed neighborhoods; `voltages` is indexed by bus.
pub fn smooth_with(hoods: &[HopNeighborhood], voltages: &[f64]) -> Result<Vec<f64>> {
    if hoods.len() != voltages.len() {
        return Err(Error::invalid("neighborhood count does not match bus count"));
    }
    Ok(hoods
        .par_iter()
        .map(|h| {
            weighted_mean(
                h.entries
                    .iter()
                    .map(|&(j, hops)| (voltages[j], hop_weight(hops))),
            )
        })
        .collect())
}
