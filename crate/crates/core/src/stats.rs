//! Topological summary statistics: average degree, clustering, distance.

use std::collections::VecDeque;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Graphs up to this size get exact all-pairs distances in `Auto` mode.
pub const EXACT_DISTANCE_LIMIT: usize = 10_000;
/// Number of BFS sources used when the average distance is estimated.
pub const SAMPLED_SOURCES: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMode {
    /// Exact up to [`EXACT_DISTANCE_LIMIT`] nodes, sampled beyond.
    #[default]
    Auto,
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkStats {
    pub nodes: usize,
    pub edges: usize,
    pub avg_degree: f64,
    pub clustering: f64,
    pub avg_distance: f64,
    pub distance_is_estimate: bool,
}

pub fn stats(g: &Graph, mode: DistanceMode, seed: u64) -> Result<NetworkStats> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.node_count();
    let sampled = match mode {
        DistanceMode::Exact => false,
        DistanceMode::Sampled => true,
        DistanceMode::Auto => n > EXACT_DISTANCE_LIMIT,
    };
    let avg_distance = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = SAMPLED_SOURCES.min(n);
        let mut sources: Vec<NodeId> = index::sample(&mut rng, n, k)
            .into_iter()
            .map(|v| v as NodeId)
            .collect();
        sources.sort_unstable();
        mean_distance_from(g, &sources)
    } else {
        let all: Vec<NodeId> = (0..n as NodeId).collect();
        mean_distance_from(g, &all)
    };
    Ok(NetworkStats {
        nodes: n,
        edges: g.edge_count(),
        avg_degree: average_degree(g),
        clustering: average_clustering(g),
        avg_distance,
        distance_is_estimate: sampled,
    })
}

pub fn average_degree(g: &Graph) -> f64 {
    2.0 * g.edge_count() as f64 / g.node_count() as f64
}

/// Local clustering coefficient of `v`; zero below degree two.
pub fn local_clustering(g: &Graph, v: NodeId) -> f64 {
    let nb = g.neighbors(v);
    let k = nb.len();
    if k < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (i, &a) in nb.iter().enumerate() {
        links += sorted_intersection_count(&nb[i + 1..], g.neighbors(a));
    }
    2.0 * links as f64 / (k * (k - 1)) as f64
}

pub fn average_clustering(g: &Graph) -> f64 {
    let n = g.node_count();
    if n == 0 {
        return 0.0;
    }
    let sum: f64 = (0..n as NodeId).map(|v| local_clustering(g, v)).sum();
    sum / n as f64
}

fn sorted_intersection_count(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// BFS distances from one source; unreachable nodes stay at `u32::MAX`.
pub fn bfs_distances(g: &Graph, source: NodeId) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.node_count()];
    let mut queue = VecDeque::new();
    dist[source as usize] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize] + 1;
        for &w in g.neighbors(v) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = d;
                queue.push_back(w);
            }
        }
    }
    dist
}

// Integer sums keep the mean independent of how sources are split across workers.
fn mean_distance_from(g: &Graph, sources: &[NodeId]) -> f64 {
    let n = g.node_count();
    if n < 2 {
        return 0.0;
    }
    let total: u64 = sources
        .par_iter()
        .map(|&s| bfs_distances(g, s).into_iter().map(u64::from).sum::<u64>())
        .sum();
    total as f64 / (sources.len() * (n - 1)) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> Graph {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        Graph::from_edges(n as usize, edges).unwrap()
    }

    #[test]
    fn triangle() {
        let s = stats(&complete(3), DistanceMode::Auto, 0).unwrap();
        assert_eq!(s.avg_degree, 2.0);
        assert_eq!(s.clustering, 1.0);
        assert_eq!(s.avg_distance, 1.0);
        assert!(!s.distance_is_estimate);
    }

    #[test]
    fn complete_graph_clustering_is_one() {
        assert_eq!(average_clustering(&complete(7)), 1.0);
    }

    #[test]
    fn tree_clustering_is_zero() {
        let star = Graph::from_edges(6, (1..6).map(|v| (0, v))).unwrap();
        assert_eq!(average_clustering(&star), 0.0);
    }

    #[test]
    fn path_distance() {
        // path of 4: distances 1,2,3,1,2,1 over 6 pairs
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = stats(&g, DistanceMode::Exact, 0).unwrap();
        assert!((s.avg_distance - 10.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            stats(&g, DistanceMode::Auto, 0),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn sampled_mode_on_small_graph_uses_every_source() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let exact = stats(&g, DistanceMode::Exact, 0).unwrap();
        let sampled = stats(&g, DistanceMode::Sampled, 3).unwrap();
        assert!(sampled.distance_is_estimate);
        assert!((exact.avg_distance - sampled.avg_distance).abs() < 1e-12);
    }
}
