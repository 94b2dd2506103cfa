use rand::Rng;
use serde::Serialize;

use super::graph::Graph;
use crate::{Error, Result, Seed};

/// Header of the one-row stats CSV.
pub const STATS_CSV_HEADER: &str = "n,edges,avg_degree,clustering,avg_path,plaw_exp";

/// Upper bound on BFS sources when shortest paths are sampled.
const MAX_PATH_SOURCES: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub edge_count: usize,
    pub avg_degree: f64,
    /// Mean local clustering; nodes of degree < 2 count as 0.
    pub global_clustering: f64,
    /// Mean shortest-path length within the largest component; NaN when it
    /// has fewer than two nodes.
    pub avg_shortest_path: f64,
    /// Whether `avg_shortest_path` averages every pair exactly.
    pub path_exact: bool,
    pub powerlaw_exponent: f64,
    /// Degree range `[kmin, kmax]` used for the exponent fit.
    pub powerlaw_fit_range: (usize, usize),
}

impl GraphStats {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n,
            self.edge_count,
            self.avg_degree,
            self.global_clustering,
            self.avg_shortest_path,
            self.powerlaw_exponent
        )
    }
}

/// Summary statistics; shortest paths are averaged over `path_sample_pairs`
/// random pairs of the largest component, or over all of its pairs when
/// there are no more than that.
pub fn graph_stats(g: &Graph, path_sample_pairs: usize, seed: Seed) -> Result<GraphStats> {
    if g.is_empty() {
        return Err(Error::param("graph statistics need a non-empty graph"));
    }
    if path_sample_pairs == 0 {
        return Err(Error::param("path_sample_pairs must be >= 1"));
    }
    let (avg_shortest_path, path_exact) = avg_path(g, path_sample_pairs, seed);
    let (powerlaw_exponent, powerlaw_fit_range) = powerlaw_exponent(&g.degrees());
    Ok(GraphStats {
        n: g.n(),
        edge_count: g.edge_count(),
        avg_degree: g.avg_degree(),
        global_clustering: avg_clustering(g),
        avg_shortest_path,
        path_exact,
        powerlaw_exponent,
        powerlaw_fit_range,
    })
}

/// Per-node local clustering coefficients.
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut mark = vec![u32::MAX; n];
    (0..n)
        .map(|v| {
            let nb = g.neighbors(v);
            let d = nb.len();
            if d < 2 {
                return 0.0;
            }
            for &w in nb {
                mark[w as usize] = v as u32;
            }
            let mut links = 0usize;
            for &w in nb {
                links += g
                    .neighbors(w as usize)
                    .iter()
                    .filter(|&&x| mark[x as usize] == v as u32)
                    .count();
            }
            // Each link inside the neighbourhood was seen from both ends.
            links as f64 / (d * (d - 1)) as f64
        })
        .collect()
}

pub fn avg_clustering(g: &Graph) -> f64 {
    if g.is_empty() {
        return 0.0;
    }
    local_clustering(g).iter().sum::<f64>() / g.n() as f64
}

/// BFS hop distances from `src`; unreachable nodes get `u32::MAX`.
pub fn bfs_distances(g: &Graph, src: usize, dist: &mut Vec<u32>, queue: &mut Vec<u32>) {
    dist.clear();
    dist.resize(g.n(), u32::MAX);
    queue.clear();
    dist[src] = 0;
    queue.push(src as u32);
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head] as usize;
        head += 1;
        let dv = dist[v] + 1;
        for &w in g.neighbors(v) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dv;
                queue.push(w);
            }
        }
    }
}

fn avg_path(g: &Graph, pairs: usize, seed: Seed) -> (f64, bool) {
    let comp = g.largest_component();
    let c = comp.len();
    if c < 2 {
        return (f64::NAN, true);
    }
    let mut dist = Vec::new();
    let mut queue = Vec::new();
    let all_pairs = c * (c - 1) / 2;
    if all_pairs <= pairs {
        let mut total = 0u64;
        for &s in &comp {
            bfs_distances(g, s as usize, &mut dist, &mut queue);
            total += comp
                .iter()
                .filter(|&&t| t > s)
                .map(|&t| dist[t as usize] as u64)
                .sum::<u64>();
        }
        return (total as f64 / all_pairs as f64, true);
    }
    let mut rng = seed.rng();
    let sources = MAX_PATH_SOURCES.min(c).min(pairs);
    let per_source = pairs.div_ceil(sources);
    let mut total = 0u64;
    let mut count = 0u64;
    for _ in 0..sources {
        let s = comp[rng.random_range(0..c)] as usize;
        bfs_distances(g, s, &mut dist, &mut queue);
        for _ in 0..per_source {
            let mut t = comp[rng.random_range(0..c)] as usize;
            while t == s {
                t = comp[rng.random_range(0..c)] as usize;
            }
            total += dist[t] as u64;
            count += 1;
        }
    }
    (total as f64 / count as f64, false)
}

/// Exponent of a powerlaw fitted to the cumulative degree distribution.
///
/// Least-squares line through `(ln k, ln P(K ≥ k))` over the observed
/// degrees `k ≥ max(2, modal degree)`; the exponent is `1 − slope`.
/// Returns NaN when fewer than two distinct degrees are in range.
pub fn powerlaw_exponent(degrees: &[usize]) -> (f64, (usize, usize)) {
    let kmax = degrees.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0usize; kmax + 1];
    for &d in degrees {
        hist[d] += 1;
    }
    let modal = hist
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(k, _)| k)
        .unwrap_or(0);
    let kfit = modal.max(2);
    let n = degrees.len() as f64;
    let mut tail = 0usize;
    let mut pts = Vec::new();
    for k in (kfit..=kmax).rev() {
        tail += hist[k];
        if hist[k] > 0 {
            pts.push(((k as f64).ln(), (tail as f64 / n).ln()));
        }
    }
    if pts.len() < 2 {
        return (f64::NAN, (kfit, kmax));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (1.0 - sxy / sxx, (kfit, kmax))
}
