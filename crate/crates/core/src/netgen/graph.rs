use serde::Serialize;

use crate::{Error, Result};

/// Undirected simple graph over node ids `0..n`, stored as sorted adjacency
/// in compressed-row form.
///
/// A built `Graph` is immutable; share it by reference across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

/// Counts of input pairs that were dropped while building a simple graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DropReport {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Build from an arbitrary pair list, dropping self-loops and repeated
    /// pairs. Fails if an endpoint is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<(Self, DropReport)>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut report = DropReport::default();
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (a, b) in edges {
            if a as usize >= n || b as usize >= n {
                return Err(Error::param(format!("edge ({a}, {b}) has an endpoint outside 0..{n}")));
            }
            if a == b {
                report.self_loops += 1;
                continue;
            }
            pairs.push(if a < b { (a, b) } else { (b, a) });
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        report.duplicates = before - pairs.len();
        Ok((Self::from_unique_pairs(n, &pairs), report))
    }

    /// `pairs` must be sorted, deduplicated, loop-free and in range.
    fn from_unique_pairs(n: usize, pairs: &[(u32, u32)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(a, b) in pairs {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        for &(a, b) in pairs {
            targets[fill[a as usize]] = b;
            fill[a as usize] += 1;
            targets[fill[b as usize]] = a;
            fill[b as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph { offsets, targets }
    }

    /// Freeze a list of adjacency sets (assumed symmetric and loop-free).
    pub(crate) fn from_adjacency(adj: &[Vec<u32>]) -> Self {
        let n = adj.len();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(adj.iter().map(Vec::len).sum());
        for list in adj {
            let start = targets.len();
            targets.extend_from_slice(list);
            targets[start..].sort_unstable();
            offsets.push(targets.len());
        }
        Graph { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.n() == 0
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (x, y) = if self.degree(a) <= self.degree(b) {
            (a, b)
        } else {
            (b, a)
        };
        self.neighbors(x).binary_search(&(y as u32)).is_ok()
    }

    /// Each undirected edge once, as `(lo, hi)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |v| {
            self.neighbors(v)
                .iter()
                .filter(move |&&w| (w as usize) > v)
                .map(move |&w| (v as u32, w))
        })
    }

    pub fn avg_degree(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            2.0 * self.edge_count() as f64 / self.n() as f64
        }
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Checks every structural invariant. Used by tests and after ingestion.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for v in 0..n {
            let nb = self.neighbors(v);
            for w in nb.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::param(format!("node {v}: unsorted or duplicate neighbor")));
                }
            }
            for &w in nb {
                let w = w as usize;
                if w >= n {
                    return Err(Error::param(format!("node {v}: neighbor {w} out of range")));
                }
                if w == v {
                    return Err(Error::param(format!("node {v}: self-loop")));
                }
                if self.neighbors(w).binary_search(&(v as u32)).is_err() {
                    return Err(Error::param(format!("edge ({v}, {w}) is not symmetric")));
                }
            }
        }
        Ok(())
    }

    /// Node ids of the largest connected component (ties: the component
    /// containing the smallest id), in ascending order.
    pub fn largest_component(&self) -> Vec<u32> {
        let n = self.n();
        let mut comp = vec![u32::MAX; n];
        let mut best: (usize, u32) = (0, 0);
        let mut queue = Vec::new();
        let mut next_id = 0u32;
        for s in 0..n {
            if comp[s] != u32::MAX {
                continue;
            }
            comp[s] = next_id;
            queue.clear();
            queue.push(s as u32);
            let mut head = 0;
            while head < queue.len() {
                let v = queue[head] as usize;
                head += 1;
                for &w in self.neighbors(v) {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = next_id;
                        queue.push(w);
                    }
                }
            }
            if queue.len() > best.0 {
                best = (queue.len(), next_id);
            }
            next_id += 1;
        }
        (0..n as u32)
            .filter(|&v| comp[v as usize] == best.1 && best.0 > 0)
            .collect()
    }
}

/// Mutable adjacency used by the growth generators.
#[derive(Debug, Clone, Default)]
pub(crate) struct GraphBuilder {
    pub(crate) adj: Vec<Vec<u32>>,
    edges: usize,
}

impl GraphBuilder {
    pub(crate) fn new(n: usize) -> Self {
        GraphBuilder {
            adj: vec![Vec::new(); n],
            edges: 0,
        }
    }

    pub(crate) fn add_node(&mut self) -> u32 {
        self.adj.push(Vec::new());
        (self.adj.len() - 1) as u32
    }

    pub(crate) fn node_count(&self) -> usize {
        self.adj.len()
    }

    #[cfg(test)]
    pub(crate) fn edge_count(&self) -> usize {
        self.edges
    }

    pub(crate) fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub(crate) fn has_edge(&self, a: u32, b: u32) -> bool {
        let (x, y) = if self.adj[a as usize].len() <= self.adj[b as usize].len() {
            (a, b)
        } else {
            (b, a)
        };
        self.adj[x as usize].contains(&y)
    }

    /// Adds `a—b` unless it is a loop or already present. Returns whether an
    /// edge was added.
    pub(crate) fn add_edge(&mut self, a: u32, b: u32) -> bool {
        if a == b || self.has_edge(a, b) {
            return false;
        }
        self.adj[a as usize].push(b);
        self.adj[b as usize].push(a);
        self.edges += 1;
        true
    }

    pub(crate) fn remove_edge(&mut self, a: u32, b: u32) -> bool {
        let ia = self.adj[a as usize].iter().position(|&x| x == b);
        let ib = self.adj[b as usize].iter().position(|&x| x == a);
        match (ia, ib) {
            (Some(i), Some(j)) => {
                self.adj[a as usize].swap_remove(i);
                self.adj[b as usize].swap_remove(j);
                self.edges -= 1;
                true
            }
            _ => false,
        }
    }

    pub(crate) fn build(&self) -> Graph {
        Graph::from_adjacency(&self.adj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_drops_loops_and_duplicates() {
        let (g, rep) = Graph::from_edges(3, [(0, 1), (1, 0), (2, 2), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(
            rep,
            DropReport {
                self_loops: 1,
                duplicates: 1
            }
        );
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(0, 2));
        g.validate().unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn out_of_range_endpoint_is_rejected() {
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn largest_component_picks_biggest() {
        let (g, _) = Graph::from_edges(6, [(0, 1), (2, 3), (3, 4)]).unwrap();
        assert_eq!(g.largest_component(), vec![2, 3, 4]);
        assert!(Graph::empty(0).largest_component().is_empty());
    }

    #[test]
    fn builder_roundtrip() {
        let mut b = GraphBuilder::new(3);
        assert!(b.add_edge(0, 1));
        assert!(!b.add_edge(1, 0));
        assert!(!b.add_edge(2, 2));
        assert!(b.add_edge(2, 1));
        assert!(b.remove_edge(0, 1));
        assert_eq!(b.edge_count(), 1);
        let g = b.build();
        g.validate().unwrap();
        assert_eq!(g.edge_count(), 1);
    }
}
