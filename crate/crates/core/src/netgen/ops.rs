use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::graph::Graph;
use crate::sim::NodeState;
use crate::{Error, Result, Seed};

/// Subgraph induced by the nodes whose state is susceptible, relabeled in
/// ascending order of original id. Also returns the kept original ids.
pub fn induced_susceptible_subgraph(g: &Graph, states: &[NodeState]) -> Result<(Graph, Vec<u32>)> {
    if states.len() != g.n() {
        return Err(Error::param(format!(
            "state vector has length {} but the graph has {} nodes",
            states.len(),
            g.n()
        )));
    }
    let keep: Vec<bool> = states.iter().map(|&s| s == NodeState::S).collect();
    Ok(induced_subgraph(g, &keep))
}

/// Subgraph induced by `keep[v] == true`, relabeled in ascending order.
pub fn induced_subgraph(g: &Graph, keep: &[bool]) -> (Graph, Vec<u32>) {
    let mut new_id = vec![u32::MAX; g.n()];
    let mut kept = Vec::new();
    for v in 0..g.n() {
        if keep[v] {
            new_id[v] = kept.len() as u32;
            kept.push(v as u32);
        }
    }
    let adj: Vec<Vec<u32>> = kept
        .iter()
        .map(|&v| {
            g.neighbors(v as usize)
                .iter()
                .filter(|&&w| keep[w as usize])
                .map(|&w| new_id[w as usize])
                .collect()
        })
        .collect();
    (Graph::from_adjacency(&adj), kept)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImmunizationStrategy {
    Random,
    TopDegree,
}

/// ⌈fraction·n⌉ nodes chosen by `strategy`, sorted ascending.
///
/// `TopDegree` takes nodes by decreasing degree, ties broken by smaller id.
pub fn immunize(g: &Graph, fraction: f64, strategy: ImmunizationStrategy, seed: Seed) -> Result<Vec<u32>> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::param(format!(
            "immunization fraction must lie in [0, 1], got {fraction}"
        )));
    }
    let n = g.n();
    // Guard against 0.1 * 10 landing a hair above 1.
    let count = ((fraction * n as f64) - 1e-9).ceil().clamp(0.0, n as f64) as usize;
    let mut chosen: Vec<u32> = match strategy {
        ImmunizationStrategy::TopDegree => {
            let mut order: Vec<u32> = (0..n as u32).collect();
            order.sort_by(|&a, &b| g.degree(b as usize).cmp(&g.degree(a as usize)).then(a.cmp(&b)));
            order.truncate(count);
            order
        }
        ImmunizationStrategy::Random => {
            let mut rng = seed.rng();
            sample(&mut rng, n, count).into_iter().map(|v| v as u32).collect()
        }
    };
    chosen.sort_unstable();
    Ok(chosen)
}
