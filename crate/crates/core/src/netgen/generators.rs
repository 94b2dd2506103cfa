use rand::seq::SliceRandom;
use rand::Rng;
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use super::degseq::{assign_degrees, sample_degree_sequence, DegreeSequence};
use super::graph::{Graph, GraphBuilder};
use crate::gfun::DegreeDistribution;
use crate::{Error, Result, Seed};

/// Parameters of every supported random-graph family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GeneratorParams {
    /// Barabási–Albert preferential attachment.
    Ba { n: usize, m: usize },
    /// Holme–Kim powerlaw-cluster growth with triad probability `p`.
    Plc { n: usize, m: usize, p: f64 },
    /// Watts–Strogatz ring of degree `k`, rewired with probability `p`.
    Ws { n: usize, k: usize, p: f64 },
    /// Random-walk growth: continue w.p. `q_e`, link each visited node w.p. `q_v`.
    Rw { n: usize, q_e: f64, q_v: f64 },
    /// Nearest-neighbour growth: close a pending 2-hop pair w.p. `u`, plus
    /// `k` random pairs per added node.
    Nn { n: usize, u: f64, k: usize },
    /// Configuration model over an explicit degree sequence.
    Config { degree_sequence: DegreeSequence },
}

/// Result of stub matching.
#[derive(Debug, Clone)]
pub struct ConfigGraph {
    pub graph: Graph,
    /// Degree assigned to each node before matching.
    pub target_degrees: Vec<usize>,
    /// Stubs that could not be matched without a loop or repeated edge.
    pub dropped_stubs: usize,
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, x: f64| {
            if (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(Error::param(format!("{name} must lie in [0, 1], got {x}")))
            }
        };
        match self {
            GeneratorParams::Ba { n, m } | GeneratorParams::Plc { n, m, .. } => {
                if *m < 1 || *n <= *m {
                    return Err(Error::param(format!("need n > m >= 1, got n = {n}, m = {m}")));
                }
                if let GeneratorParams::Plc { p, .. } = self {
                    prob("p", *p)?;
                }
            }
            GeneratorParams::Ws { n, k, p } => {
                if k % 2 == 1 || *k >= *n {
                    return Err(Error::param(format!("need even k < n, got n = {n}, k = {k}")));
                }
                prob("p", *p)?;
            }
            GeneratorParams::Rw { n, q_e, q_v } => {
                if *n < 2 {
                    return Err(Error::param("random-walk model needs n >= 2"));
                }
                prob("q_e", *q_e)?;
                prob("q_v", *q_v)?;
            }
            GeneratorParams::Nn { n, u, .. } => {
                if *n < 2 {
                    return Err(Error::param("nearest-neighbour model needs n >= 2"));
                }
                prob("u", *u)?;
            }
            GeneratorParams::Config { degree_sequence } => {
                if degree_sequence.stub_count() % 2 == 1 {
                    return Err(Error::param("degree sequence has an odd stub total"));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        match self {
            GeneratorParams::Ba { n, .. }
            | GeneratorParams::Plc { n, .. }
            | GeneratorParams::Ws { n, .. }
            | GeneratorParams::Rw { n, .. }
            | GeneratorParams::Nn { n, .. } => *n,
            GeneratorParams::Config { degree_sequence } => degree_sequence.n() as usize,
        }
    }
}

/// Build a graph from any family.
pub fn generate(params: &GeneratorParams, seed: Seed) -> Result<Graph> {
    match params {
        GeneratorParams::Ba { n, m } => gen_ba(*n, *m, seed),
        GeneratorParams::Plc { n, m, p } => gen_plc(*n, *m, *p, seed),
        GeneratorParams::Ws { n, k, p } => gen_ws(*n, *k, *p, seed),
        GeneratorParams::Rw { n, q_e, q_v } => gen_rw(*n, *q_e, *q_v, seed),
        GeneratorParams::Nn { n, u, k } => gen_nn(*n, *u, *k, seed),
        GeneratorParams::Config { degree_sequence } => Ok(gen_config_model(degree_sequence, seed)?.graph),
    }
}

/// `m` distinct draws from `seq`, in draw order.
fn random_subset(seq: &[u32], m: usize, rng: &mut Pcg64) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::with_capacity(m);
    while out.len() < m {
        let x = seq[rng.random_range(0..seq.len())];
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Preferential attachment grown from a star on `m + 1` nodes.
pub fn gen_ba(n: usize, m: usize, seed: Seed) -> Result<Graph> {
    GeneratorParams::Ba { n, m }.validate()?;
    let mut rng = seed.rng();
    let mut b = GraphBuilder::new(m + 1);
    // Each node appears once per incident edge, so uniform draws are
    // degree-proportional.
    let mut repeated: Vec<u32> = Vec::with_capacity(2 * m * n);
    for leaf in 1..=m as u32 {
        b.add_edge(0, leaf);
        repeated.push(0);
        repeated.push(leaf);
    }
    for _ in (m + 1)..n {
        let source = b.add_node();
        debug_assert_eq!(source as usize, b.node_count() - 1);
        let targets = random_subset(&repeated, m, &mut rng);
        for &t in &targets {
            b.add_edge(source, t);
        }
        repeated.extend_from_slice(&targets);
        repeated.extend(std::iter::repeat_n(source, m));
    }
    Ok(b.build())
}

/// Holme–Kim growth: preferential attachment where each further edge is,
/// with probability `p`, a triangle-closing edge to a neighbour of the last
/// preferential target.
pub fn gen_plc(n: usize, m: usize, p: f64, seed: Seed) -> Result<Graph> {
    GeneratorParams::Plc { n, m, p }.validate()?;
    let mut rng = seed.rng();
    let mut b = GraphBuilder::new(m);
    let mut repeated: Vec<u32> = (0..m as u32).collect();
    let mut hood = Vec::new();
    for _ in m..n {
        let source = b.add_node();
        let mut pool = random_subset(&repeated, m, &mut rng);
        let mut target = pool.pop().expect("m >= 1");
        b.add_edge(source, target);
        repeated.push(target);
        let mut count = 1;
        while count < m {
            if rng.random::<f64>() < p {
                hood.clear();
                hood.extend(
                    b.adj[target as usize]
                        .iter()
                        .copied()
                        .filter(|&w| w != source && !b.has_edge(source, w)),
                );
                if !hood.is_empty() {
                    let w = hood[rng.random_range(0..hood.len())];
                    b.add_edge(source, w);
                    repeated.push(w);
                    count += 1;
                    continue;
                }
            }
            // A repeat of an earlier triad edge is a no-op but still counts.
            target = pool.pop().expect("pool holds m targets");
            b.add_edge(source, target);
            repeated.push(target);
            count += 1;
        }
        repeated.extend(std::iter::repeat_n(source, m));
    }
    Ok(b.build())
}

/// Ring lattice with `k/2` neighbours on each side, each lattice edge
/// rewired to a uniform new endpoint with probability `p`.
pub fn gen_ws(n: usize, k: usize, p: f64, seed: Seed) -> Result<Graph> {
    GeneratorParams::Ws { n, k, p }.validate()?;
    let mut rng = seed.rng();
    let mut b = GraphBuilder::new(n);
    for j in 1..=k / 2 {
        for v in 0..n {
            b.add_edge(v as u32, ((v + j) % n) as u32);
        }
    }
    for j in 1..=k / 2 {
        for v in 0..n {
            if rng.random::<f64>() >= p {
                continue;
            }
            let (u, old) = (v as u32, ((v + j) % n) as u32);
            if b.degree(u) >= n - 1 {
                continue;
            }
            let mut w = rng.random_range(0..n) as u32;
            while w == u || b.has_edge(u, w) {
                w = rng.random_range(0..n) as u32;
            }
            if b.remove_edge(u, old) {
                b.add_edge(u, w);
            }
        }
    }
    Ok(b.build())
}

/// Random-walk growth: each new node links to a uniform anchor, then walks
/// from it, continuing with probability `q_e` and linking to each visited
/// node with probability `q_v`.
pub fn gen_rw(n: usize, q_e: f64, q_v: f64, seed: Seed) -> Result<Graph> {
    GeneratorParams::Rw { n, q_e, q_v }.validate()?;
    let mut rng = seed.rng();
    let mut b = GraphBuilder::new(2);
    b.add_edge(0, 1);
    for _ in 2..n {
        let extant = b.node_count() as u32;
        let anchor = rng.random_range(0..extant);
        let v = b.add_node();
        b.add_edge(v, anchor);
        let mut cur = anchor;
        while rng.random::<f64>() < q_e {
            let nb = &b.adj[cur as usize];
            let choices: Vec<u32> = nb.iter().copied().filter(|&w| w != v).collect();
            if choices.is_empty() {
                break;
            }
            cur = choices[rng.random_range(0..choices.len())];
            if rng.random::<f64>() < q_v {
                b.add_edge(v, cur);
            }
        }
    }
    Ok(b.build())
}

/// Nearest-neighbour growth.
///
/// Each step, with probability `1 − u` a node joins, linked to a uniform
/// anchor; every (new node, neighbour of anchor) pair becomes a pending
/// edge. The anchor link counts as the first of `k` links per new node, the
/// remaining `k − 1` join uniform random pairs. Otherwise a uniformly chosen
/// pending pair is linked.
///
/// Mean degree is about `2(max(k, 1) + u/(1 − u))`.
pub fn gen_nn(n: usize, u: f64, k: usize, seed: Seed) -> Result<Graph> {
    GeneratorParams::Nn { n, u, k }.validate()?;
    let mut rng = seed.rng();
    let mut b = GraphBuilder::new(2);
    b.add_edge(0, 1);
    let mut pending: Vec<(u32, u32)> = Vec::new();
    while b.node_count() < n {
        if !pending.is_empty() && rng.random::<f64>() < u {
            let i = rng.random_range(0..pending.len());
            let (a, c) = pending.swap_remove(i);
            b.add_edge(a, c);
            continue;
        }
        let extant = b.node_count() as u32;
        let anchor = rng.random_range(0..extant);
        let v = b.add_node();
        pending.extend(b.adj[anchor as usize].iter().map(|&w| (v, w)));
        b.add_edge(v, anchor);
        let total = b.node_count() as u32;
        for _ in 1..k {
            let a = rng.random_range(0..total);
            let c = rng.random_range(0..total);
            b.add_edge(a, c);
        }
    }
    Ok(b.build())
}

/// Uniform stub matching.
///
/// Stubs are shuffled and matched in order. A stub whose partner would form
/// a self-loop or repeat an edge redraws its partner among the unmatched
/// stubs, up to `n` attempts, after which it is dropped and counted.
pub fn gen_config_model(seq: &DegreeSequence, seed: Seed) -> Result<ConfigGraph> {
    if seq.stub_count() % 2 == 1 {
        return Err(Error::param(format!(
            "degree sequence has an odd stub total ({})",
            seq.stub_count()
        )));
    }
    let mut rng = seed.rng();
    let target_degrees = assign_degrees(seq, &mut rng);
    let n = target_degrees.len();
    Ok(match_stubs(target_degrees, &mut rng, n))
}

/// Configuration-model graph for a distribution: sample, then match.
pub fn config_graph_from_dist(dist: &DegreeDistribution, n: usize, seed: Seed) -> Result<ConfigGraph> {
    let seq = sample_degree_sequence(dist, n, seed.derive(0))?;
    gen_config_model(&seq, seed.derive(1))
}

fn match_stubs(target_degrees: Vec<usize>, rng: &mut Pcg64, n: usize) -> ConfigGraph {
    let mut stubs: Vec<u32> = Vec::with_capacity(target_degrees.iter().sum());
    for (v, &d) in target_degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v as u32, d));
    }
    stubs.shuffle(rng);
    let mut b = GraphBuilder::new(n);
    let mut dropped = 0;
    let attempts = n.max(1);
    // Consume from the back; the partner is the next stub, or a redraw.
    while let Some(a) = stubs.pop() {
        let Some(&c) = stubs.last() else {
            dropped += 1;
            break;
        };
        if c != a && !b.has_edge(a, c) {
            stubs.pop();
            b.add_edge(a, c);
            continue;
        }
        let mut matched = false;
        for _ in 0..attempts {
            let j = rng.random_range(0..stubs.len());
            let c = stubs[j];
            if c != a && !b.has_edge(a, c) {
                stubs.swap_remove(j);
                b.add_edge(a, c);
                matched = true;
                break;
            }
        }
        if !matched {
            dropped += 1;
        }
    }
    ConfigGraph {
        graph: b.build(),
        target_degrees,
        dropped_stubs: dropped,
    }
}
