use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng;
use rand_distr::{Distribution, Exp};
use rand_pcg::Pcg64;
use serde::Serialize;

use super::metrics::{build_waves, Wave};
use super::params::{EpidemicParams, NodeState, QuarantinePolicy};
use crate::netgen::Graph;
use crate::{Error, Result, Seed};

/// One record of the compartment counts, taken after every state change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Record {
    pub t: f64,
    pub s: u32,
    pub i: u32,
    pub r: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuarantineRecord {
    pub time: f64,
    /// Fraction of nodes ever infected when the quarantine fired.
    pub affected_fraction: f64,
    /// Susceptible count right after the quarantine, before reseeding.
    pub susceptible_after: usize,
    /// Nodes infected by the reseed (less than `rho` on a shortfall).
    pub reseeded: usize,
}

/// Optional recording and immunized nodes for one run.
#[derive(Debug, Clone, Default)]
pub struct SimOptions {
    /// Keep the full (t, S, I, R) series in the outcome.
    pub record_series: bool,
    /// Keep each node's infection time (infinite when never infected).
    pub record_infection_times: bool,
    /// Nodes that start in the removed state and are never infected.
    pub immune: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimOutcome {
    pub n: usize,
    /// Nodes ever infected (seeds included), as a fraction of n. Immunized
    /// nodes are not counted.
    pub final_removed_fraction: f64,
    pub max_infected_fraction: f64,
    pub total_infected: usize,
    pub end_time: f64,
    pub quarantines: Vec<QuarantineRecord>,
    pub waves: Vec<Wave>,
    /// Some reseed found fewer than `rho` susceptible nodes.
    pub reseed_shortfall: bool,
    pub immune_count: usize,
    #[serde(skip)]
    pub final_states: Vec<NodeState>,
    #[serde(skip)]
    pub series: Option<Vec<Record>>,
    #[serde(skip)]
    pub infection_times: Option<Vec<f64>>,
}

impl SimOutcome {
    pub fn n_quarantines(&self) -> usize {
        self.quarantines.len()
    }

    /// Whether the wave after quarantine `index` infected at least 5% of the
    /// nodes left susceptible by that quarantine (reseeds excluded).
    pub fn second_wave(&self, index: usize) -> Result<bool> {
        detect_second_wave(self, index)
    }

    pub fn any_second_wave(&self) -> bool {
        self.waves.iter().skip(1).any(|w| w.second_wave)
    }
}

/// Fraction of the susceptible pool that a post-quarantine wave must
/// infect to count as a second wave.
pub const SECOND_WAVE_FRACTION: f64 = 0.05;

pub fn detect_second_wave(outcome: &SimOutcome, index: usize) -> Result<bool> {
    if index >= outcome.quarantines.len() {
        return Err(Error::param(format!(
            "quarantine index {index} out of range ({} quarantines)",
            outcome.quarantines.len()
        )));
    }
    Ok(outcome.waves[index + 1].second_wave)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Infect,
    Recover,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    t: f64,
    seq: u64,
    kind: Kind,
    node: u32,
    epoch: u32,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // Reversed so the max-heap pops the earliest event; `seq` breaks ties
    // in insertion order.
    fn cmp(&self, other: &Self) -> Ordering {
        other.t.total_cmp(&self.t).then(other.seq.cmp(&self.seq))
    }
}

/// Indexable set supporting O(1) insert, remove and uniform sampling.
struct NodeSet {
    items: Vec<u32>,
    pos: Vec<u32>,
}

impl NodeSet {
    fn new(n: usize) -> Self {
        NodeSet {
            items: Vec::new(),
            pos: vec![u32::MAX; n],
        }
    }

    fn insert(&mut self, v: u32) {
        self.pos[v as usize] = self.items.len() as u32;
        self.items.push(v);
    }

    fn remove(&mut self, v: u32) {
        let i = self.pos[v as usize] as usize;
        let last = *self.items.last().expect("remove from non-empty set");
        self.items.swap_remove(i);
        if last != v {
            self.pos[last as usize] = i as u32;
        }
        self.pos[v as usize] = u32::MAX;
    }

    fn len(&self) -> usize {
        self.items.len()
    }
}

struct Sim<'a> {
    g: &'a Graph,
    beta: Option<Exp<f64>>,
    gamma: Exp<f64>,
    rng: Pcg64,
    state: Vec<NodeState>,
    pred: Vec<f64>,
    heap: BinaryHeap<Event>,
    seq: u64,
    epoch: u32,
    susceptible: NodeSet,
    infected: NodeSet,
    removed: usize,
    ever_infected: usize,
    series: Vec<Record>,
    infection_time: Vec<f64>,
    /// Infections by transmission, per wave.
    wave_infections: Vec<usize>,
    wave_seeds: Vec<usize>,
    wave_start_record: Vec<usize>,
}

impl<'a> Sim<'a> {
    fn push(&mut self, t: f64, kind: Kind, node: u32) {
        self.seq += 1;
        self.heap.push(Event {
            t,
            seq: self.seq,
            kind,
            node,
            epoch: self.epoch,
        });
    }

    fn record(&mut self, t: f64) {
        self.series.push(Record {
            t,
            s: self.susceptible.len() as u32,
            i: self.infected.len() as u32,
            r: self.removed as u32,
        });
    }

    fn infect(&mut self, v: u32, t: f64) {
        let vi = v as usize;
        debug_assert_eq!(self.state[vi], NodeState::S);
        self.state[vi] = NodeState::I;
        self.susceptible.remove(v);
        self.infected.insert(v);
        self.ever_infected += 1;
        self.infection_time[vi] = t;
        self.pred[vi] = f64::INFINITY;
        let rec = t + self.gamma.sample(&mut self.rng);
        self.push(rec, Kind::Recover, v);
        let Some(beta) = self.beta else { return };
        let g = self.g;
        for &w in g.neighbors(vi) {
            let wi = w as usize;
            if self.state[wi] != NodeState::S {
                continue;
            }
            let at = t + beta.sample(&mut self.rng);
            if at < rec && at < self.pred[wi] {
                self.pred[wi] = at;
                self.push(at, Kind::Infect, w);
            }
        }
    }

    /// Infect up to `rho` uniform susceptible nodes; returns how many.
    fn seed(&mut self, rho: usize, t: f64) -> usize {
        let k = rho.min(self.susceptible.len());
        for _ in 0..k {
            let i = self.rng.random_range(0..self.susceptible.len());
            let v = self.susceptible.items[i];
            self.infect(v, t);
        }
        k
    }

    fn quarantine(&mut self) {
        self.epoch += 1;
        let infected = std::mem::take(&mut self.infected.items);
        for &v in &infected {
            self.state[v as usize] = NodeState::R;
            self.infected.pos[v as usize] = u32::MAX;
        }
        self.removed += infected.len();
        self.infected.items = infected;
        self.infected.items.clear();
        for &v in &self.susceptible.items {
            self.pred[v as usize] = f64::INFINITY;
        }
        self.heap.clear();
    }

    fn start_wave(&mut self, seeds: usize) {
        self.wave_infections.push(0);
        self.wave_seeds.push(seeds);
    }
}

/// Trigger bookkeeping for a quarantine policy.
struct Trigger<'p> {
    policy: &'p QuarantinePolicy,
    fired: usize,
    affected_at_last: usize,
}

impl Trigger<'_> {
    fn should_fire(&self, ever: usize, infected: usize, n: usize) -> bool {
        let frac = |c: usize| c as f64 / n as f64;
        match self.policy {
            QuarantinePolicy::NoQuarantine => false,
            QuarantinePolicy::FractionAffected { thresholds } => {
                thresholds.get(self.fired).is_some_and(|&th| frac(ever) >= th)
            }
            QuarantinePolicy::AffectedSinceQuarantine { increments } => increments
                .get(self.fired)
                .is_some_and(|&d| frac(ever) - frac(self.affected_at_last) >= d),
            QuarantinePolicy::InfectedCount {
                trigger,
                max_quarantines,
            } => infected >= *trigger && max_quarantines.is_none_or(|m| self.fired < m),
        }
    }
}

pub fn run_sir(g: &Graph, params: &EpidemicParams, policy: &QuarantinePolicy, seed: Seed) -> Result<SimOutcome> {
    run_sir_with(g, params, policy, seed, &SimOptions::default())
}

/// Event-driven SIR with perfect quarantines.
///
/// Each infected node transmits along each edge to a susceptible neighbour
/// after an Exp(β) delay and recovers after an Exp(γ) delay; only the
/// earliest pending transmission to a node that still beats the
/// transmitter's recovery is queued. A quarantine moves every infected node
/// to R, voids all pending events and reinfects `rho` uniform susceptible
/// nodes at the same instant. Triggers are checked after every state change.
pub fn run_sir_with(
    g: &Graph,
    params: &EpidemicParams,
    policy: &QuarantinePolicy,
    seed: Seed,
    opts: &SimOptions,
) -> Result<SimOutcome> {
    params.validate()?;
    policy.validate()?;
    let n = g.n();
    if n == 0 {
        return Err(Error::param("cannot simulate on an empty graph"));
    }
    let beta = if params.beta > 0.0 {
        Some(Exp::new(params.beta).map_err(|e| Error::param(e.to_string()))?)
    } else {
        None
    };
    let gamma = Exp::new(params.gamma).map_err(|e| Error::param(e.to_string()))?;
    let mut sim = Sim {
        g,
        beta,
        gamma,
        rng: seed.rng(),
        state: vec![NodeState::S; n],
        pred: vec![f64::INFINITY; n],
        heap: BinaryHeap::new(),
        seq: 0,
        epoch: 0,
        susceptible: NodeSet::new(n),
        infected: NodeSet::new(n),
        removed: 0,
        ever_infected: 0,
        series: Vec::new(),
        infection_time: vec![f64::INFINITY; n],
        wave_infections: Vec::new(),
        wave_seeds: Vec::new(),
        wave_start_record: Vec::new(),
    };
    let mut immune_count = 0;
    for &v in &opts.immune {
        let vi = v as usize;
        if vi >= n {
            return Err(Error::param(format!("immune node {v} out of range")));
        }
        if sim.state[vi] == NodeState::S {
            sim.state[vi] = NodeState::R;
            immune_count += 1;
        }
    }
    sim.removed = immune_count;
    for v in 0..n as u32 {
        if sim.state[v as usize] == NodeState::S {
            sim.susceptible.insert(v);
        }
    }

    let mut trigger = Trigger {
        policy,
        fired: 0,
        affected_at_last: 0,
    };
    let mut quarantines = Vec::new();
    let mut shortfall = false;
    let mut max_i = 0usize;

    sim.record(0.0);
    sim.wave_start_record.push(0);
    let k = sim.seed(params.rho, 0.0);
    shortfall |= k < params.rho;
    sim.start_wave(k);
    sim.record(0.0);
    max_i = max_i.max(sim.infected.len());

    let mut t = 0.0;
    loop {
        // Fire every quarantine whose condition holds now.
        while trigger.should_fire(sim.ever_infected, sim.infected.len(), n) {
            sim.quarantine();
            trigger.fired += 1;
            trigger.affected_at_last = sim.ever_infected;
            let susceptible_after = sim.susceptible.len();
            sim.record(t);
            sim.wave_start_record.push(sim.series.len() - 1);
            let k = sim.seed(params.rho, t);
            shortfall |= k < params.rho;
            sim.start_wave(k);
            sim.record(t);
            max_i = max_i.max(sim.infected.len());
            quarantines.push(QuarantineRecord {
                time: t,
                affected_fraction: (sim.ever_infected - k) as f64 / n as f64,
                susceptible_after,
                reseeded: k,
            });
            if k == 0 {
                break;
            }
        }
        if sim.infected.len() == 0 {
            break;
        }
        let Some(ev) = sim.heap.pop() else { break };
        if ev.epoch != sim.epoch {
            continue;
        }
        match ev.kind {
            Kind::Infect => {
                let v = ev.node as usize;
                if sim.state[v] != NodeState::S || sim.pred[v] != ev.t {
                    continue;
                }
                t = ev.t;
                sim.infect(ev.node, t);
                *sim.wave_infections.last_mut().expect("wave started") += 1;
            }
            Kind::Recover => {
                let v = ev.node as usize;
                if sim.state[v] != NodeState::I {
                    continue;
                }
                t = ev.t;
                sim.state[v] = NodeState::R;
                sim.infected.remove(ev.node);
                sim.removed += 1;
            }
        }
        sim.record(t);
        max_i = max_i.max(sim.infected.len());
    }

    let waves = build_waves(
        &sim.series,
        &sim.wave_start_record,
        &sim.wave_seeds,
        &sim.wave_infections,
        &quarantines,
    );
    Ok(SimOutcome {
        n,
        final_removed_fraction: sim.ever_infected as f64 / n as f64,
        max_infected_fraction: max_i as f64 / n as f64,
        total_infected: sim.ever_infected,
        end_time: t,
        quarantines,
        waves,
        reseed_shortfall: shortfall,
        immune_count,
        final_states: sim.state,
        series: opts.record_series.then_some(sim.series),
        infection_times: opts.record_infection_times.then_some(sim.infection_time),
    })
}
