use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::gfun::DegreeDistribution;
use crate::{Error, Result, Seed};

/// Tail mass below which infinite-support distributions are cut off before
/// sampling.
pub const SAMPLING_TAIL: f64 = 1e-8;

/// Node counts per degree: `counts[k]` nodes have k stubs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    counts: Vec<u64>,
}

impl DegreeSequence {
    pub fn from_counts(mut counts: Vec<u64>) -> Self {
        while counts.len() > 1 && counts.last() == Some(&0) {
            counts.pop();
        }
        DegreeSequence { counts }
    }

    /// Histogram of a per-node degree list.
    pub fn from_degrees(degrees: &[usize]) -> Self {
        let kmax = degrees.iter().copied().max().unwrap_or(0);
        let mut counts = vec![0u64; kmax + 1];
        for &d in degrees {
            counts[d] += 1;
        }
        Self::from_counts(counts)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of nodes, Σ P_k.
    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Σ k·P_k.
    pub fn stub_count(&self) -> u64 {
        self.counts.iter().enumerate().map(|(k, &c)| k as u64 * c).sum()
    }

    pub fn max_degree(&self) -> usize {
        self.counts.iter().rposition(|&c| c > 0).unwrap_or(0)
    }

    /// Per-node degrees in ascending order.
    pub fn degrees(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n() as usize);
        for (k, &c) in self.counts.iter().enumerate() {
            out.extend(std::iter::repeat_n(k, c as usize));
        }
        out
    }

    pub fn mean(&self) -> f64 {
        let n = self.n();
        if n == 0 {
            0.0
        } else {
            self.stub_count() as f64 / n as f64
        }
    }
}

/// Draw `n` i.i.d. degrees from `dist`.
///
/// Infinite supports are truncated at the first k with tail mass below
/// [`SAMPLING_TAIL`] and renormalized. An odd stub total is fixed by giving
/// one uniformly chosen node an extra stub.
pub fn sample_degree_sequence(dist: &DegreeDistribution, n: usize, seed: Seed) -> Result<DegreeSequence> {
    dist.validate()?;
    if n == 0 {
        return Err(Error::param("degree sequence needs n >= 1"));
    }
    let table = dist.truncated_table(SAMPLING_TAIL);
    let mut cdf = Vec::with_capacity(table.len());
    let mut acc = 0.0;
    for p in &table {
        acc += p;
        cdf.push(acc);
    }
    let mut rng = seed.rng();
    let mut degrees: Vec<usize> = (0..n)
        .map(|_| {
            let x: f64 = rng.random::<f64>() * acc;
            cdf.partition_point(|&c| c <= x).min(table.len() - 1)
        })
        .collect();
    let stubs: usize = degrees.iter().sum();
    if stubs % 2 == 1 {
        let v = rng.random_range(0..n);
        degrees[v] += 1;
    }
    Ok(DegreeSequence::from_degrees(&degrees))
}

/// Random assignment of the sequence's degrees to node ids `0..n`.
pub(crate) fn assign_degrees(seq: &DegreeSequence, rng: &mut impl Rng) -> Vec<usize> {
    let mut degrees = seq.degrees();
    degrees.shuffle(rng);
    degrees
}
