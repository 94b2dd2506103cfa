use serde::Serialize;

use super::engine::{QuarantineRecord, Record, SimOutcome, SECOND_WAVE_FRACTION};
use crate::netgen::{immunize, Graph, ImmunizationStrategy};
use crate::{Error, Result, Seed};

/// Infection dynamics between one (re)seeding and the next quarantine or
/// extinction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Wave {
    pub start_time: f64,
    pub end_time: f64,
    pub seeds: usize,
    /// Infections by transmission during the wave.
    pub infections: usize,
    pub peak_infected: usize,
    pub peak_time: f64,
    /// Full width at half maximum of the infected count; `None` if the wave
    /// never had an infected node.
    pub fwhm: Option<f64>,
    /// For waves after a quarantine: infections reached 5% of the
    /// susceptible pool left by that quarantine. Always false for the first.
    pub second_wave: bool,
}

pub(crate) fn build_waves(
    series: &[Record],
    starts: &[usize],
    seeds: &[usize],
    infections: &[usize],
    quarantines: &[QuarantineRecord],
) -> Vec<Wave> {
    (0..starts.len())
        .map(|w| {
            let lo = starts[w];
            // The next wave's leading record is the quarantine's I = 0
            // record, which closes this wave.
            let hi = starts.get(w + 1).map_or(series.len(), |&s| s + 1);
            let window = &series[lo..hi];
            let (peak_idx, peak) = window
                .iter()
                .enumerate()
                .fold((0, 0u32), |acc, (i, r)| if r.i > acc.1 { (i, r.i) } else { acc });
            let pts: Vec<(f64, f64)> = window.iter().map(|r| (r.t, r.i as f64)).collect();
            let second_wave = w > 0 && {
                let pool = quarantines[w - 1].susceptible_after as f64;
                infections[w] > 0 && infections[w] as f64 >= SECOND_WAVE_FRACTION * pool
            };
            Wave {
                start_time: window[0].t,
                end_time: window[window.len() - 1].t,
                seeds: seeds[w],
                infections: infections[w],
                peak_infected: peak as usize,
                peak_time: window[peak_idx].t,
                fwhm: if peak > 0 { fwhm(&pts).ok() } else { None },
                second_wave,
            }
        })
        .collect()
}

/// Width between the half-maximum crossings on either side of the first
/// maximum of a piecewise-linear curve `(t, y)`.
pub fn fwhm(points: &[(f64, f64)]) -> Result<f64> {
    let (p, &(_, peak)) = points
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, &(f64, f64))>, (i, pt)| match best {
            Some((_, b)) if b.1 >= pt.1 => best,
            _ => Some((i, pt)),
        })
        .ok_or_else(|| Error::param("empty series"))?;
    if peak.is_nan() || peak <= 0.0 {
        return Err(Error::Degenerate("series has no positive peak".into()));
    }
    let half = peak / 2.0;
    let cross = |a: (f64, f64), b: (f64, f64)| {
        if b.1 == a.1 {
            a.0
        } else {
            a.0 + (half - a.1) * (b.0 - a.0) / (b.1 - a.1)
        }
    };
    let left = (0..p)
        .rev()
        .find(|&j| points[j].1 <= half)
        .map(|j| cross(points[j], points[j + 1]));
    let right = (p + 1..points.len())
        .find(|&k| points[k].1 <= half)
        .map(|k| cross(points[k - 1], points[k]));
    match (left, right) {
        (Some(l), Some(r)) => Ok(r - l),
        _ => Err(Error::Degenerate(
            "curve does not fall to half maximum on both sides".into(),
        )),
    }
}

/// Node group for survival curves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Group {
    /// Highest-degree nodes, this fraction of n (degree desc, id asc).
    TopDegree(f64),
    /// Every node of the minimum degree.
    MinDegree,
    All,
}

impl Group {
    pub fn label(&self) -> String {
        match self {
            Group::TopDegree(f) => format!("top{}%", (f * 100.0).round()),
            Group::MinDegree => "min-degree".into(),
            Group::All => "all".into(),
        }
    }

    pub fn members(&self, g: &Graph) -> Result<Vec<u32>> {
        let nodes = match self {
            Group::TopDegree(f) => immunize(g, *f, ImmunizationStrategy::TopDegree, Seed(0))?,
            Group::MinDegree => {
                let dmin = (0..g.n()).map(|v| g.degree(v)).min().unwrap_or(0);
                (0..g.n() as u32).filter(|&v| g.degree(v as usize) == dmin).collect()
            }
            Group::All => (0..g.n() as u32).collect(),
        };
        if nodes.is_empty() {
            return Err(Error::param(format!("group {} is empty", self.label())));
        }
        Ok(nodes)
    }
}

/// Affected-fraction curve of a group against the whole population.
#[derive(Debug, Clone, Serialize)]
pub struct GroupCurve {
    pub label: String,
    pub size: usize,
    /// `(population affected fraction, group affected fraction)` after each
    /// infection.
    pub points: Vec<(f64, f64)>,
}

/// Survival curves for each group; needs recorded infection times.
pub fn groupwise_survival(g: &Graph, outcome: &SimOutcome, groups: &[Group]) -> Result<Vec<GroupCurve>> {
    let times = outcome
        .infection_times
        .as_ref()
        .ok_or_else(|| Error::param("groupwise survival needs recorded infection times"))?;
    if times.len() != g.n() {
        return Err(Error::param("outcome does not belong to this graph"));
    }
    let mut order: Vec<u32> = (0..g.n() as u32).filter(|&v| times[v as usize].is_finite()).collect();
    order.sort_by(|&a, &b| times[a as usize].total_cmp(&times[b as usize]).then(a.cmp(&b)));
    let n = g.n() as f64;
    groups
        .iter()
        .map(|grp| {
            let members = grp.members(g)?;
            let mut in_group = vec![false; g.n()];
            for &v in &members {
                in_group[v as usize] = true;
            }
            let size = members.len() as f64;
            let mut hit = 0usize;
            let points = order
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    hit += in_group[v as usize] as usize;
                    ((i + 1) as f64 / n, hit as f64 / size)
                })
                .collect();
            Ok(GroupCurve {
                label: grp.label(),
                size: members.len(),
                points,
            })
        })
        .collect()
}

/// Susceptible fraction per degree class at the moment the degree-1
/// susceptible fraction first drops to `u_target`.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeSusceptibility {
    pub time: f64,
    /// Degree-1 susceptible fraction at `time`.
    pub u: f64,
    /// `by_degree[k]` = (node count, susceptible fraction) of degree k.
    pub by_degree: Vec<(usize, f64)>,
}

pub fn degree_class_susceptibility(g: &Graph, infection_times: &[f64], u_target: f64) -> Option<DegreeSusceptibility> {
    let ones: Vec<f64> = (0..g.n())
        .filter(|&v| g.degree(v) == 1)
        .map(|v| infection_times[v])
        .collect();
    if ones.is_empty() {
        return None;
    }
    let mut t1: Vec<f64> = ones.iter().copied().filter(|t| t.is_finite()).collect();
    t1.sort_by(f64::total_cmp);
    let need = ((1.0 - u_target) * ones.len() as f64).ceil().max(1.0) as usize;
    let time = *t1.get(need - 1)?;
    let alive = |v: usize| infection_times[v] > time;
    let kmax = g.max_degree();
    let mut count = vec![0usize; kmax + 1];
    let mut susceptible = vec![0usize; kmax + 1];
    for v in 0..g.n() {
        let k = g.degree(v);
        count[k] += 1;
        susceptible[k] += alive(v) as usize;
    }
    let by_degree = count
        .iter()
        .zip(&susceptible)
        .map(|(&c, &s)| (c, if c == 0 { f64::NAN } else { s as f64 / c as f64 }))
        .collect::<Vec<_>>();
    Some(DegreeSusceptibility {
        time,
        u: by_degree[1].1,
        by_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fwhm_of_triangle_and_rectangle() {
        let (h, w) = (3.0, 2.0);
        let tri = [(0.0, 0.0), (w, 2.0 * h), (2.0 * w, 0.0)];
        assert!((fwhm(&tri).unwrap() - w).abs() < 1e-12);
        let rect = [(0.0, 0.0), (0.0, h), (w, h), (w, 0.0)];
        assert!((fwhm(&rect).unwrap() - w).abs() < 1e-12);
    }

    #[test]
    fn fwhm_undefined_for_monotone() {
        assert!(fwhm(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fwhm(&[(0.0, 0.0), (1.0, 0.0)]).is_err());
    }
}
