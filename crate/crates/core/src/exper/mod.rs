//! Monte Carlo experiment families: quarantine-threshold sweeps, grids of
//! two quarantines, multi-quarantine strategies, β/γ ablations,
//! immunization comparisons, structural change and robustness series.
//!
//! Every trial draws from `seed.derive2(cell, trial)`, so results do not
//! depend on the rayon pool size.

mod output;

use rayon::prelude::*;
use serde::Serialize;

use crate::gfun::{self, DegreeDistribution};
use crate::netgen::{self, graph_stats, immunize, induced_susceptible_subgraph, Graph, ImmunizationStrategy};
use crate::sim::{run_sir, EpidemicParams, QuarantinePolicy, SimOutcome};
use crate::{Error, Result, Seed};

pub use output::{aggregate_csv, grid_heatmap_csv, raw_trials_csv, AGGREGATE_CSV_HEADER, RAW_CSV_HEADER};

/// Final size at or above which a run counts as an outbreak.
pub const OUTBREAK_FRACTION: f64 = 0.05;

/// Thresholds `0, step, 2·step, …, 1`.
pub fn threshold_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::param(format!("grid step must lie in (0, 1], got {step}")));
    }
    let k = (1.0 / step).round() as usize;
    if ((k as f64) * step - 1.0).abs() > 1e-9 {
        return Err(Error::param(format!("grid step {step} does not divide 1")));
    }
    Ok((0..=k).map(|i| (i as f64 / k as f64 * 1e6).round() / 1e6).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub params: EpidemicParams,
    pub thresholds: Vec<f64>,
    pub trials: usize,
    pub seed: Seed,
}

impl SweepSpec {
    /// β = 1/2, γ = 1, ρ = 10, thresholds 0..1 step 0.01, 100 trials.
    pub fn defaults(seed: Seed) -> Self {
        SweepSpec {
            params: EpidemicParams {
                beta: 0.5,
                gamma: 1.0,
                rho: 10,
            },
            thresholds: threshold_grid(0.01).expect("valid step"),
            trials: 100,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.trials < 1 {
            return Err(Error::param("trials must be >= 1"));
        }
        if self.thresholds.is_empty() {
            return Err(Error::param("threshold grid is empty"));
        }
        if self.thresholds.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(Error::param("thresholds must lie in [0, 1]"));
        }
        if self.thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("thresholds must be strictly ascending"));
        }
        Ok(())
    }
}

/// Per-trial summary kept by every experiment.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRow {
    pub cell: usize,
    pub trial: usize,
    pub final_removed: f64,
    pub max_infected: f64,
    pub n_quarantines: usize,
    pub second_wave: bool,
    pub reseed_shortfall: bool,
}

impl TrialRow {
    fn from_outcome(cell: usize, trial: usize, o: &SimOutcome) -> Self {
        TrialRow {
            cell,
            trial,
            final_removed: o.final_removed_fraction,
            max_infected: o.max_infected_fraction,
            n_quarantines: o.n_quarantines(),
            second_wave: o.any_second_wave(),
            reseed_shortfall: o.reseed_shortfall,
        }
    }
}

/// Aggregate of one grid cell.
#[derive(Debug, Clone, Serialize)]
pub struct CellSummary {
    pub label: String,
    pub trials: usize,
    pub mean_total: f64,
    pub se_total: f64,
    pub mean_max: f64,
    pub se_max: f64,
    /// Fraction of trials with a quarantine that was followed by a second
    /// wave, among trials where a quarantine fired.
    pub p_second_wave: f64,
    /// Fraction of trials where every scheduled quarantine fired.
    pub p_quarantined: f64,
    /// Mean total among trials with final size ≥ 5%; NaN if there are none.
    pub mean_total_outbreaks: f64,
    pub p_outbreak: f64,
    /// Trials whose simulation returned an error; excluded from the means.
    pub failures: usize,
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn summarize(label: String, cell: &Cell, scheduled: usize) -> CellSummary {
    let rows = &cell.rows;
    let totals: Vec<f64> = rows.iter().map(|r| r.final_removed).collect();
    let maxes: Vec<f64> = rows.iter().map(|r| r.max_infected).collect();
    let (mean_total, se_total) = mean_se(&totals);
    let (mean_max, se_max) = mean_se(&maxes);
    let quarantined: Vec<&TrialRow> = rows.iter().filter(|r| r.n_quarantines > 0).collect();
    let p_second_wave = if quarantined.is_empty() {
        0.0
    } else {
        quarantined.iter().filter(|r| r.second_wave).count() as f64 / quarantined.len() as f64
    };
    let outbreaks: Vec<f64> = totals.iter().copied().filter(|&t| t >= OUTBREAK_FRACTION).collect();
    CellSummary {
        label,
        trials: rows.len(),
        mean_total,
        se_total,
        mean_max,
        se_max,
        p_second_wave,
        p_quarantined: rows.iter().filter(|r| r.n_quarantines >= scheduled.max(1)).count() as f64 / rows.len() as f64,
        mean_total_outbreaks: mean_se(&outbreaks).0,
        p_outbreak: outbreaks.len() as f64 / rows.len() as f64,
        failures: cell.failures,
    }
}

/// Trials of one grid cell.
#[derive(Debug, Clone, Default)]
pub struct Cell {
    pub rows: Vec<TrialRow>,
    pub failures: usize,
}

/// Run `trials` simulations for each policy, in parallel. A failing trial
/// is counted against its cell; a cell where every trial fails is an error.
pub fn run_cells(
    g: &Graph,
    params: &EpidemicParams,
    policies: &[QuarantinePolicy],
    trials: usize,
    seed: Seed,
) -> Result<Vec<Cell>> {
    params.validate()?;
    if trials < 1 {
        return Err(Error::param("trials must be >= 1"));
    }
    let jobs: Vec<(usize, usize)> = (0..policies.len())
        .flat_map(|c| (0..trials).map(move |t| (c, t)))
        .collect();
    let rows: Vec<(usize, Result<TrialRow>)> = jobs
        .par_iter()
        .map(|&(c, t)| {
            let row = run_sir(g, params, &policies[c], seed.derive2(c as u64, t as u64))
                .map(|out| TrialRow::from_outcome(c, t, &out));
            (c, row)
        })
        .collect();
    let mut cells: Vec<Cell> = vec![Cell::default(); policies.len()];
    let mut last_error = None;
    for (c, r) in rows {
        match r {
            Ok(row) => cells[c].rows.push(row),
            Err(e) => {
                cells[c].failures += 1;
                last_error = Some(e);
            }
        }
    }
    if let Some(i) = cells.iter().position(|c| c.rows.is_empty()) {
        let e = last_error.expect("an empty cell had failures");
        return Err(Error::param(format!("every trial of cell {i} failed: {e}")));
    }
    Ok(cells)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub thresholds: Vec<f64>,
    pub cells: Vec<CellSummary>,
    /// The same trials without any quarantine.
    pub baseline: CellSummary,
    pub argmin_total: f64,
    pub argmin_max: f64,
    #[serde(skip)]
    pub rows: Vec<TrialRow>,
}

impl SweepResult {
    pub fn min_total(&self) -> &CellSummary {
        &self.cells[self.index_of(self.argmin_total)]
    }

    pub fn min_max(&self) -> &CellSummary {
        &self.cells[self.index_of(self.argmin_max)]
    }

    pub fn index_of(&self, threshold: f64) -> usize {
        self.thresholds
            .iter()
            .position(|&t| t == threshold)
            .expect("threshold on grid")
    }

    /// Baseline total minus the optimal total.
    pub fn trough_depth(&self) -> f64 {
        self.baseline.mean_total - self.min_total().mean_total
    }
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    values
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |best, (i, v)| if v < best.1 { (i, v) } else { best },
        )
        .0
}

/// Single-quarantine sweep over `spec.thresholds`.
pub fn sweep_single(g: &Graph, spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let mut policies: Vec<QuarantinePolicy> = spec
        .thresholds
        .iter()
        .map(|&t| QuarantinePolicy::FractionAffected { thresholds: vec![t] })
        .collect();
    policies.push(QuarantinePolicy::NoQuarantine);
    let mut cells = run_cells(g, &spec.params, &policies, spec.trials, spec.seed)?;
    let base_rows = cells.pop().expect("baseline cell");
    let summaries: Vec<CellSummary> = cells
        .iter()
        .zip(&spec.thresholds)
        .map(|(cell, t)| summarize(format!("{t}"), cell, 1))
        .collect();
    let i_total = argmin(summaries.iter().map(|c| c.mean_total));
    let i_max = argmin(summaries.iter().map(|c| c.mean_max));
    Ok(SweepResult {
        thresholds: spec.thresholds.clone(),
        argmin_total: spec.thresholds[i_total],
        argmin_max: spec.thresholds[i_max],
        baseline: summarize("none".into(), &base_rows, 0),
        cells: summaries,
        rows: cells.into_iter().flat_map(|c| c.rows).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GridResult {
    pub q1: Vec<f64>,
    pub q2: Vec<f64>,
    /// `cells[i][j]` for first threshold `q1[i]` and increment `q2[j]`.
    pub cells: Vec<Vec<CellSummary>>,
    pub min_total: (f64, f64, f64),
    pub min_max: (f64, f64, f64),
    /// Raw trials; `cell` indexes `q1`-major.
    #[serde(skip)]
    pub rows: Vec<TrialRow>,
}

/// Two quarantines: the first when the affected fraction reaches `q1`, the
/// second once a further `q2` of the population has been affected.
pub fn grid_two_quarantines(g: &Graph, spec: &SweepSpec, q1: &[f64], q2: &[f64]) -> Result<GridResult> {
    spec.params.validate()?;
    if q1.is_empty() || q2.is_empty() {
        return Err(Error::param("quarantine grids must be non-empty"));
    }
    let mut policies = Vec::with_capacity(q1.len() * q2.len());
    for &a in q1 {
        for &b in q2 {
            policies.push(QuarantinePolicy::AffectedSinceQuarantine { increments: vec![a, b] });
        }
    }
    for p in &policies {
        p.validate()?;
    }
    let raw = run_cells(g, &spec.params, &policies, spec.trials, spec.seed)?;
    let flat: Vec<CellSummary> = raw
        .iter()
        .zip(&policies)
        .map(|(r, p)| summarize(p.to_string(), r, 2))
        .collect();
    let pick = |key: fn(&CellSummary) -> f64| {
        let i = argmin(flat.iter().map(key));
        (q1[i / q2.len()], q2[i % q2.len()], key(&flat[i]))
    };
    let min_total = pick(|c| c.mean_total);
    let min_max = pick(|c| c.mean_max);
    let cells = flat.chunks(q2.len()).map(|c| c.to_vec()).collect();
    Ok(GridResult {
        q1: q1.to_vec(),
        q2: q2.to_vec(),
        cells,
        min_total,
        min_max,
        rows: raw.into_iter().flat_map(|c| c.rows).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiQuarantineResult {
    pub thresholds: Vec<f64>,
    /// Mean peak infected fraction of each wave.
    pub wave_peaks: Vec<f64>,
    /// Mean FWHM of each wave over trials where it is defined.
    pub wave_fwhm: Vec<f64>,
    pub mean_total: f64,
    pub mean_max: f64,
    /// The search hit its evaluation budget before converging.
    pub budget_exhausted: bool,
}

/// Mean per-wave peaks and widths for a threshold list.
fn wave_profile(
    g: &Graph,
    params: &EpidemicParams,
    thresholds: &[f64],
    trials: usize,
    seed: Seed,
) -> Result<MultiQuarantineResult> {
    let policy = QuarantinePolicy::FractionAffected {
        thresholds: thresholds.to_vec(),
    };
    let outs: Vec<SimOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| run_sir(g, params, &policy, seed.derive(t as u64)))
        .collect::<Result<_>>()?;
    let waves = thresholds.len() + 1;
    let n = g.n() as f64;
    let mut peaks = vec![0.0; waves];
    let mut widths = vec![(0.0, 0usize); waves];
    for o in &outs {
        for (w, wave) in o.waves.iter().enumerate().take(waves) {
            peaks[w] += wave.peak_infected as f64 / n / trials as f64;
            if let Some(f) = wave.fwhm {
                widths[w].0 += f;
                widths[w].1 += 1;
            }
        }
    }
    Ok(MultiQuarantineResult {
        thresholds: thresholds.to_vec(),
        wave_peaks: peaks,
        wave_fwhm: widths
            .iter()
            .map(|&(s, c)| if c == 0 { f64::NAN } else { s / c as f64 })
            .collect(),
        mean_total: outs.iter().map(|o| o.final_removed_fraction).sum::<f64>() / trials as f64,
        mean_max: outs.iter().map(|o| o.max_infected_fraction).sum::<f64>() / trials as f64,
        budget_exhausted: false,
    })
}

const PEAK_BISECTION_STEPS: usize = 8;

/// Thresholds for `n_quarantines` quarantines chosen so that wave peaks are
/// roughly equal.
///
/// Greedy pass: each threshold is bisected so that its wave's mean peak
/// matches the peak of everything after it. Refinement pass: each threshold
/// is re-bisected against the largest later peak, others held fixed.
pub fn multi_quarantine_equal_peaks(
    g: &Graph,
    params: &EpidemicParams,
    n_quarantines: usize,
    trials: usize,
    seed: Seed,
) -> Result<MultiQuarantineResult> {
    params.validate()?;
    if n_quarantines < 1 || trials < 1 {
        return Err(Error::param("need at least one quarantine and one trial"));
    }
    let mut th: Vec<f64> = Vec::new();
    let mut evals = 0usize;
    let budget = 2 * n_quarantines * (PEAK_BISECTION_STEPS + 1);
    // Balance wave `j` against the largest later wave, holding the others.
    let balance = |th: &mut Vec<f64>, j: usize, evals: &mut usize| -> Result<()> {
        let lo0 = if j == 0 { 0.0 } else { th[j - 1] };
        let hi0 = th.get(j + 1).copied().unwrap_or(1.0);
        let (mut lo, mut hi) = (lo0, hi0);
        for _ in 0..PEAK_BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            let mut cand = th.clone();
            if j < cand.len() {
                cand[j] = mid;
            } else {
                cand.push(mid);
            }
            let prof = wave_profile(g, params, &cand, trials, seed)?;
            *evals += 1;
            let here = prof.wave_peaks[j];
            let later = prof.wave_peaks[j + 1..].iter().copied().fold(0.0, f64::max);
            if here < later {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let best = (0.5 * (lo + hi) * 1e4).round() / 1e4;
        if j < th.len() {
            th[j] = best;
        } else {
            th.push(best);
        }
        Ok(())
    };
    for j in 0..n_quarantines {
        balance(&mut th, j, &mut evals)?;
    }
    for j in 0..n_quarantines {
        balance(&mut th, j, &mut evals)?;
    }
    // Thresholds must stay strictly ascending for the policy.
    for j in 1..th.len() {
        if th[j] <= th[j - 1] {
            th[j] = (th[j - 1] + 1e-4).min(1.0);
        }
    }
    let mut out = wave_profile(g, params, &th, trials, seed)?;
    out.budget_exhausted = evals > budget;
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct InfectedCountResult {
    pub triggers: Vec<usize>,
    pub cells: Vec<CellSummary>,
    /// Mean number of quarantines per trial, per trigger.
    pub mean_quarantines: Vec<f64>,
    #[serde(skip)]
    pub rows: Vec<TrialRow>,
}

/// Unbounded quarantines whenever the infected count reaches a trigger.
pub fn infected_count_strategy(
    g: &Graph,
    params: &EpidemicParams,
    triggers: &[usize],
    trials: usize,
    seed: Seed,
) -> Result<InfectedCountResult> {
    params.validate()?;
    if let Some(&t) = triggers.iter().find(|&&t| t < params.rho) {
        return Err(Error::param(format!("trigger {t} is below rho = {}", params.rho)));
    }
    let policies: Vec<QuarantinePolicy> = triggers
        .iter()
        .map(|&trigger| QuarantinePolicy::InfectedCount {
            trigger,
            max_quarantines: None,
        })
        .collect();
    let cells = run_cells(g, params, &policies, trials, seed)?;
    Ok(InfectedCountResult {
        triggers: triggers.to_vec(),
        cells: cells
            .iter()
            .zip(triggers)
            .map(|(r, t)| summarize(format!("{t}"), r, 1))
            .collect(),
        mean_quarantines: cells
            .iter()
            .map(|c| c.rows.iter().map(|x| x.n_quarantines as f64).sum::<f64>() / c.rows.len() as f64)
            .collect(),
        rows: cells.into_iter().flat_map(|c| c.rows).collect(),
    })
}

/// β/γ values used by the ablation.
pub const ABLATION_RATIOS: [f64; 11] = [
    1.0 / 32.0,
    1.0 / 16.0,
    1.0 / 8.0,
    1.0 / 4.0,
    1.0 / 2.0,
    1.0,
    2.0,
    4.0,
    8.0,
    16.0,
    32.0,
];

#[derive(Debug, Clone, Serialize)]
pub struct AblationPoint {
    pub ratio: f64,
    pub argmin_total: f64,
    pub trough_depth: f64,
    pub sweep: SweepResult,
}

/// Sweeps with γ = `spec.params.gamma` and β = ratio·γ.
pub fn beta_gamma_ablation(g: &Graph, ratios: &[f64], spec: &SweepSpec) -> Result<Vec<AblationPoint>> {
    ratios
        .iter()
        .enumerate()
        .map(|(i, &ratio)| {
            let mut s = spec.clone();
            s.params.beta = ratio * spec.params.gamma;
            s.seed = spec.seed.derive(i as u64);
            let sweep = sweep_single(g, &s)?;
            Ok(AblationPoint {
                ratio,
                argmin_total: sweep.argmin_total,
                trough_depth: sweep.trough_depth(),
                sweep,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct StructuralChange {
    pub threshold: f64,
    pub before_degree: f64,
    pub before_path: f64,
    pub after_degree: f64,
    pub after_path: f64,
    pub after_nodes: f64,
    pub degree_change_pct: f64,
    pub path_change_pct: f64,
    /// Trials whose susceptible subgraph was empty or edgeless.
    pub degenerate_trials: usize,
}

/// Average degree and shortest path of the graph before, and of the final
/// susceptible subgraph after, a single quarantine at `threshold`.
pub fn structural_change_report(
    g: &Graph,
    params: &EpidemicParams,
    threshold: Option<f64>,
    trials: usize,
    path_pairs: usize,
    seed: Seed,
) -> Result<StructuralChange> {
    params.validate()?;
    if trials < 1 {
        return Err(Error::param("trials must be >= 1"));
    }
    let before = graph_stats(g, path_pairs, seed.derive(u64::MAX))?;
    let policy = match threshold {
        Some(t) => QuarantinePolicy::FractionAffected { thresholds: vec![t] },
        None => QuarantinePolicy::NoQuarantine,
    };
    let per_trial: Vec<Option<(f64, f64, f64)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = seed.derive(t as u64);
            let out = run_sir(g, params, &policy, s)?;
            let (sub, _) = induced_susceptible_subgraph(g, &out.final_states)?;
            if sub.n() == 0 || sub.edge_count() == 0 {
                return Ok(None);
            }
            let st = graph_stats(&sub, path_pairs, s.derive(1))?;
            Ok(Some((st.avg_degree, st.avg_shortest_path, sub.n() as f64)))
        })
        .collect::<Result<_>>()?;
    let ok: Vec<(f64, f64, f64)> = per_trial.iter().flatten().copied().collect();
    let m = ok.len() as f64;
    let avg = |f: fn(&(f64, f64, f64)) -> f64| {
        if ok.is_empty() {
            f64::NAN
        } else {
            ok.iter().map(f).sum::<f64>() / m
        }
    };
    let after_degree = avg(|x| x.0);
    let after_path = avg(|x| x.1);
    Ok(StructuralChange {
        threshold: threshold.unwrap_or(f64::NAN),
        before_degree: before.avg_degree,
        before_path: before.avg_shortest_path,
        after_degree,
        after_path,
        after_nodes: avg(|x| x.2),
        degree_change_pct: 100.0 * (after_degree - before.avg_degree) / before.avg_degree,
        path_change_pct: 100.0 * (after_path - before.avg_shortest_path) / before.avg_shortest_path,
        degenerate_trials: trials - ok.len(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ImmunizationReport {
    /// Minimal fraction immunized at random; `None` if even 100% fails.
    pub random: Option<f64>,
    pub top_degree: Option<f64>,
    /// Removed fraction 1 − g0(u*) at the analytic herd threshold; `None`
    /// when no threshold exists, `Some(0)` when none is needed.
    pub quarantine_theory: Option<f64>,
    /// Minimal mean total over the single-quarantine sweep.
    pub experiment_mean: f64,
    /// Mean total among outbreak trials at that optimum.
    pub experiment_conditional: f64,
    pub experiment_threshold: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ImmunizationSpec {
    pub params: EpidemicParams,
    /// Trials per candidate fraction in the vaccination bisection.
    pub trials: usize,
    /// Required share of trials without an outbreak.
    pub quantile: f64,
    pub seed: Seed,
}

/// Whether immunizing `fraction` of nodes by `strategy` keeps outbreaks
/// (final size ≥ 5% of n) to at most `1 − quantile` of trials.
fn immunization_holds(g: &Graph, spec: &ImmunizationSpec, strategy: ImmunizationStrategy, step: usize) -> Result<bool> {
    let fraction = step as f64 / 100.0;
    let outbreaks: usize = (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            let s = spec.seed.derive2(step as u64, t as u64);
            let immune = immunize(g, fraction, strategy, s.derive(0))?;
            let opts = crate::sim::SimOptions {
                immune,
                ..Default::default()
            };
            let out = crate::sim::run_sir_with(g, &spec.params, &QuarantinePolicy::NoQuarantine, s.derive(1), &opts)?;
            Ok((out.final_removed_fraction >= OUTBREAK_FRACTION) as usize)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok((spec.trials - outbreaks) as f64 >= spec.quantile * spec.trials as f64)
}

/// Smallest percentage in 0..=100 at which immunization holds (bisection,
/// assuming monotonicity).
pub fn minimal_immunization(g: &Graph, spec: &ImmunizationSpec, strategy: ImmunizationStrategy) -> Result<Option<f64>> {
    spec.params.validate()?;
    if spec.trials < 1 || !(0.0..=1.0).contains(&spec.quantile) {
        return Err(Error::param("need trials >= 1 and quantile in [0, 1]"));
    }
    if immunization_holds(g, spec, strategy, 0)? {
        return Ok(Some(0.0));
    }
    if !immunization_holds(g, spec, strategy, 100)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0usize, 100usize);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if immunization_holds(g, spec, strategy, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi as f64 / 100.0))
}

/// Removed fraction at the analytic single-quarantine herd threshold.
pub fn quarantine_theory_fraction(dist: &DegreeDistribution) -> Result<Option<f64>> {
    match gfun::herd_threshold(dist) {
        Ok(u) => Ok(Some(gfun::removed_after_quarantine(dist, u)?)),
        Err(Error::NoThresholdExists) => Ok(None),
        Err(Error::NoThresholdNeeded) => Ok(Some(0.0)),
        Err(e) => Err(e),
    }
}

pub fn immunization_comparison(
    g: &Graph,
    dist: Option<&DegreeDistribution>,
    spec: &ImmunizationSpec,
    sweep: &SweepSpec,
) -> Result<ImmunizationReport> {
    let random = minimal_immunization(g, spec, ImmunizationStrategy::Random)?;
    let top_degree = minimal_immunization(g, spec, ImmunizationStrategy::TopDegree)?;
    let quarantine_theory = match dist {
        Some(d) => quarantine_theory_fraction(d)?,
        None => {
            let seq = netgen::DegreeSequence::from_degrees(&g.degrees());
            quarantine_theory_fraction(&DegreeDistribution::from_counts(seq.counts())?)?
        }
    };
    let sw = sweep_single(g, sweep)?;
    let best = sw.min_total();
    Ok(ImmunizationReport {
        random,
        top_degree,
        quarantine_theory,
        experiment_mean: best.mean_total,
        experiment_conditional: best.mean_total_outbreaks,
        experiment_threshold: sw.argmin_total,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RobustnessReport {
    pub labels: Vec<String>,
    pub sweeps: Vec<SweepResult>,
    /// Largest pairwise gap between optimal mean totals.
    pub max_optimal_total_gap: f64,
    /// Largest pairwise gap between optimal thresholds.
    pub max_argmin_gap: f64,
}

/// The same sweep on a series of graphs.
pub fn robustness_series(graphs: &[(String, Graph)], spec: &SweepSpec) -> Result<RobustnessReport> {
    if graphs.is_empty() {
        return Err(Error::param("robustness series needs at least one graph"));
    }
    let sweeps: Vec<SweepResult> = graphs
        .iter()
        .map(|(_, g)| sweep_single(g, spec))
        .collect::<Result<_>>()?;
    let spread = |xs: Vec<f64>| {
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    Ok(RobustnessReport {
        labels: graphs.iter().map(|(l, _)| l.clone()).collect(),
        max_optimal_total_gap: spread(sweeps.iter().map(|s| s.min_total().mean_total).collect()),
        max_argmin_gap: spread(sweeps.iter().map(|s| s.argmin_total).collect()),
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::gen_ba;

    fn small_spec(seed: u64) -> SweepSpec {
        SweepSpec {
            params: EpidemicParams {
                beta: 0.5,
                gamma: 1.0,
                rho: 5,
            },
            thresholds: threshold_grid(0.25).unwrap(),
            trials: 8,
            seed: Seed(seed),
        }
    }

    #[test]
    fn grids() {
        assert_eq!(threshold_grid(0.25).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(threshold_grid(0.01).unwrap().len(), 101);
        assert!(threshold_grid(0.3).is_err());
        assert!(threshold_grid(0.0).is_err());
    }

    #[test]
    fn sweep_is_reproducible_and_bounded() {
        let g = gen_ba(600, 3, Seed(1)).unwrap();
        let a = sweep_single(&g, &small_spec(3)).unwrap();
        let b = sweep_single(&g, &small_spec(3)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        for c in &a.cells {
            assert!((0.0..=1.0).contains(&c.mean_total) && c.se_total >= 0.0);
        }
        assert!(a.cells[0].p_quarantined == 1.0);
    }

    #[test]
    fn sweep_independent_of_pool_size() {
        let g = gen_ba(400, 3, Seed(1)).unwrap();
        let spec = small_spec(9);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let two = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = one.install(|| sweep_single(&g, &spec)).unwrap();
        let b = two.install(|| sweep_single(&g, &spec)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn grid_shapes() {
        let g = gen_ba(400, 3, Seed(1)).unwrap();
        let r = grid_two_quarantines(&g, &small_spec(2), &[0.0, 0.2], &[0.1, 0.3, 0.5]).unwrap();
        assert_eq!(r.cells.len(), 2);
        assert_eq!(r.cells[0].len(), 3);
        assert!(r.min_max.2 <= r.cells[1][2].mean_max);
    }

    #[test]
    fn star_top_degree_needs_only_hub() {
        let n = 50u32;
        let (g, _) = Graph::from_edges(n as usize, (1..n).map(|l| (0, l))).unwrap();
        let spec = ImmunizationSpec {
            params: EpidemicParams {
                beta: 100.0,
                gamma: 1.0,
                rho: 1,
            },
            trials: 20,
            quantile: 0.95,
            seed: Seed(4),
        };
        let top = minimal_immunization(&g, &spec, ImmunizationStrategy::TopDegree).unwrap();
        // ceil(1% of 50) = 1 node, the hub.
        assert_eq!(top, Some(0.01));
    }

    #[test]
    fn theory_column() {
        let reg = DegreeDistribution::regular(4).unwrap();
        assert_eq!(quarantine_theory_fraction(&reg).unwrap(), None);
        let pl = DegreeDistribution::simple_powerlaw(3.0).unwrap();
        let f = quarantine_theory_fraction(&pl).unwrap().unwrap();
        assert!((f - 0.0771).abs() < 1e-3);
    }

    #[test]
    fn infected_count_rejects_small_triggers() {
        let g = gen_ba(200, 2, Seed(1)).unwrap();
        let p = EpidemicParams {
            beta: 0.5,
            gamma: 1.0,
            rho: 10,
        };
        assert!(infected_count_strategy(&g, &p, &[5], 2, Seed(0)).is_err());
        let r = infected_count_strategy(&g, &p, &[10, 40], 4, Seed(0)).unwrap();
        assert_eq!(r.cells.len(), 2);
    }

    #[test]
    fn baseline_structural_change_is_zero_without_spread() {
        let g = gen_ba(300, 3, Seed(1)).unwrap();
        let p = EpidemicParams {
            beta: 0.0,
            gamma: 1.0,
            rho: 1,
        };
        let r = structural_change_report(&g, &p, None, 2, 1000, Seed(3)).unwrap();
        assert!(r.degree_change_pct.abs() < 5.0);
    }
}
