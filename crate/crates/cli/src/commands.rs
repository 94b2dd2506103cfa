use std::fmt::Write as _;

use herdq::exper::{self, SweepResult, SweepSpec};
use herdq::gfun::{self, DegreeDistribution};
use herdq::netgen::{self, format_edge_list, graph_stats, GeneratorParams, Graph, LoadSummary};
use herdq::sim::{self, EpidemicParams, Group, QuarantinePolicy, SimOptions};
use herdq::{Error, Seed};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::error::{CliError, CliResult};

/// A data file produced by a command, relative to the output location.
pub struct OutFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

/// Everything a command hands back for writing.
#[derive(Default)]
pub struct Output {
    pub files: Vec<OutFile>,
    /// Human-readable lines for stdout.
    pub notes: Vec<String>,
    /// Extra manifest fields, such as the ingested graph summary.
    pub extra: serde_json::Map<String, Value>,
}

impl Output {
    fn file(&mut self, name: &str, text: String) {
        self.files.push(OutFile {
            name: name.into(),
            bytes: text.into_bytes(),
        });
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
        text.push('\n');
        self.file(name, text);
        Ok(())
    }
}

/// Collects range errors so that all of them are reported at once.
#[derive(Default)]
pub struct Checks(pub Vec<String>);

impl Checks {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }

    fn prob(&mut self, name: &str, x: f64) {
        self.check((0.0..=1.0).contains(&x), || {
            format!("--{name} must lie in [0, 1], got {x}")
        });
    }

    fn at_least(&mut self, name: &str, x: usize, min: usize) {
        self.check(x >= min, || format!("--{name} must be >= {min}, got {x}"));
    }

    fn step(&mut self, name: &str, x: f64) {
        self.check(exper::threshold_grid(x).is_ok(), || {
            format!("--{name} must be in (0, 1] and divide 1 evenly, got {x}")
        });
    }

    fn epi(&mut self, beta: f64, gamma: f64, rho: usize) {
        self.check(beta.is_finite() && beta >= 0.0, || {
            format!("--beta must be finite and >= 0, got {beta}")
        });
        self.check(gamma.is_finite() && gamma > 0.0, || {
            format!("--gamma must be finite and > 0, got {gamma}")
        });
        self.at_least("rho", rho, 1);
    }

    fn dist(&mut self, family: DistFamily, d: &DistArgs, m: u32) {
        match family {
            DistFamily::SimplePowerlaw => self.check(d.alpha > 2.0 && d.alpha.is_finite(), || {
                format!("--alpha must be > 2, got {}", d.alpha)
            }),
            DistFamily::Ba => self.check(m >= 1, || "--m must be >= 1".into()),
            DistFamily::Poisson => self.check(d.lambda > 0.0 && d.lambda.is_finite(), || {
                format!("--lambda must be > 0, got {}", d.lambda)
            }),
            DistFamily::Regular => self.check(d.d >= 1, || "--d must be >= 1".into()),
        }
    }

    fn graph(&mut self, g: &GraphArgs) {
        match (&g.graph, g.family) {
            (Some(_), Some(_)) => self.0.push("give either --graph or --family, not both".into()),
            (None, None) => self
                .0
                .push("a graph source is required: --graph <PATH> or --family <FAMILY>".into()),
            (Some(_), None) => {}
            (None, Some(family)) => {
                self.at_least("n", g.n, 2);
                match family {
                    Family::Ba | Family::Plc => {
                        self.at_least("m", g.m, 1);
                        self.check(g.n > g.m, || {
                            format!("--n must exceed --m, got n = {}, m = {}", g.n, g.m)
                        });
                        if family == Family::Plc {
                            self.prob("p", g.p_or_default());
                        }
                    }
                    Family::Ws => {
                        let k = g.k_or_default();
                        self.check(k.is_multiple_of(2) && k < g.n, || {
                            format!("--k must be even and below --n, got {k}")
                        });
                        self.prob("p", g.p_or_default());
                    }
                    Family::Rw => {
                        self.prob("q-e", g.q_e);
                        self.prob("q-v", g.q_v);
                    }
                    Family::Nn => {
                        self.prob("u", g.u);
                        self.at_least("k", g.k_or_default(), 1);
                    }
                    Family::Config => self.dist(g.dist, &g.dist_params, g.m as u32),
                }
            }
        }
    }

    fn grid(&mut self, g: &GridArgs) {
        self.step("step", g.step);
        self.at_least("trials", g.trials, 1);
    }
}

/// Validate every field of a command, collecting all problems.
pub fn validate(cmd: &Command) -> CliResult<()> {
    let mut c = Checks::default();
    match cmd {
        Command::Generate(a) => {
            c.graph(&a.graph);
            c.check(a.graph.graph.is_none(), || {
                "generate needs --family, not --graph".into()
            });
        }
        Command::Stats(a) => {
            c.graph(&a.graph);
            c.at_least("path-pairs", a.path_pairs, 1);
        }
        Command::Analyze(a) => {
            c.dist(a.family, &a.dist_params, a.m);
            c.epi(a.beta, a.gamma, 1);
            c.step("step", a.step);
        }
        Command::Simulate(a) => {
            c.graph(&a.graph);
            c.epi(a.epi.beta, a.epi.gamma, a.epi.rho);
            c.at_least("trials", a.trials, 1);
            if let Err(e) = a.policy.parse::<QuarantinePolicy>() {
                c.0.push(format!("--policy: {e}"));
            }
        }
        Command::Sweep(a) => {
            c.graph(&a.graph);
            c.epi(a.epi.beta, a.epi.gamma, a.epi.rho);
            c.grid(&a.grid);
        }
        Command::Grid2q(a) => {
            c.graph(&a.graph);
            c.epi(a.epi.beta, a.epi.gamma, a.epi.rho);
            c.step("step", a.step);
            c.at_least("trials", a.trials, 1);
        }
        Command::Multiq(a) => {
            c.graph(&a.graph);
            c.epi(a.epi.beta, a.epi.gamma, a.epi.rho);
            c.at_least("trials", a.trials, 1);
            match a.mode {
                MultiqMode::EqualPeaks => c.at_least("quarantines", a.quarantines, 1),
                MultiqMode::Count => {
                    c.step("step", a.step);
                    c.check(!a.triggers.is_empty(), || "--triggers needs at least one value".into());
                    for &t in &a.triggers {
                        c.check(t >= a.epi.rho, || {
                            format!("--triggers value {t} is below --rho {}", a.epi.rho)
                        });
                    }
                }
            }
        }
        Command::Ablate(a) => {
            c.graph(&a.graph);
            c.epi(1.0, a.gamma, a.rho);
            c.grid(&a.grid);
            c.check(!a.ratios.is_empty(), || "--ratios needs at least one value".into());
            for &r in &a.ratios {
                c.check(r.is_finite() && r >= 0.0, || {
                    format!("--ratios value {r} must be finite and >= 0")
                });
            }
        }
        Command::Immunize(a) => {
            c.graph(&a.graph);
            c.epi(a.epi.beta, a.epi.gamma, a.epi.rho);
            c.grid(&a.grid);
            c.at_least("imm-trials", a.imm_trials, 1);
            c.prob("quantile", a.quantile);
        }
        Command::Report(a) => {
            c.graph(&a.graph);
            c.epi(a.epi.beta, a.epi.gamma, a.epi.rho);
            if let Some(t) = a.threshold {
                c.prob("threshold", t);
            } else {
                c.grid(&a.grid);
            }
            c.at_least("struct-trials", a.struct_trials, 1);
            c.at_least("path-pairs", a.path_pairs, 1);
        }
        Command::Robustness(a) => {
            c.graph(&a.graph);
            c.epi(a.epi.beta, a.epi.gamma, a.epi.rho);
            c.grid(&a.grid);
            c.check(a.graph.graph.is_none(), || {
                "robustness generates its graphs; use --family".into()
            });
            c.check(a.vary.is_some(), || "--vary is required".into());
            c.check(!a.values.is_empty(), || "--values needs at least one value".into());
            if let Some(v) = a.vary {
                for &x in &a.values {
                    let mut g = a.graph.clone();
                    if set_param(&mut g, v, x).is_err() {
                        c.0.push(format!("--values entry {x} is not valid for --vary {}", vary_name(v)));
                    } else {
                        c.graph(&g);
                    }
                }
            }
        }
    }
    if c.0.is_empty() {
        Ok(())
    } else {
        c.0.dedup();
        Err(CliError::Usage(c.0))
    }
}

fn distribution(family: DistFamily, d: &DistArgs, m: u32) -> herdq::Result<DegreeDistribution> {
    match family {
        DistFamily::SimplePowerlaw => DegreeDistribution::simple_powerlaw(d.alpha),
        DistFamily::Ba => DegreeDistribution::ba_analytic(m),
        DistFamily::Poisson => DegreeDistribution::poisson(d.lambda),
        DistFamily::Regular => DegreeDistribution::regular(d.d),
    }
}

/// The graph a command works on, and the distribution it was drawn from
/// when that is known.
struct Loaded {
    graph: Graph,
    dist: Option<DegreeDistribution>,
}

fn graph_seed(seed: u64) -> Seed {
    Seed(seed).derive(0)
}

fn experiment_seed(seed: u64) -> Seed {
    Seed(seed).derive(1)
}

fn build_graph(g: &GraphArgs, seed: u64, out: &mut Output) -> CliResult<Loaded> {
    if let Some(path) = &g.graph {
        let loaded = netgen::load_edge_list(path).map_err(|e| match e {
            Error::Io(io) => CliError::Runtime(format!("{}: {io}", path.display())),
            other => CliError::Runtime(format!("{}: {other}", path.display())),
        })?;
        let summary: LoadSummary = loaded.summary();
        if summary.self_loops + summary.duplicates > 0 {
            out.notes.push(format!(
                "dropped {} self-loops and {} duplicate edges",
                summary.self_loops, summary.duplicates
            ));
        }
        out.extra.insert("graph".into(), json!(summary));
        return Ok(Loaded {
            graph: loaded.graph,
            dist: None,
        });
    }
    let family = g.family.expect("validated graph source");
    let seed = graph_seed(seed);
    let params = match family {
        Family::Ba => GeneratorParams::Ba { n: g.n, m: g.m },
        Family::Plc => GeneratorParams::Plc {
            n: g.n,
            m: g.m,
            p: g.p_or_default(),
        },
        Family::Ws => GeneratorParams::Ws {
            n: g.n,
            k: g.k_or_default(),
            p: g.p_or_default(),
        },
        Family::Rw => GeneratorParams::Rw {
            n: g.n,
            q_e: g.q_e,
            q_v: g.q_v,
        },
        Family::Nn => GeneratorParams::Nn {
            n: g.n,
            u: g.u,
            k: g.k_or_default(),
        },
        Family::Config => {
            let dist = distribution(g.dist, &g.dist_params, g.m as u32)?;
            let cg = netgen::config_graph_from_dist(&dist, g.n, seed)?;
            out.extra.insert(
                "graph".into(),
                json!({"n": cg.graph.n(), "edges": cg.graph.edge_count(), "dropped_stubs": cg.dropped_stubs}),
            );
            return Ok(Loaded {
                graph: cg.graph,
                dist: Some(dist),
            });
        }
    };
    let graph = netgen::generate(&params, seed)?;
    out.extra
        .insert("graph".into(), json!({"n": graph.n(), "edges": graph.edge_count()}));
    Ok(Loaded { graph, dist: None })
}

fn epi(a: &EpiArgs) -> CliResult<EpidemicParams> {
    Ok(EpidemicParams::new(a.beta, a.gamma, a.rho)?)
}

fn sweep_spec(params: EpidemicParams, grid: &GridArgs, seed: Seed) -> CliResult<SweepSpec> {
    Ok(SweepSpec {
        params,
        thresholds: exper::threshold_grid(grid.step)?,
        trials: grid.trials,
        seed,
    })
}

fn threshold_labels(sweep: &SweepResult) -> Vec<exper::CellSummary> {
    let mut cells = sweep.cells.clone();
    cells.push(sweep.baseline.clone());
    cells
}

fn sweep_summary(s: &SweepResult) -> Value {
    json!({
        "argmin_total": s.argmin_total,
        "min_total": s.min_total().mean_total,
        "min_total_se": s.min_total().se_total,
        "argmin_max": s.argmin_max,
        "min_max": s.min_max().mean_max,
        "baseline_total": s.baseline.mean_total,
        "baseline_max": s.baseline.mean_max,
        "trough_depth": s.trough_depth(),
    })
}

/// Long-format V-curve: one row per threshold.
fn curve_csv(prefix: &str, s: &SweepResult, out: &mut String) {
    for (t, c) in s.thresholds.iter().zip(&s.cells) {
        let _ = writeln!(
            out,
            "{prefix}{t},{},{},{},{}",
            c.mean_total, c.se_total, c.mean_max, c.p_second_wave
        );
    }
}

pub fn dispatch(cmd: &Command) -> CliResult<Output> {
    let mut out = Output::default();
    let seed = cmd.common().seed;
    match cmd {
        Command::Generate(a) => {
            let g = build_graph(&a.graph, seed, &mut out)?;
            out.file("", format_edge_list(&g.graph));
            out.notes
                .push(format!("{} nodes, {} edges", g.graph.n(), g.graph.edge_count()));
        }
        Command::Stats(a) => {
            let g = build_graph(&a.graph, seed, &mut out)?;
            let st = graph_stats(&g.graph, a.path_pairs, experiment_seed(seed))?;
            let csv = format!("{}\n{}\n", netgen::STATS_CSV_HEADER, st.csv_row());
            out.notes.push(csv.trim_end().to_string());
            out.file("stats.csv", csv);
            out.extra.insert(
                "stats".into(),
                json!({"path_exact": st.path_exact, "plaw_fit_range": st.powerlaw_fit_range}),
            );
        }
        Command::Analyze(a) => analyze(a, &mut out)?,
        Command::Simulate(a) => simulate(a, seed, &mut out)?,
        Command::Sweep(a) => {
            let g = build_graph(&a.graph, seed, &mut out)?;
            let spec = sweep_spec(epi(&a.epi)?, &a.grid, experiment_seed(seed))?;
            let s = exper::sweep_single(&g.graph, &spec)?;
            out.file("trials.csv", exper::raw_trials_csv(&s.rows));
            out.file("aggregate.csv", exper::aggregate_csv(&threshold_labels(&s)));
            out.json("summary.json", &sweep_summary(&s))?;
            out.notes.push(format!(
                "optimal threshold {} (total {:.4}); no quarantine {:.4}",
                s.argmin_total,
                s.min_total().mean_total,
                s.baseline.mean_total
            ));
        }
        Command::Grid2q(a) => {
            let g = build_graph(&a.graph, seed, &mut out)?;
            let grid = GridArgs {
                step: a.step,
                trials: a.trials,
            };
            let spec = sweep_spec(epi(&a.epi)?, &grid, experiment_seed(seed))?;
            let r = exper::grid_two_quarantines(&g.graph, &spec, &spec.thresholds, &spec.thresholds)?;
            let single = exper::sweep_single(
                &g.graph,
                &SweepSpec {
                    seed: Seed(seed).derive(2),
                    ..spec
                },
            )?;
            out.file("heatmap.csv", exper::grid_heatmap_csv(&r));
            out.file("trials.csv", exper::raw_trials_csv(&r.rows));
            out.file("single.csv", exper::aggregate_csv(&threshold_labels(&single)));
            out.json(
                "summary.json",
                &json!({
                    "grid_min_total": {"q1": r.min_total.0, "q2": r.min_total.1, "value": r.min_total.2},
                    "grid_min_max_infected": {"q1": r.min_max.0, "q2": r.min_max.1, "value": r.min_max.2},
                    "single": sweep_summary(&single),
                }),
            )?;
            out.notes.push(format!(
                "grid min total {:.4} vs single {:.4}; grid min peak {:.4} vs single {:.4}",
                r.min_total.2,
                single.min_total().mean_total,
                r.min_max.2,
                single.min_max().mean_max
            ));
        }
        Command::Multiq(a) => multiq(a, seed, &mut out)?,
        Command::Ablate(a) => {
            let g = build_graph(&a.graph, seed, &mut out)?;
            let base = EpidemicParams::new(a.gamma, a.gamma, a.rho)?;
            let spec = sweep_spec(base, &a.grid, experiment_seed(seed))?;
            let points = exper::beta_gamma_ablation(&g.graph, &a.ratios, &spec)?;
            let mut summary = String::from("ratio,argmin_total,trough_depth,min_total,min_max,baseline_total\n");
            let mut curves = String::from("ratio,threshold,mean_total,se_total,mean_max,p_second_wave\n");
            for p in &points {
                let _ = writeln!(
                    summary,
                    "{},{},{},{},{},{}",
                    p.ratio,
                    p.argmin_total,
                    p.trough_depth,
                    p.sweep.min_total().mean_total,
                    p.sweep.min_max().mean_max,
                    p.sweep.baseline.mean_total
                );
                curve_csv(&format!("{},", p.ratio), &p.sweep, &mut curves);
            }
            out.file("ablation.csv", summary);
            out.file("curves.csv", curves);
        }
        Command::Immunize(a) => {
            let g = build_graph(&a.graph, seed, &mut out)?;
            let params = epi(&a.epi)?;
            let spec = exper::ImmunizationSpec {
                params,
                trials: a.imm_trials,
                quantile: a.quantile,
                seed: Seed(seed).derive(3),
            };
            let sweep = sweep_spec(params, &a.grid, experiment_seed(seed))?;
            let r = exper::immunization_comparison(&g.graph, g.dist.as_ref(), &spec, &sweep)?;
            let opt = |x: Option<f64>| x.map_or("none".to_string(), |v| v.to_string());
            let csv = format!(
                "strategy,fraction\nrandom,{}\ntop_degree,{}\nquarantine_theory,{}\nquarantine_experiment_mean,{}\nquarantine_experiment_conditional,{}\n",
                opt(r.random),
                opt(r.top_degree),
                opt(r.quarantine_theory),
                r.experiment_mean,
                r.experiment_conditional
            );
            out.notes.push(csv.trim_end().to_string());
            out.file("immunization.csv", csv);
            out.json("immunization.json", &r)?;
        }
        Command::Report(a) => report(a, seed, &mut out)?,
        Command::Robustness(a) => {
            let vary = a.vary.expect("validated");
            let mut graphs = Vec::new();
            for &x in &a.values {
                let mut ga = a.graph.clone();
                set_param(&mut ga, vary, x).map_err(CliError::usage)?;
                let mut scratch = Output::default();
                let g = build_graph(&ga, seed, &mut scratch)?;
                graphs.push((format!("{}={x}", vary_name(vary)), g.graph));
            }
            let spec = sweep_spec(epi(&a.epi)?, &a.grid, experiment_seed(seed))?;
            let r = exper::robustness_series(&graphs, &spec)?;
            let mut curves = String::from("label,threshold,mean_total,se_total,mean_max,p_second_wave\n");
            for (label, s) in r.labels.iter().zip(&r.sweeps) {
                curve_csv(&format!("{label},"), s, &mut curves);
            }
            out.file("curves.csv", curves);
            let per: Vec<Value> = r
                .labels
                .iter()
                .zip(&r.sweeps)
                .map(|(l, s)| json!({"label": l, "sweep": sweep_summary(s)}))
                .collect();
            out.json(
                "summary.json",
                &json!({
                    "graphs": per,
                    "max_optimal_total_gap": r.max_optimal_total_gap,
                    "max_argmin_gap": r.max_argmin_gap,
                }),
            )?;
            out.notes.push(format!(
                "max gap in optimal total {:.4}, in optimal threshold {:.2}",
                r.max_optimal_total_gap, r.max_argmin_gap
            ));
        }
    }
    Ok(out)
}

fn vary_name(v: VaryParam) -> &'static str {
    match v {
        VaryParam::N => "n",
        VaryParam::M => "m",
        VaryParam::P => "p",
        VaryParam::K => "k",
        VaryParam::U => "u",
        VaryParam::QE => "q_e",
        VaryParam::QV => "q_v",
    }
}

fn set_param(g: &mut GraphArgs, v: VaryParam, x: f64) -> Result<(), String> {
    let count = |x: f64| {
        if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
            Ok(x as usize)
        } else {
            Err(format!("{} needs a whole number, got {x}", vary_name(v)))
        }
    };
    match v {
        VaryParam::N => g.n = count(x)?,
        VaryParam::M => g.m = count(x)?,
        VaryParam::K => g.k = Some(count(x)?),
        VaryParam::P => g.p = Some(x),
        VaryParam::U => g.u = x,
        VaryParam::QE => g.q_e = x,
        VaryParam::QV => g.q_v = x,
    }
    Ok(())
}

fn analyze(a: &AnalyzeArgs, out: &mut Output) -> CliResult<()> {
    let dist = distribution(a.family, &a.dist_params, a.m)?;
    let phi = gfun::transmissibility(a.beta, a.gamma)?;
    let threshold = match gfun::herd_threshold(&dist) {
        Ok(u) => Some(u),
        Err(Error::NoThresholdExists) => None,
        Err(Error::NoThresholdNeeded) => Some(1.0),
        Err(e) => return Err(e.into()),
    };
    let mut us: Vec<f64> = exper::threshold_grid(a.step)?
        .into_iter()
        .filter(|&u| u > 0.0)
        .collect();
    if let Some(u) = threshold {
        if !us.contains(&u) {
            us.push(u);
            us.sort_by(f64::total_cmp);
        }
    }
    let mut csv = String::from("u,herd_condition,removed_after_q,total_removed\n");
    for &u in &us {
        let _ = writeln!(
            csv,
            "{u},{},{},{}",
            gfun::herd_condition(&dist, u),
            gfun::removed_after_quarantine(&dist, u)?,
            gfun::total_removed(&dist, u, phi)?
        );
    }
    out.file("analyze.csv", csv);
    let removed = threshold
        .map(|u| gfun::removed_after_quarantine(&dist, u))
        .transpose()?;
    let r0 = match gfun::reproductive_number(&dist) {
        Ok(r) => Some(r),
        Err(Error::Divergent(_)) => None,
        Err(e) => return Err(e.into()),
    };
    out.json(
        "summary.json",
        &json!({
            "herd_threshold": threshold,
            "removed_at_threshold": removed,
            "reproductive_number": r0,
            "final_size_without_quarantine": gfun::final_size(&dist, phi)?,
            "phi": phi,
        }),
    )?;
    out.notes.push(match threshold {
        Some(u) => format!("herd threshold u* = {u:.6}, removed {:.6}", removed.unwrap_or(f64::NAN)),
        None => "no single-quarantine threshold exists for this distribution".into(),
    });
    Ok(())
}

fn simulate(a: &SimulateArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    let g = build_graph(&a.graph, seed, out)?;
    let params = epi(&a.epi)?;
    let policy: QuarantinePolicy = a.policy.parse()?;
    let opts = SimOptions {
        record_series: a.series,
        ..Default::default()
    };
    let base = experiment_seed(seed);
    let outcomes = herdq_par_map(a.trials, |t| {
        sim::run_sir_with(&g.graph, &params, &policy, base.derive(t as u64), &opts)
    })?;
    let mut csv = String::from("trial,final_R_frac,max_I_frac,n_quarantines,second_wave,reseed_shortfall,end_time\n");
    for (t, o) in outcomes.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{t},{},{},{},{},{},{}",
            o.final_removed_fraction,
            o.max_infected_fraction,
            o.n_quarantines(),
            o.any_second_wave() as u8,
            o.reseed_shortfall as u8,
            o.end_time
        );
    }
    out.file("simulate.csv", csv);
    let mut waves =
        String::from("trial,wave,start_time,end_time,seeds,infections,peak_infected,peak_time,fwhm,second_wave\n");
    for (t, o) in outcomes.iter().enumerate() {
        for (w, wave) in o.waves.iter().enumerate() {
            let _ = writeln!(
                waves,
                "{t},{w},{},{},{},{},{},{},{},{}",
                wave.start_time,
                wave.end_time,
                wave.seeds,
                wave.infections,
                wave.peak_infected,
                wave.peak_time,
                wave.fwhm.map_or(String::new(), |f| f.to_string()),
                wave.second_wave as u8
            );
        }
    }
    out.file("waves.csv", waves);
    if a.series {
        for (t, o) in outcomes.iter().enumerate() {
            let mut s = String::from("t,S,I,R\n");
            for r in o.series.as_deref().unwrap_or_default() {
                let _ = writeln!(s, "{},{},{},{}", r.t, r.s, r.i, r.r);
            }
            out.file(&format!("series_{t}.csv"), s);
        }
    }
    let mean = outcomes.iter().map(|o| o.final_removed_fraction).sum::<f64>() / outcomes.len() as f64;
    out.notes
        .push(format!("{} trials, mean final removed {mean:.4}", outcomes.len()));
    Ok(())
}

fn herdq_par_map<T: Send>(n: usize, f: impl Fn(usize) -> herdq::Result<T> + Sync + Send) -> CliResult<Vec<T>> {
    use rayon::prelude::*;
    Ok((0..n).into_par_iter().map(f).collect::<herdq::Result<Vec<T>>>()?)
}

fn multiq(a: &MultiqArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    let g = build_graph(&a.graph, seed, out)?;
    let params = epi(&a.epi)?;
    match a.mode {
        MultiqMode::EqualPeaks => {
            let mut csv = String::from("n_quarantines,thresholds,mean_total,mean_max,max_wave_peak,budget_exhausted\n");
            let mut results = Vec::new();
            for q in 1..=a.quarantines {
                let r = exper::multi_quarantine_equal_peaks(
                    &g.graph,
                    &params,
                    q,
                    a.trials,
                    Seed(seed).derive2(4, q as u64),
                )?;
                let th: Vec<String> = r.thresholds.iter().map(|t| t.to_string()).collect();
                let peak = r.wave_peaks.iter().copied().fold(0.0, f64::max);
                let _ = writeln!(
                    csv,
                    "{q},{},{},{},{peak},{}",
                    th.join(";"),
                    r.mean_total,
                    r.mean_max,
                    r.budget_exhausted as u8
                );
                out.notes.push(format!(
                    "{q} quarantines at [{}]: peak {peak:.4}, total {:.4}",
                    th.join(", "),
                    r.mean_total
                ));
                results.push(r);
            }
            out.file("multiq.csv", csv);
            out.json("multiq.json", &results)?;
        }
        MultiqMode::Count => {
            let r = exper::infected_count_strategy(&g.graph, &params, &a.triggers, a.trials, experiment_seed(seed))?;
            let single = exper::sweep_single(
                &g.graph,
                &sweep_spec(
                    params,
                    &GridArgs {
                        step: a.step,
                        trials: a.trials,
                    },
                    Seed(seed).derive(2),
                )?,
            )?;
            let optimum = single.min_total().mean_total;
            let mut csv =
                String::from("trigger,mean_total,se_total,mean_max,mean_quarantines,ratio_to_single_optimum\n");
            for ((t, c), q) in r.triggers.iter().zip(&r.cells).zip(&r.mean_quarantines) {
                let _ = writeln!(
                    csv,
                    "{t},{},{},{},{q},{}",
                    c.mean_total,
                    c.se_total,
                    c.mean_max,
                    c.mean_total / optimum
                );
            }
            out.file("count.csv", csv);
            out.file("trials.csv", exper::raw_trials_csv(&r.rows));
            out.json("summary.json", &json!({"single": sweep_summary(&single)}))?;
        }
    }
    Ok(())
}

fn report(a: &ReportArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    let g = build_graph(&a.graph, seed, out)?;
    let params = epi(&a.epi)?;
    let (threshold, sweep) = match a.threshold {
        Some(t) => (t, None),
        None => {
            let s = exper::sweep_single(&g.graph, &sweep_spec(params, &a.grid, experiment_seed(seed))?)?;
            (s.argmin_total, Some(s))
        }
    };
    let sc = exper::structural_change_report(
        &g.graph,
        &params,
        Some(threshold),
        a.struct_trials,
        a.path_pairs,
        Seed(seed).derive(5),
    )?;
    let csv = format!(
        "threshold,before_degree,after_degree,degree_change_pct,before_path,after_path,path_change_pct,after_nodes,degenerate_trials\n{},{},{},{},{},{},{},{},{}\n",
        sc.threshold,
        sc.before_degree,
        sc.after_degree,
        sc.degree_change_pct,
        sc.before_path,
        sc.after_path,
        sc.path_change_pct,
        sc.after_nodes,
        sc.degenerate_trials
    );
    out.file("structural.csv", csv);
    out.notes.push(format!(
        "threshold {threshold}: degree {:+.2}%, path {:+.2}%",
        sc.degree_change_pct, sc.path_change_pct
    ));
    if let Some(s) = &sweep {
        out.file("aggregate.csv", exper::aggregate_csv(&threshold_labels(s)));
    }

    // Groupwise survival of one unquarantined run.
    let opts = SimOptions {
        record_infection_times: true,
        ..Default::default()
    };
    let run = sim::run_sir_with(
        &g.graph,
        &params,
        &QuarantinePolicy::NoQuarantine,
        Seed(seed).derive(6),
        &opts,
    )?;
    let groups = [
        Group::TopDegree(0.01),
        Group::TopDegree(0.03),
        Group::TopDegree(0.05),
        Group::MinDegree,
    ];
    let curves = sim::groupwise_survival(&g.graph, &run, &groups)?;
    let mut surv = String::from("group,size,population_affected,group_affected\n");
    for c in &curves {
        for (x, y) in &c.points {
            let _ = writeln!(surv, "{},{},{x},{y}", c.label, c.size);
        }
    }
    out.file("survival.csv", surv);
    Ok(())
}
