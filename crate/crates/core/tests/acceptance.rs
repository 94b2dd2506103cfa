//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL
//! line each and exits non-zero if any fails.
//!
//! `cargo test --test acceptance -- c07 c09` runs only criteria whose id
//! contains one of the given substrings.
//!
//! Set `HERDQ_REAL_EDGE_LIST` to an edge-list file to use it as the real
//! network for c06; otherwise a generated graph is written to disk and
//! loaded back. Set `HERDQ_FB_ARTIST` to the artist network edge list to
//! run the optional full-size check.

use std::time::Instant;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use herdq::exper::{
    grid_two_quarantines, infected_count_strategy, structural_change_report, sweep_single, threshold_grid, SweepResult,
    SweepSpec,
};
use herdq::gfun::{final_size, herd_threshold, removed_after_quarantine, total_removed, DegreeDistribution};
use herdq::netgen::{
    config_graph_from_dist, gen_ba, generate, graph_stats, load_edge_list, write_edge_list, GeneratorParams, Graph,
};
use herdq::sim::{
    degree_class_susceptibility, groupwise_survival, run_sir, run_sir_with, EpidemicParams, Group, QuarantinePolicy,
    SimOptions,
};
use herdq::{Error, Seed};

// Tolerances.
const TOL_THRESHOLD: f64 = 1e-4;
const TOL_THRESHOLD_POISSON: f64 = 1e-6;
const TOL_REMOVED_POWERLAW: f64 = 1e-4;
const TOL_REMOVED_BA1: f64 = 0.01;
const MAX_REMOVED_BA1: f64 = 0.33;
const TOL_REMOVED_POISSON: f64 = 1e-5;
const TOL_FINAL_SIZE: f64 = 1e-6;
const TOL_TOTAL_REMOVED: f64 = 1e-8;
const TOL_TWO_NODE: f64 = 0.02;
const MIN_CHI2_P: f64 = 0.01;
const TOL_DEGREE_K: f64 = 0.05;
const GROUP_POPULATION_FLOOR: f64 = 0.05;
const MAX_SECOND_WAVE_ABOVE_ARGMIN: f64 = 0.05;
const TOL_EXPQ_POINTS: f64 = 0.05;
const MAX_EXPQ_POWERLAW: f64 = 0.08;
const TOL_EXPQ_POWERLAW: f64 = 0.02;
const TOL_DEGREE_DROP_POINTS: f64 = 3.0;
const TOL_PATH_RISE_RELATIVE: f64 = 0.25;
const STDERR_MULTIPLIER: f64 = 2.0;
const COUNT_FACTOR: f64 = 2.0;
const TOL_GEN_DEGREE_RELATIVE: f64 = 0.05;
const TOL_GEN_CLUSTERING: f64 = 0.05;
const TOL_GEN_PATH: f64 = 0.5;
const TOL_FB_DEGREE: f64 = 0.005;

// Fixed settings.
const N: usize = 10_000;
const MASTER: u64 = 20_200_601;
/// β/γ for the immunization-summary graphs; the source gives no value.
const TABLE_BETA: f64 = 5.0;
const V_CURVE_TRIALS: usize = 100;

fn v_params() -> EpidemicParams {
    EpidemicParams::new(0.5, 1.0, 10).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Results reused across criteria.
#[derive(Default)]
struct Shared {
    ba10: Option<Graph>,
    ba10_sweep: Option<SweepResult>,
}

impl Shared {
    fn ba10(&mut self) -> &Graph {
        self.ba10.get_or_insert_with(|| gen_ba(N, 10, Seed(MASTER)).unwrap())
    }

    fn ba10_sweep(&mut self) -> &SweepResult {
        if self.ba10_sweep.is_none() {
            let spec = SweepSpec {
                params: v_params(),
                thresholds: threshold_grid(0.01).unwrap(),
                trials: V_CURVE_TRIALS,
                seed: Seed(MASTER).derive(7),
            };
            let sweep = sweep_single(self.ba10(), &spec).unwrap();
            self.ba10_sweep = Some(sweep);
        }
        self.ba10_sweep.as_ref().unwrap()
    }
}

fn c01_herd_thresholds(_: &mut Shared) -> Outcome {
    let pl = herd_threshold(&DegreeDistribution::simple_powerlaw(3.0).unwrap()).unwrap();
    let ba = herd_threshold(&DegreeDistribution::ba_analytic(1).unwrap()).unwrap();
    let po = herd_threshold(&DegreeDistribution::poisson(2.0).unwrap()).unwrap();
    let reg = herd_threshold(&DegreeDistribution::regular(4).unwrap());
    let pass = (pl - 0.940599).abs() <= TOL_THRESHOLD
        && (ba - 0.776621).abs() <= TOL_THRESHOLD
        && (po - 0.5).abs() <= TOL_THRESHOLD_POISSON
        && matches!(reg, Err(Error::NoThresholdExists));
    outcome(
        pass,
        format!("powerlaw {pl:.7}, BA1 {ba:.7}, Poisson2 {po:.9}, 4-regular {reg:?}"),
    )
}

fn c02_removed_at_threshold(_: &mut Shared) -> Outcome {
    let pl = DegreeDistribution::simple_powerlaw(3.0).unwrap();
    let ba = DegreeDistribution::ba_analytic(1).unwrap();
    let po = DegreeDistribution::poisson(2.0).unwrap();
    let r_pl = removed_after_quarantine(&pl, herd_threshold(&pl).unwrap()).unwrap();
    let r_ba = removed_after_quarantine(&ba, herd_threshold(&ba).unwrap()).unwrap();
    let r_po = removed_after_quarantine(&po, herd_threshold(&po).unwrap()).unwrap();
    // 1 − g0(u) for BA m=1 from its pmf 4/(k(k+1)(k+2)), summed directly.
    let u = 0.776621f64;
    let g0: f64 = (1..2_000_000u64)
        .map(|k| {
            let kf = k as f64;
            4.0 / (kf * (kf + 1.0) * (kf + 2.0)) * u.powf(kf)
        })
        .sum();
    let pass = (r_pl - 0.0771).abs() <= TOL_REMOVED_POWERLAW
        && r_ba <= MAX_REMOVED_BA1
        && (r_ba - (1.0 - g0)).abs() <= TOL_REMOVED_BA1
        && (r_po - (1.0 - (-1f64).exp())).abs() <= TOL_REMOVED_POISSON
        && (r_po - 0.632121).abs() <= TOL_REMOVED_POISSON;
    outcome(
        pass,
        format!(
            "powerlaw {r_pl:.6}, BA1 {r_ba:.6} (direct {:.6}), Poisson2 {r_po:.7}",
            1.0 - g0
        ),
    )
}

fn c03_final_size(_: &mut Shared) -> Outcome {
    let po = DegreeDistribution::poisson(2.0).unwrap();
    let s = final_size(&po, 1.0).unwrap();
    let mut oracle = 0.5f64;
    for _ in 0..10_000 {
        oracle = 1.0 - (-2.0 * oracle).exp();
    }
    let dists = [
        DegreeDistribution::simple_powerlaw(3.0).unwrap(),
        DegreeDistribution::ba_analytic(1).unwrap(),
        DegreeDistribution::poisson(2.0).unwrap(),
        DegreeDistribution::regular(4).unwrap(),
        DegreeDistribution::empirical(vec![0.0, 0.2, 0.3, 0.1, 0.25, 0.15]).unwrap(),
    ];
    let mut worst = 0.0f64;
    for d in &dists {
        for phi in [0.2, 0.4, 0.6, 0.8, 1.0] {
            let a = total_removed(d, 1.0, phi).unwrap();
            let b = final_size(d, phi).unwrap();
            worst = worst.max((a - b).abs());
        }
    }
    let pass = (s - oracle).abs() <= TOL_FINAL_SIZE && worst <= TOL_TOTAL_REMOVED;
    outcome(
        pass,
        format!("S = {s:.8} vs iteration {oracle:.8}; max |R(1) - S| = {worst:.1e}"),
    )
}

/// Exact final-size distribution of the embedded jump chain from one
/// uniformly chosen infected node on a graph with at most 16 nodes.
fn jump_chain(edges: &[(usize, usize)], n: usize, beta: f64, gamma: f64) -> Vec<f64> {
    fn go(adj: &[Vec<usize>], s: u32, i: u32, p: f64, beta: f64, gamma: f64, out: &mut [f64]) {
        if i == 0 {
            out[adj.len() - s.count_ones() as usize] += p;
            return;
        }
        let mut moves = Vec::new();
        for v in (0..adj.len()).filter(|&v| i >> v & 1 == 1) {
            moves.push((s, i & !(1 << v), gamma));
            for &w in adj[v].iter().filter(|&&w| s >> w & 1 == 1) {
                moves.push((s & !(1 << w), i | 1 << w, beta));
            }
        }
        let total: f64 = moves.iter().map(|m| m.2).sum();
        for (s2, i2, r) in moves {
            go(adj, s2, i2, p * r / total, beta, gamma, out);
        }
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut out = vec![0.0; n + 1];
    let all = (1u32 << n) - 1;
    for v in 0..n {
        go(&adj, all & !(1 << v), 1 << v, 1.0 / n as f64, beta, gamma, &mut out);
    }
    out
}

fn c04_micro_oracles(_: &mut Shared) -> Outcome {
    let trials = 10_000u64;
    let (beta, gamma) = (2.0, 1.0);
    let p = EpidemicParams::new(beta, gamma, 1).unwrap();
    let (pair, _) = Graph::from_edges(2, [(0, 1)]).unwrap();
    let both = (0..trials)
        .filter(|&t| {
            run_sir(&pair, &p, &QuarantinePolicy::NoQuarantine, Seed(MASTER).derive2(4, t))
                .unwrap()
                .total_infected
                == 2
        })
        .count();
    let frac = both as f64 / trials as f64;
    let expect = beta / (beta + gamma);

    let k3_edges = [(0, 1), (1, 2), (0, 2)];
    let (k3, _) = Graph::from_edges(3, k3_edges.iter().map(|&(a, b)| (a as u32, b as u32))).unwrap();
    let p1 = EpidemicParams::new(1.0, 1.0, 1).unwrap();
    let mut counts = [0usize; 4];
    for t in 0..trials {
        let o = run_sir(&k3, &p1, &QuarantinePolicy::NoQuarantine, Seed(MASTER).derive2(5, t)).unwrap();
        counts[o.total_infected] += 1;
    }
    let exact = jump_chain(&k3_edges, 3, 1.0, 1.0);
    let mut stat = 0.0;
    for k in 1..=3 {
        let e = exact[k] * trials as f64;
        stat += (counts[k] as f64 - e).powi(2) / e;
    }
    let pval = 1.0 - ChiSquared::new(2.0).unwrap().cdf(stat);
    let pass = (frac - expect).abs() <= TOL_TWO_NODE && counts[0] == 0 && pval > MIN_CHI2_P;
    outcome(
        pass,
        format!(
            "2-node {frac:.4} vs {expect:.4}; K3 counts {:?} vs exact {:.4?}, chi2 p = {pval:.3}",
            &counts[1..],
            &exact[1..]
        ),
    )
}

fn c05_degree_k_susceptibility(_: &mut Shared) -> Outcome {
    let d = DegreeDistribution::simple_powerlaw(3.0).unwrap();
    let cg = config_graph_from_dist(&d, 20_000, Seed(MASTER).derive(50)).unwrap();
    let g = &cg.graph;
    let p = EpidemicParams::new(TABLE_BETA, 1.0, 10).unwrap();
    let opts = SimOptions {
        record_infection_times: true,
        ..Default::default()
    };
    let mut sums = [0.0; 6];
    let mut reached = 0usize;
    for t in 0..100u64 {
        let o = run_sir_with(
            g,
            &p,
            &QuarantinePolicy::NoQuarantine,
            Seed(MASTER).derive2(51, t),
            &opts,
        )
        .unwrap();
        if let Some(ds) = degree_class_susceptibility(g, o.infection_times.as_ref().unwrap(), 0.95) {
            reached += 1;
            for (k, s) in sums.iter_mut().enumerate().skip(1) {
                *s += ds.by_degree[k].1;
            }
        }
    }
    if reached == 0 {
        return outcome(false, "no trial reached u = 0.95");
    }
    let u = sums[1] / reached as f64;
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, &sum) in sums.iter().enumerate().skip(2) {
        let got = sum / reached as f64;
        let want = u.powi(k as i32);
        pass &= (got - want).abs() <= TOL_DEGREE_K;
        parts.push(format!("k={k} {got:.4} vs {want:.4}"));
    }
    outcome(
        pass,
        format!("{reached}/100 trials reached u = {u:.4}; {}", parts.join(", ")),
    )
}

/// Smallest margin of the top-1% curve over the identity once more than
/// 5% of the population is affected, over several runs.
fn group_margin(g: &Graph, trials: u64, stream: u64) -> (f64, usize) {
    let opts = SimOptions {
        record_infection_times: true,
        ..Default::default()
    };
    let mut worst = f64::INFINITY;
    let mut used = 0;
    for t in 0..trials {
        let o = run_sir_with(
            g,
            &v_params(),
            &QuarantinePolicy::NoQuarantine,
            Seed(MASTER).derive2(stream, t),
            &opts,
        )
        .unwrap();
        let curve = &groupwise_survival(g, &o, &[Group::TopDegree(0.01)]).unwrap()[0];
        let pts: Vec<_> = curve
            .points
            .iter()
            .filter(|(x, _)| *x > GROUP_POPULATION_FLOOR)
            .collect();
        if pts.is_empty() {
            continue;
        }
        used += 1;
        for (x, y) in pts {
            worst = worst.min(y - x);
        }
    }
    (worst, used)
}

fn c06_groupwise_survival(sh: &mut Shared) -> Outcome {
    let (ba_margin, ba_used) = group_margin(sh.ba10(), 10, 60);
    let (label, loaded) = match std::env::var("HERDQ_REAL_EDGE_LIST") {
        Ok(path) => (path.clone(), load_edge_list(&path).unwrap()),
        Err(_) => {
            let g = generate(&GeneratorParams::Plc { n: N, m: 5, p: 0.5 }, Seed(MASTER).derive(61)).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("network.txt");
            write_edge_list(&g, &path).unwrap();
            ("generated PLC edge list".to_string(), load_edge_list(&path).unwrap())
        }
    };
    let (real_margin, real_used) = group_margin(&loaded.graph, 10, 62);
    let pass = ba_used > 0 && real_used > 0 && ba_margin >= 0.0 && real_margin >= 0.0;
    outcome(
        pass,
        format!(
            "BA10 min(top1% - identity) = {ba_margin:.4} over {ba_used} runs; {label}: {real_margin:.4} over {real_used} runs"
        ),
    )
}

fn expq_config(d: &DegreeDistribution, stream: u64) -> SweepResult {
    let cg = config_graph_from_dist(d, N, Seed(MASTER).derive(stream)).unwrap();
    let spec = SweepSpec {
        params: EpidemicParams::new(TABLE_BETA, 1.0, 10).unwrap(),
        thresholds: threshold_grid(0.01).unwrap(),
        trials: V_CURVE_TRIALS,
        seed: Seed(MASTER).derive(stream + 1),
    };
    sweep_single(&cg.graph, &spec).unwrap()
}

fn c07_v_curve(sh: &mut Shared) -> Outcome {
    let sweep = sh.ba10_sweep();
    let i = sweep.index_of(sweep.argmin_total);
    let last = sweep.cells.len() - 1;
    let min = sweep.cells[i].mean_total;
    let interior = i > 0 && i < last && min < sweep.cells[0].mean_total && min < sweep.cells[last].mean_total;
    let (worst_i, worst_p) = sweep.cells[i + 1..]
        .iter()
        .enumerate()
        .map(|(j, c)| (i + 1 + j, c.p_second_wave))
        .fold((i, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    let no_second_wave = worst_p < MAX_SECOND_WAVE_ABOVE_ARGMIN;
    let ba10_line = format!(
        "BA10 argmin {:.2} (total {:.4}, p2w there {:.2}); max p2w above argmin {:.2} at {:.2}",
        sweep.argmin_total, min, sweep.cells[i].p_second_wave, worst_p, sweep.thresholds[worst_i]
    );

    let ba1 = expq_config(&DegreeDistribution::ba_analytic(1).unwrap(), 70)
        .min_total()
        .mean_total;
    let po = expq_config(&DegreeDistribution::poisson(2.0).unwrap(), 72)
        .min_total()
        .mean_total;
    let pl = expq_config(&DegreeDistribution::simple_powerlaw(3.0).unwrap(), 74)
        .min_total()
        .mean_total;
    let reg = expq_config(&DegreeDistribution::regular(4).unwrap(), 76)
        .min_total()
        .mean_total;
    let table_ok = (ba1 - 0.22).abs() <= TOL_EXPQ_POINTS
        && (po - 0.42).abs() <= TOL_EXPQ_POINTS
        && pl <= MAX_EXPQ_POWERLAW
        && (pl - 0.02).abs() <= TOL_EXPQ_POWERLAW
        && (reg - 0.89).abs() <= TOL_EXPQ_POINTS;
    outcome(
        interior && no_second_wave && table_ok,
        format!(
            "{ba10_line}; Experiments-Q (beta/gamma = {TABLE_BETA}): BA1 {ba1:.4}, Poisson2 {po:.4}, powerlaw {pl:.4}, 4-regular {reg:.4}"
        ),
    )
}

fn c08_structural_change(sh: &mut Shared) -> Outcome {
    let th = sh.ba10_sweep().argmin_total;
    let r = structural_change_report(sh.ba10(), &v_params(), Some(th), 20, 100_000, Seed(MASTER).derive(80)).unwrap();
    let drop = -r.degree_change_pct;
    let rise = r.path_change_pct;
    let pass = (drop - 93.5).abs() <= TOL_DEGREE_DROP_POINTS && (rise - 388.0).abs() <= TOL_PATH_RISE_RELATIVE * 388.0;
    outcome(
        pass,
        format!(
            "threshold {th:.2}: degree {:.2} -> {:.3} ({:+.2}%), path {:.3} -> {:.3} ({:+.2}%)",
            r.before_degree, r.after_degree, r.degree_change_pct, r.before_path, r.after_path, r.path_change_pct
        ),
    )
}

fn c09_two_quarantines(sh: &mut Shared) -> Outcome {
    let (single_max, single_total, single_se) = {
        let s = sh.ba10_sweep();
        (s.min_max().mean_max, s.min_total().mean_total, s.min_total().se_total)
    };
    let grid = threshold_grid(0.05).unwrap();
    let spec = SweepSpec {
        params: v_params(),
        thresholds: grid.clone(),
        trials: 50,
        seed: Seed(MASTER).derive(90),
    };
    let r = grid_two_quarantines(sh.ba10(), &spec, &grid, &grid).unwrap();
    let pass = r.min_max.2 < single_max && r.min_total.2 >= single_total - STDERR_MULTIPLIER * single_se;
    outcome(
        pass,
        format!(
            "grid min max-infected {:.4} at ({:.2},{:.2}) vs single {single_max:.4}; grid min total {:.4} at ({:.2},{:.2}) vs single {single_total:.4} - 2*{single_se:.4}",
            r.min_max.2, r.min_max.0, r.min_max.1, r.min_total.2, r.min_total.0, r.min_total.1
        ),
    )
}

fn c10_infected_count(sh: &mut Shared) -> Outcome {
    let optimum = sh.ba10_sweep().min_total().mean_total;
    let triggers = [20, 50, 100, 150, 200];
    let r = infected_count_strategy(sh.ba10(), &v_params(), &triggers, 50, Seed(MASTER).derive(100)).unwrap();
    let worst = r.cells.iter().map(|c| c.mean_total).fold(0.0, f64::max);
    let parts: Vec<String> = triggers
        .iter()
        .zip(&r.cells)
        .zip(&r.mean_quarantines)
        .map(|((t, c), q)| format!("{t}: {:.4} ({q:.1} q)", c.mean_total))
        .collect();
    outcome(
        worst <= COUNT_FACTOR * optimum,
        format!(
            "final removed {}; bound {:.4}",
            parts.join(", "),
            COUNT_FACTOR * optimum
        ),
    )
}

fn c11_ablation(sh: &mut Shared) -> Outcome {
    let ratios = [0.25, 0.5, 1.0, 2.0, 4.0];
    let g = sh.ba10().clone();
    let mut points = Vec::new();
    for (i, &ratio) in ratios.iter().enumerate() {
        let spec = SweepSpec {
            params: EpidemicParams::new(ratio, 1.0, 10).unwrap(),
            thresholds: threshold_grid(0.01).unwrap(),
            trials: V_CURVE_TRIALS,
            seed: Seed(MASTER).derive2(110, i as u64),
        };
        let s = sweep_single(&g, &spec).unwrap();
        points.push((ratio, s.argmin_total, s.trough_depth()));
    }
    let pass = points.windows(2).all(|w| w[1].1 >= w[0].1 && w[1].2 <= w[0].2);
    let parts: Vec<String> = points
        .iter()
        .map(|(r, a, d)| format!("{r}: argmin {a:.2} depth {d:.4}"))
        .collect();
    outcome(pass, parts.join("; "))
}

fn c12_generators(_: &mut Shared) -> Outcome {
    // (label, params, degree, clustering, path)
    let rows = [
        ("BA m=5", GeneratorParams::Ba { n: N, m: 5 }, 9.99, 0.007, 3.66),
        ("BA m=10", GeneratorParams::Ba { n: N, m: 10 }, 19.98, 0.011, 3.06),
        ("NN", GeneratorParams::Nn { n: N, u: 0.88, k: 6 }, 26.29, 0.124, 3.41),
        (
            "PLC m=5",
            GeneratorParams::Plc { n: N, m: 5, p: 0.5 },
            9.99,
            0.178,
            3.53,
        ),
        (
            "PLC m=10",
            GeneratorParams::Plc { n: N, m: 10, p: 0.25 },
            19.96,
            0.059,
            2.97,
        ),
        (
            "RW",
            GeneratorParams::Rw {
                n: N,
                q_e: 0.91,
                q_v: 0.94,
            },
            19.32,
            0.285,
            3.45,
        ),
        ("WS", GeneratorParams::Ws { n: N, k: 10, p: 0.05 }, 10.0, 0.574, 7.47),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (r, (label, params, deg, clust, path)) in rows.iter().enumerate() {
        let (mut d, mut c, mut p) = (0.0, 0.0, 0.0);
        for s in 0..5u64 {
            let g = generate(params, Seed(MASTER).derive2(120 + r as u64, s)).unwrap();
            let st = graph_stats(&g, 100_000, Seed(MASTER).derive2(130 + r as u64, s)).unwrap();
            d += st.avg_degree / 5.0;
            c += st.global_clustering / 5.0;
            p += st.avg_shortest_path / 5.0;
        }
        let ok = (d - deg).abs() <= TOL_GEN_DEGREE_RELATIVE * deg
            && (c - clust).abs() <= TOL_GEN_CLUSTERING
            && (p - path).abs() <= TOL_GEN_PATH;
        pass &= ok;
        parts.push(format!(
            "{label}{} {d:.2}/{c:.3}/{p:.2}",
            if ok { "" } else { " (out)" }
        ));
    }
    outcome(pass, format!("degree/clustering/path: {}", parts.join(", ")))
}

/// Optional full-size check on the artist network.
fn c13_fb_artist(_: &mut Shared) -> Option<Outcome> {
    let path = std::env::var("HERDQ_FB_ARTIST").ok()?;
    let loaded = load_edge_list(&path).unwrap();
    let g = &loaded.graph;
    let deg = g.avg_degree();
    let spec = SweepSpec {
        params: v_params(),
        thresholds: threshold_grid(0.01).unwrap(),
        trials: 20,
        seed: Seed(MASTER).derive(140),
    };
    let th = sweep_single(g, &spec).unwrap().argmin_total;
    let r = structural_change_report(g, &v_params(), Some(th), 10, 100_000, Seed(MASTER).derive(141)).unwrap();
    let pass = g.n() == 50_515
        && (deg - 32.44).abs() <= TOL_FB_DEGREE
        && (r.degree_change_pct + 94.85).abs() <= TOL_DEGREE_DROP_POINTS;
    Some(outcome(
        pass,
        format!(
            "n {} degree {deg:.3}; threshold {th:.2} degree change {:+.2}%",
            g.n(),
            r.degree_change_pct
        ),
    ))
}

type Criterion = (&'static str, &'static str, fn(&mut Shared) -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("c01", "analytic herd thresholds", c01_herd_thresholds),
        ("c02", "removed fraction at threshold", c02_removed_at_threshold),
        ("c03", "final size and total removed", c03_final_size),
        ("c04", "simulator micro-oracles", c04_micro_oracles),
        ("c05", "degree-k susceptibility", c05_degree_k_susceptibility),
        ("c06", "groupwise survival", c06_groupwise_survival),
        ("c07", "V-curve and Experiments-Q", c07_v_curve),
        ("c08", "structural change", c08_structural_change),
        ("c09", "two-quarantine grid", c09_two_quarantines),
        ("c10", "infected-count strategy", c10_infected_count),
        ("c11", "beta/gamma ablation", c11_ablation),
        ("c12", "generator statistics", c12_generators),
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let selected = |id: &str| filters.is_empty() || filters.iter().any(|f| id.contains(f.as_str()));
    let mut shared = Shared::default();
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        if !selected(id) {
            continue;
        }
        let t = Instant::now();
        let o = run(&mut shared);
        println!(
            "{} {id} {name} [{:.1}s]: {}",
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass {
            failed.push(id);
        }
    }
    if selected("c13") {
        match c13_fb_artist(&mut shared) {
            Some(o) => {
                println!(
                    "{} c13 artist network: {}",
                    if o.pass { "PASS" } else { "FAIL" },
                    o.detail
                );
                if !o.pass {
                    failed.push("c13");
                }
            }
            None => println!("SKIP c13 artist network: HERDQ_FB_ARTIST not set"),
        }
    }
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
