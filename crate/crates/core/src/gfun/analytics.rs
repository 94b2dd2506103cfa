use serde::Serialize;

use super::dist::DegreeDistribution;
use crate::netgen::DegreeSequence;
use crate::{Error, Result};

/// R = (E[k²] − E[k]) / E[k]; an outbreak is possible iff R > 1.
pub fn reproductive_number(dist: &DegreeDistribution) -> Result<f64> {
    let mean = dist.mean()?;
    if mean <= 0.0 {
        return Ok(0.0);
    }
    Ok(dist.second_factorial_moment()? / mean)
}

/// Expected susceptible counts per degree after a quarantine declared when a
/// fraction `u` of degree-1 nodes is still susceptible: entry k is P_k·u^k.
pub fn quarantine_operator(seq: &DegreeSequence, u: f64) -> Result<Vec<f64>> {
    check_unit("u", u)?;
    Ok(seq
        .counts()
        .iter()
        .enumerate()
        .map(|(k, &pk)| pk as f64 * u.powi(k as i32))
        .collect())
}

/// Σ p_k u^k k(k−1) − Σ p_k u^k k. Herd immunity holds iff this is ≤ 0.
///
/// Evaluated as a moment sum; at `u = 1` it is E[k²] − 2E[k] (infinite when
/// the second moment diverges).
pub fn herd_condition(dist: &DegreeDistribution, u: f64) -> f64 {
    if u >= 1.0 {
        let mean = dist.mean().unwrap_or(f64::INFINITY);
        return match dist.second_factorial_moment() {
            Ok(m2) => m2 - mean,
            Err(_) => f64::INFINITY,
        };
    }
    if u <= 0.0 {
        return 0.0;
    }
    dist.moment_series(u, |k| k * (k - 1.0) - k)
}

const SCAN_STEP: f64 = 1e-2;
const BISECT_WIDTH: f64 = 1e-7;
const UPPER: f64 = 1.0 - 1e-6;

/// Largest u* ∈ (0, 1) with `herd_condition(u*) = 0`: declaring the
/// quarantine at any u ≤ u* leaves a graph with no possible outbreak.
pub fn herd_threshold(dist: &DegreeDistribution) -> Result<f64> {
    dist.validate()?;
    if herd_condition(dist, 1.0) <= 0.0 {
        return Err(Error::NoThresholdNeeded);
    }
    let steps = (1.0 / SCAN_STEP).round() as usize;
    let grid: Vec<f64> = (1..steps).map(|i| i as f64 / steps as f64).collect();
    // Largest grid point where the condition is still satisfied.
    let mut bracket = None;
    for (i, &u) in grid.iter().enumerate().rev() {
        if herd_condition(dist, u) <= 0.0 {
            let hi = grid.get(i + 1).copied().unwrap_or(UPPER);
            bracket = Some((u, hi));
            break;
        }
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::NoThresholdExists)?;
    while hi - lo > BISECT_WIDTH {
        let mid = 0.5 * (lo + hi);
        if herd_condition(dist, mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// R_Q = 1 − g0(u): fraction removed by the end of the quarantine.
pub fn removed_after_quarantine(dist: &DegreeDistribution, u: f64) -> Result<f64> {
    check_unit("u", u)?;
    Ok((1.0 - dist.g0(u)?).clamp(0.0, 1.0))
}

/// Generating functions of the susceptible graph left by a quarantine at `u`:
/// g0^Q(z) = g0(uz)/g0(u), g1^Q(z) = g1(uz)/g1(u).
#[derive(Debug, Clone)]
pub struct QuarantinedGf<'a> {
    dist: &'a DegreeDistribution,
    u: f64,
    g0_u: f64,
    g1_u: f64,
}

impl<'a> QuarantinedGf<'a> {
    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn g0(&self, z: f64) -> Result<f64> {
        check_unit("z", z)?;
        Ok(self.dist.g0(self.u * z)? / self.g0_u)
    }

    pub fn g1(&self, z: f64) -> Result<f64> {
        check_unit("z", z)?;
        Ok(self.dist.g1(self.u * z)? / self.g1_u)
    }
}

pub fn post_quarantine_gfuns(dist: &DegreeDistribution, u: f64) -> Result<QuarantinedGf<'_>> {
    check_unit("u", u)?;
    if u == 0.0 {
        return Err(Error::Degenerate(
            "quarantine at u = 0 leaves no susceptible nodes".into(),
        ));
    }
    let g0_u = dist.g0(u)?;
    let g1_u = dist.g1(u)?;
    if g0_u <= 0.0 || g1_u <= 0.0 {
        return Err(Error::Degenerate(format!("g0({u}) or g1({u}) vanishes")));
    }
    Ok(QuarantinedGf { dist, u, g0_u, g1_u })
}

/// φ = β/(β+γ): probability an infected node transmits across an edge
/// before recovering, for exponential clocks.
pub fn transmissibility(beta: f64, gamma: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Domain(format!("recovery rate must be > 0, got {gamma}")));
    }
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::Domain(format!("infection rate must be >= 0, got {beta}")));
    }
    Ok(beta / (beta + gamma))
}

/// Solution of an outbreak fixed point `v = 1 − φ + φ·h(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPoint {
    pub v: f64,
    pub iterations: usize,
    /// Whether the bisection stage was needed to pin the root.
    pub bisected: bool,
}

const DAMPING: f64 = 0.5;
const ITER_TOL: f64 = 1e-10;
const ITER_CAP: usize = 100_000;

/// Smallest root in [0, 1] of `v = rhs(v)` where `rhs` is an increasing
/// convex map with rhs(1) = 1 (a probability generating function).
///
/// `slope_at_one` is rhs′(1); a value ≤ 1 means the only root is v = 1.
fn solve_fixed_point(rhs: impl Fn(f64) -> Result<f64>, slope_at_one: f64) -> Result<FixedPoint> {
    if slope_at_one <= 1.0 {
        return Ok(FixedPoint {
            v: 1.0,
            iterations: 0,
            bisected: false,
        });
    }
    let h = |v: f64| -> Result<f64> { Ok(v - rhs(v)?) };
    let mut v = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < ITER_CAP {
        let next = (1.0 - DAMPING) * v + DAMPING * rhs(v)?;
        iterations += 1;
        let step = (next - v).abs();
        v = next.min(1.0);
        if step < ITER_TOL {
            converged = true;
            break;
        }
    }
    // Damped iteration approaches the root from below; a slow approach (near
    // criticality) can stop short, so close the gap with bisection on
    // h(v) = v − rhs(v), which is < 0 below the root and > 0 just above it.
    let hv = h(v)?;
    if converged && hv.abs() < 1e-13 {
        return Ok(FixedPoint {
            v,
            iterations,
            bisected: false,
        });
    }
    let mut lo = if hv < 0.0 { v } else { 0.0 };
    let mut hi = None;
    let mut gap = (1.0 - lo) / 2.0;
    for _ in 0..200 {
        let probe = lo + gap;
        if probe >= 1.0 {
            break;
        }
        if h(probe)? >= 0.0 {
            hi = Some(probe);
            break;
        }
        lo = probe;
        gap = (1.0 - lo) / 2.0;
    }
    let Some(mut hi) = hi else {
        if converged {
            return Ok(FixedPoint {
                v,
                iterations,
                bisected: false,
            });
        }
        return Err(Error::Numeric(format!(
            "fixed point did not converge after {iterations} iterations"
        )));
    };
    for _ in 0..200 {
        if hi - lo < 1e-15 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if h(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(FixedPoint {
        v: 0.5 * (lo + hi),
        iterations,
        bisected: true,
    })
}

/// rhs′(1) of `1 − φ + φ g1(u·v)/g1(u)` as a function of v, i.e.
/// φ·u·g0″(u)/g0′(u); infinite when the second moment diverges at u = 1.
fn outbreak_slope(dist: &DegreeDistribution, u: f64, phi: f64) -> Result<f64> {
    if phi == 0.0 {
        return Ok(0.0);
    }
    let g0p = dist.g0_prime(u)?;
    if g0p <= 0.0 {
        return Ok(0.0);
    }
    match dist.g0_second(u) {
        Ok(g0pp) => Ok(phi * u * g0pp / g0p),
        Err(Error::Divergent(_)) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Outbreak fixed point v = 1 − φ + φ g1(v).
pub fn final_size_fixed_point(dist: &DegreeDistribution, phi: f64) -> Result<FixedPoint> {
    check_unit("phi", phi)?;
    let slope = outbreak_slope(dist, 1.0, phi)?;
    solve_fixed_point(|v| Ok(1.0 - phi + phi * dist.g1(v)?), slope)
}

/// Expected final outbreak size S = 1 − g0(v).
pub fn final_size(dist: &DegreeDistribution, phi: f64) -> Result<f64> {
    let fp = final_size_fixed_point(dist, phi)?;
    Ok((1.0 - dist.g0(fp.v)?).clamp(0.0, 1.0))
}

/// Post-quarantine fixed point v = 1 − φ + φ g1(u·v)/g1(u).
pub fn total_removed_fixed_point(dist: &DegreeDistribution, u: f64, phi: f64) -> Result<FixedPoint> {
    check_unit("phi", phi)?;
    check_unit("u", u)?;
    if u == 0.0 {
        return Err(Error::Degenerate("quarantine at u = 0".into()));
    }
    if u == 1.0 {
        return final_size_fixed_point(dist, phi);
    }
    let gq = post_quarantine_gfuns(dist, u)?;
    let slope = outbreak_slope(dist, u, phi)?;
    solve_fixed_point(|v| Ok(1.0 - phi + phi * gq.g1(v)?), slope)
}

/// R(u) = 1 − g0(u·v): removed by the quarantine plus the expected outbreak
/// on the remaining susceptible graph.
pub fn total_removed(dist: &DegreeDistribution, u: f64, phi: f64) -> Result<f64> {
    let fp = total_removed_fixed_point(dist, u, phi)?;
    Ok((1.0 - dist.g0(u * fp.v)?).clamp(0.0, 1.0))
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must lie in [0, 1], got {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pl3() -> DegreeDistribution {
        DegreeDistribution::simple_powerlaw(3.0).unwrap()
    }

    fn poisson2() -> DegreeDistribution {
        DegreeDistribution::poisson(2.0).unwrap()
    }

    #[test]
    fn reproductive_numbers() {
        let r = reproductive_number(&DegreeDistribution::regular(4).unwrap()).unwrap();
        assert_abs_diff_eq!(r, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(reproductive_number(&poisson2()).unwrap(), 2.0, epsilon = 1e-12);
        let star = DegreeDistribution::empirical(vec![0.0, 1.0]).unwrap();
        assert_eq!(reproductive_number(&star).unwrap(), 0.0);
        assert!(matches!(reproductive_number(&pl3()), Err(Error::Divergent(_))));
    }

    #[test]
    fn quarantine_operator_examples() {
        let seq = DegreeSequence::from_counts(vec![0, 100, 50]);
        assert_eq!(quarantine_operator(&seq, 0.5).unwrap(), vec![0.0, 50.0, 12.5]);
        assert_eq!(quarantine_operator(&seq, 1.0).unwrap(), vec![0.0, 100.0, 50.0]);
        let seq0 = DegreeSequence::from_counts(vec![7, 3, 2]);
        assert_eq!(quarantine_operator(&seq0, 0.0).unwrap(), vec![7.0, 0.0, 0.0]);
        assert!(quarantine_operator(&seq, 1.5).is_err());
    }

    #[test]
    fn herd_condition_signs() {
        for d in [pl3(), poisson2(), DegreeDistribution::regular(4).unwrap()] {
            assert_eq!(herd_condition(&d, 0.0), 0.0);
        }
        let lambda = 2.0;
        for &u in &[0.2, 0.45, 0.55, 0.9] {
            let c = herd_condition(&poisson2(), u);
            assert_eq!(c > 0.0, u * lambda - 1.0 > 0.0, "u = {u}");
        }
        let reg = DegreeDistribution::regular(4).unwrap();
        assert_abs_diff_eq!(herd_condition(&reg, 0.5), 0.5f64.powi(4) * 8.0, epsilon = 1e-14);
    }

    #[test]
    fn herd_condition_matches_finite_differences() {
        let h = 1e-5;
        for d in [pl3(), poisson2(), DegreeDistribution::ba_analytic(1).unwrap()] {
            for &u in &[0.3, 0.6, 0.9, 0.95] {
                let g = |x: f64| d.g0(x).unwrap();
                let d1 = (g(u + h) - g(u - h)) / (2.0 * h);
                let d2 = (g(u + h) - 2.0 * g(u) + g(u - h)) / (h * h);
                let fd = u * u * d2 - u * d1;
                assert!((herd_condition(&d, u) - fd).abs() < 1e-4, "{d:?} u={u}");
            }
        }
    }

    #[test]
    fn thresholds() {
        assert_abs_diff_eq!(herd_threshold(&pl3()).unwrap(), 0.940599, epsilon = 1e-5);
        let ba1 = DegreeDistribution::ba_analytic(1).unwrap();
        assert_abs_diff_eq!(herd_threshold(&ba1).unwrap(), 0.776621, epsilon = 1e-5);
        assert_abs_diff_eq!(herd_threshold(&poisson2()).unwrap(), 0.5, epsilon = 1e-6);
        let reg = DegreeDistribution::regular(4).unwrap();
        assert!(matches!(herd_threshold(&reg), Err(Error::NoThresholdExists)));
        let sub = DegreeDistribution::poisson(0.5).unwrap();
        assert!(matches!(herd_threshold(&sub), Err(Error::NoThresholdNeeded)));
    }

    #[test]
    fn ba_threshold_matches_log_form() {
        // u² − 4u + 3u·ln(1−u) − 4·ln(1−u) vanishes at the BA m=1 threshold.
        let u = herd_threshold(&DegreeDistribution::ba_analytic(1).unwrap()).unwrap();
        let l = (1.0 - u).ln();
        assert!((u * u - 4.0 * u + 3.0 * u * l - 4.0 * l).abs() < 1e-6);
    }

    #[test]
    fn removed_fractions() {
        assert_eq!(removed_after_quarantine(&pl3(), 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            removed_after_quarantine(&pl3(), 0.940599).unwrap(),
            0.077088,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(
            removed_after_quarantine(&poisson2(), 0.5).unwrap(),
            1.0 - (-1f64).exp(),
            epsilon = 1e-12
        );
        assert!(removed_after_quarantine(&pl3(), -0.1).is_err());
    }

    #[test]
    fn quarantined_gfs() {
        let d = poisson2();
        let q = post_quarantine_gfuns(&d, 0.7).unwrap();
        assert_abs_diff_eq!(q.g0(1.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q.g1(1.0).unwrap(), 1.0, epsilon = 1e-12);
        // Poisson with mean λu: g0^Q(0) = e^{−λu}; λ=2, u=0.5 gives e^{−1}.
        let q = post_quarantine_gfuns(&d, 0.5).unwrap();
        assert_abs_diff_eq!(q.g0(0.0).unwrap(), (-1f64).exp(), epsilon = 1e-12);
        let q1 = post_quarantine_gfuns(&d, 1.0).unwrap();
        assert_abs_diff_eq!(q1.g0(0.3).unwrap(), d.g0(0.3).unwrap(), epsilon = 1e-15);
        assert!(matches!(post_quarantine_gfuns(&d, 0.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn transmissibility_values() {
        assert_abs_diff_eq!(transmissibility(1.0, 1.0).unwrap(), 0.5);
        assert_eq!(transmissibility(0.0, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(transmissibility(1.0, 2.0).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert!(matches!(transmissibility(1.0, 0.0), Err(Error::Domain(_))));
    }

    /// Oracle: plain iteration of S = 1 − e^{−λS} from S = 1.
    fn giant_component_oracle(lambda: f64) -> f64 {
        let mut s: f64 = 1.0;
        for _ in 0..10_000 {
            s = 1.0 - (-lambda * s).exp();
        }
        s
    }

    #[test]
    fn final_size_examples() {
        assert_eq!(final_size(&poisson2(), 0.0).unwrap(), 0.0);
        let s = final_size(&poisson2(), 1.0).unwrap();
        assert_abs_diff_eq!(s, giant_component_oracle(2.0), epsilon = 1e-9);
        assert_abs_diff_eq!(s, 0.7968, epsilon = 1e-4);
        let reg1 = DegreeDistribution::regular(1).unwrap();
        assert_eq!(final_size(&reg1, 0.8).unwrap(), 0.0);
    }

    #[test]
    fn fixed_points_back_substitute() {
        for phi in [0.3, 0.5, 0.75, 1.0] {
            for d in [pl3(), poisson2(), DegreeDistribution::ba_analytic(2).unwrap()] {
                let fp = final_size_fixed_point(&d, phi).unwrap();
                let resid = fp.v - (1.0 - phi + phi * d.g1(fp.v).unwrap());
                assert!(resid.abs() < 1e-9, "{d:?} φ={phi}: {resid}");
            }
        }
    }

    #[test]
    fn total_removed_consistency() {
        let d = poisson2();
        for phi in [0.2, 0.6, 1.0] {
            assert_abs_diff_eq!(
                total_removed(&d, 1.0, phi).unwrap(),
                final_size(&d, phi).unwrap(),
                epsilon = 1e-12
            );
        }
        // Exactly critical after the quarantine: no second wave.
        assert_abs_diff_eq!(
            total_removed(&d, 0.5, 1.0).unwrap(),
            1.0 - (-1f64).exp(),
            epsilon = 1e-6
        );
        let u = herd_threshold(&pl3()).unwrap();
        for phi in [0.3, 0.7, 1.0] {
            let r = total_removed(&pl3(), u, phi).unwrap();
            let rq = removed_after_quarantine(&pl3(), u).unwrap();
            assert!(r >= rq - 1e-12);
            assert!((r - rq).abs() < 1e-5, "φ={phi}: {r} vs {rq}");
        }
    }
}
