use serde::{Deserialize, Serialize};

use super::special::{polylog, zeta, zeta_continued};
use crate::{Error, Result};

/// Degree distribution {p_k}: closed-form families or an explicit table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum DegreeDistribution {
    /// p_k = k^{−α} / ζ(α), k ≥ 1.
    SimplePowerlaw { alpha: f64 },
    /// p_k = 2m(m+1) / (k(k+1)(k+2)), k ≥ m.
    BaAnalytic { m: u32 },
    /// p_k = λ^k e^{−λ} / k!, k ≥ 0.
    Poisson { lambda: f64 },
    /// p_d = 1.
    Regular { d: u32 },
    /// Explicit table, index = degree.
    Empirical { p: Vec<f64> },
}

/// Which generating-function quantity to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GfKind {
    G0,
    G0Prime,
    G0Second,
    G1,
}

/// Σ p_k = 1 tolerance for explicit tables.
const NORM_TOL: f64 = 1e-10;
/// Series evaluation is used below this argument; closed forms above.
const SERIES_SWITCH: f64 = 0.5;

impl DegreeDistribution {
    pub fn simple_powerlaw(alpha: f64) -> Result<Self> {
        let d = DegreeDistribution::SimplePowerlaw { alpha };
        d.validate()?;
        Ok(d)
    }

    pub fn ba_analytic(m: u32) -> Result<Self> {
        let d = DegreeDistribution::BaAnalytic { m };
        d.validate()?;
        Ok(d)
    }

    pub fn poisson(lambda: f64) -> Result<Self> {
        let d = DegreeDistribution::Poisson { lambda };
        d.validate()?;
        Ok(d)
    }

    pub fn regular(d: u32) -> Result<Self> {
        let dist = DegreeDistribution::Regular { d };
        dist.validate()?;
        Ok(dist)
    }

    /// Table of probabilities; must be non-negative and sum to one.
    pub fn empirical(p: Vec<f64>) -> Result<Self> {
        let d = DegreeDistribution::Empirical { p };
        d.validate()?;
        Ok(d)
    }

    /// Normalized table from node counts per degree.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::param("degree counts are all zero"));
        }
        let p = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Ok(DegreeDistribution::Empirical { p })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DegreeDistribution::SimplePowerlaw { alpha } => {
                if !(alpha.is_finite() && *alpha > 1.0) {
                    return Err(Error::param(format!("powerlaw exponent must be > 1, got {alpha}")));
                }
            }
            DegreeDistribution::BaAnalytic { m } => {
                if *m < 1 {
                    return Err(Error::param("BA analytic distribution needs m >= 1"));
                }
            }
            DegreeDistribution::Poisson { lambda } => {
                if !(lambda.is_finite() && *lambda > 0.0) {
                    return Err(Error::param(format!("Poisson mean must be > 0, got {lambda}")));
                }
            }
            DegreeDistribution::Regular { d } => {
                if *d < 1 {
                    return Err(Error::param("regular degree must be >= 1"));
                }
            }
            DegreeDistribution::Empirical { p } => {
                if p.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
                    return Err(Error::param("empirical probabilities must be finite and >= 0"));
                }
                let total: f64 = p.iter().sum();
                if (total - 1.0).abs() > NORM_TOL {
                    return Err(Error::param(format!(
                        "empirical distribution is not normalized (sum = {total})"
                    )));
                }
                if p.iter().enumerate().all(|(k, &x)| k == 0 || x == 0.0) {
                    return Err(Error::param("empirical distribution has no mass at degree >= 1"));
                }
            }
        }
        Ok(())
    }

    /// Smallest degree with positive probability.
    pub fn min_degree(&self) -> u64 {
        match self {
            DegreeDistribution::SimplePowerlaw { .. } => 1,
            DegreeDistribution::BaAnalytic { m } => *m as u64,
            DegreeDistribution::Poisson { .. } => 0,
            DegreeDistribution::Regular { d } => *d as u64,
            DegreeDistribution::Empirical { p } => p.iter().position(|&x| x > 0.0).unwrap_or(0) as u64,
        }
    }

    /// p_k.
    pub fn pmf(&self, k: u64) -> f64 {
        self.pmf_fn()(k)
    }

    /// p_k as a closure with the normalization computed once.
    pub fn pmf_fn(&self) -> Box<dyn Fn(u64) -> f64 + '_> {
        match self {
            DegreeDistribution::SimplePowerlaw { alpha } => {
                let norm = zeta_continued(*alpha);
                let alpha = *alpha;
                Box::new(move |k| if k == 0 { 0.0 } else { (k as f64).powf(-alpha) / norm })
            }
            DegreeDistribution::BaAnalytic { m } => {
                let m = *m;
                Box::new(move |k| {
                    if k < m as u64 {
                        0.0
                    } else {
                        let (m, k) = (m as f64, k as f64);
                        2.0 * m * (m + 1.0) / (k * (k + 1.0) * (k + 2.0))
                    }
                })
            }
            DegreeDistribution::Poisson { lambda } => {
                let (lambda, ln_lambda) = (*lambda, lambda.ln());
                Box::new(move |k| {
                    let k = k as f64;
                    (k * ln_lambda - lambda - ln_factorial(k)).exp()
                })
            }
            DegreeDistribution::Regular { d } => {
                let d = *d as u64;
                Box::new(move |k| if k == d { 1.0 } else { 0.0 })
            }
            DegreeDistribution::Empirical { p } => Box::new(move |k| p.get(k as usize).copied().unwrap_or(0.0)),
        }
    }

    /// ⟨k⟩ = g0′(1).
    pub fn mean(&self) -> Result<f64> {
        self.eval(GfKind::G0Prime, 1.0)
    }

    /// E[k(k−1)] = g0″(1).
    pub fn second_factorial_moment(&self) -> Result<f64> {
        self.eval(GfKind::G0Second, 1.0)
    }

    pub fn g0(&self, z: f64) -> Result<f64> {
        self.eval(GfKind::G0, z)
    }

    pub fn g0_prime(&self, z: f64) -> Result<f64> {
        self.eval(GfKind::G0Prime, z)
    }

    pub fn g0_second(&self, z: f64) -> Result<f64> {
        self.eval(GfKind::G0Second, z)
    }

    pub fn g1(&self, z: f64) -> Result<f64> {
        self.eval(GfKind::G1, z)
    }

    /// Evaluate a generating-function quantity at `z ∈ [0, 1]`.
    pub fn eval(&self, which: GfKind, z: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&z) {
            return Err(Error::Domain(format!("generating functions need z in [0, 1], got {z}")));
        }
        if which == GfKind::G1 {
            let mean = self.eval(GfKind::G0Prime, 1.0)?;
            if mean <= 0.0 {
                return Err(Error::Degenerate("g1 undefined: mean degree is zero".into()));
            }
            return Ok(self.eval(GfKind::G0Prime, z)? / mean);
        }
        match self {
            DegreeDistribution::Poisson { lambda } => {
                let base = (lambda * (z - 1.0)).exp();
                Ok(match which {
                    GfKind::G0 => base,
                    GfKind::G0Prime => lambda * base,
                    _ => lambda * lambda * base,
                })
            }
            DegreeDistribution::Regular { d } => {
                let d = *d as i32;
                let df = d as f64;
                Ok(match which {
                    GfKind::G0 => z.powi(d),
                    GfKind::G0Prime => df * z.powi(d - 1),
                    _ => {
                        if d < 2 {
                            0.0
                        } else {
                            df * (df - 1.0) * z.powi(d - 2)
                        }
                    }
                })
            }
            DegreeDistribution::Empirical { p } => Ok(empirical_eval(p, which, z)),
            DegreeDistribution::SimplePowerlaw { alpha } => powerlaw_eval(*alpha, which, z, self),
            DegreeDistribution::BaAnalytic { m } => ba_eval(*m, which, z, self),
        }
    }

    /// Σ_k p_k u^k w(k) for `u ∈ [0, 1)`, truncated when the running term
    /// falls below 1e−14 with a geometric tail bound below 1e−12.
    pub fn moment_series(&self, u: f64, w: impl Fn(f64) -> f64) -> f64 {
        match self {
            DegreeDistribution::Empirical { p } => p
                .iter()
                .enumerate()
                .map(|(k, &pk)| pk * u.powi(k as i32) * w(k as f64))
                .sum(),
            DegreeDistribution::Regular { d } => u.powi(*d as i32) * w(*d as f64),
            _ => {
                const CAP: u64 = 10_000_000;
                let kmin = self.min_degree();
                let pmf = self.pmf_fn();
                let mut sum = 0.0;
                let mut prev = f64::INFINITY;
                let mut uk = u.powi(kmin as i32);
                for k in kmin..kmin + CAP {
                    let term = pmf(k) * uk * w(k as f64);
                    sum += term;
                    let mag = term.abs();
                    if k > kmin + 2 && mag <= prev && mag < 1e-14 && mag * u / (1.0 - u) < 1e-12 {
                        break;
                    }
                    if uk == 0.0 {
                        break;
                    }
                    prev = mag;
                    uk *= u;
                }
                sum
            }
        }
    }

    /// Finite table for sampling: truncate at the smallest k_max whose tail
    /// mass is below `tail`, then renormalize.
    pub fn truncated_table(&self, tail: f64) -> Vec<f64> {
        let mut table = Vec::new();
        match self {
            DegreeDistribution::Empirical { p } => table = p.clone(),
            DegreeDistribution::Regular { d } => {
                table.resize(*d as usize + 1, 0.0);
                table[*d as usize] = 1.0;
            }
            _ => {
                let pmf = self.pmf_fn();
                let mut cum = 0.0;
                let mut k = 0u64;
                loop {
                    let pk = pmf(k);
                    table.push(pk);
                    cum += pk;
                    k += 1;
                    if k > self.min_degree() && 1.0 - cum < tail {
                        break;
                    }
                    if k > 100_000_000 {
                        break;
                    }
                }
            }
        }
        let total: f64 = table.iter().sum();
        table.iter_mut().for_each(|x| *x /= total);
        table
    }
}

fn ln_factorial(k: f64) -> f64 {
    statrs::function::gamma::ln_gamma(k + 1.0)
}

fn empirical_eval(p: &[f64], which: GfKind, z: f64) -> f64 {
    let mut sum = 0.0;
    for (k, &pk) in p.iter().enumerate() {
        if pk == 0.0 {
            continue;
        }
        let k = k as i32;
        let kf = k as f64;
        sum += match which {
            GfKind::G0 => pk * z.powi(k),
            GfKind::G0Prime if k >= 1 => pk * kf * z.powi(k - 1),
            GfKind::G0Second if k >= 2 => pk * kf * (kf - 1.0) * z.powi(k - 2),
            _ => 0.0,
        };
    }
    sum
}

/// Direct series for z ≤ 0.5, where terms decay at least like 2^{−k}.
fn small_z_series(dist: &DegreeDistribution, which: GfKind, z: f64) -> f64 {
    let kmin = dist.min_degree().max(match which {
        GfKind::G0 => 0,
        GfKind::G0Prime => 1,
        _ => 2,
    });
    let pmf = dist.pmf_fn();
    let mut sum = 0.0;
    for k in kmin..kmin + 4000 {
        let kf = k as f64;
        let term = match which {
            GfKind::G0 => pmf(k) * z.powi(k as i32),
            GfKind::G0Prime => pmf(k) * kf * z.powi(k as i32 - 1),
            _ => pmf(k) * kf * (kf - 1.0) * z.powi(k as i32 - 2),
        };
        sum += term;
        if term.abs() < 1e-18 && k > kmin + 4 {
            break;
        }
    }
    sum
}

fn powerlaw_eval(alpha: f64, which: GfKind, z: f64, dist: &DegreeDistribution) -> Result<f64> {
    let norm = zeta(alpha)?;
    if z == 1.0 {
        return match which {
            GfKind::G0 => Ok(1.0),
            GfKind::G0Prime => {
                if alpha > 2.0 {
                    Ok(zeta_continued(alpha - 1.0) / norm)
                } else {
                    Err(Error::Divergent(format!(
                        "mean degree diverges for alpha = {alpha} <= 2"
                    )))
                }
            }
            _ => {
                if alpha > 3.0 {
                    Ok((zeta_continued(alpha - 2.0) - zeta_continued(alpha - 1.0)) / norm)
                } else {
                    Err(Error::Divergent(format!(
                        "second moment diverges for alpha = {alpha} <= 3"
                    )))
                }
            }
        };
    }
    if z <= SERIES_SWITCH {
        return Ok(small_z_series(dist, which, z));
    }
    Ok(match which {
        GfKind::G0 => polylog(alpha, z)? / norm,
        GfKind::G0Prime => polylog(alpha - 1.0, z)? / (z * norm),
        _ => (polylog(alpha - 2.0, z)? - polylog(alpha - 1.0, z)?) / (z * z * norm),
    })
}

/// Σ_{k≥m} z^k/(k+a) = z^{−a} (−ln(1−z) − Σ_{j=1}^{m+a−1} z^j/j), for z > 0.
fn shifted_log_sum(m: u32, a: u32, z: f64) -> f64 {
    let mut partial = 0.0;
    let mut zj = 1.0;
    for j in 1..(m + a) {
        zj *= z;
        partial += zj / j as f64;
    }
    (-(-z).ln_1p() - partial) / z.powi(a as i32)
}

fn ba_eval(m: u32, which: GfKind, z: f64, dist: &DegreeDistribution) -> Result<f64> {
    let c = m as f64 * (m as f64 + 1.0);
    if z == 1.0 {
        return match which {
            GfKind::G0 => Ok(1.0),
            GfKind::G0Prime => Ok(2.0 * m as f64),
            _ => Err(Error::Divergent("second moment of the BA distribution diverges".into())),
        };
    }
    if z <= SERIES_SWITCH {
        return Ok(small_z_series(dist, which, z));
    }
    let a0 = shifted_log_sum(m, 0, z);
    let a1 = shifted_log_sum(m, 1, z);
    let a2 = shifted_log_sum(m, 2, z);
    Ok(match which {
        // 2/(k(k+1)(k+2)) = 1/k − 2/(k+1) + 1/(k+2)
        GfKind::G0 => c * (a0 - 2.0 * a1 + a2),
        // 1/((k+1)(k+2)) = 1/(k+1) − 1/(k+2)
        GfKind::G0Prime => 2.0 * c * (a1 - a2) / z,
        // (k−1)/((k+1)(k+2)) = −2/(k+1) + 3/(k+2)
        _ => 2.0 * c * (3.0 * a2 - 2.0 * a1) / (z * z),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn all_dists() -> Vec<DegreeDistribution> {
        vec![
            DegreeDistribution::simple_powerlaw(3.0).unwrap(),
            DegreeDistribution::simple_powerlaw(2.5).unwrap(),
            DegreeDistribution::simple_powerlaw(3.5).unwrap(),
            DegreeDistribution::ba_analytic(1).unwrap(),
            DegreeDistribution::ba_analytic(3).unwrap(),
            DegreeDistribution::poisson(2.0).unwrap(),
            DegreeDistribution::regular(4).unwrap(),
            DegreeDistribution::empirical(vec![0.1, 0.2, 0.3, 0.4]).unwrap(),
        ]
    }

    /// Oracle: brute-force partial sums of p_k with many terms.
    fn brute(dist: &DegreeDistribution, which: GfKind, z: f64) -> f64 {
        let pmf = dist.pmf_fn();
        let mut sum = 0.0;
        for k in 0..200_000u64 {
            let kf = k as f64;
            let pk = pmf(k);
            sum += match which {
                GfKind::G0 => pk * z.powf(kf),
                GfKind::G0Prime if k >= 1 => pk * kf * z.powf(kf - 1.0),
                GfKind::G0Second if k >= 2 => pk * kf * (kf - 1.0) * z.powf(kf - 2.0),
                _ => 0.0,
            };
        }
        sum
    }

    #[test]
    fn normalization_at_one() {
        for d in all_dists() {
            assert_abs_diff_eq!(d.g0(1.0).unwrap(), 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(d.g1(1.0).unwrap(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn closed_forms_match_brute_force() {
        for d in all_dists() {
            for &z in &[0.0, 0.2, 0.5, 0.51, 0.7, 0.9, 0.95] {
                for which in [GfKind::G0, GfKind::G0Prime, GfKind::G0Second] {
                    let got = d.eval(which, z).unwrap();
                    let want = brute(&d, which, z);
                    assert_abs_diff_eq!(got, want, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn poisson_value() {
        let d = DegreeDistribution::poisson(2.0).unwrap();
        assert_abs_diff_eq!(d.g0(0.5).unwrap(), (-1f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn powerlaw_value_at_threshold() {
        let d = DegreeDistribution::simple_powerlaw(3.0).unwrap();
        assert_abs_diff_eq!(d.g0(0.940599).unwrap(), 0.922912, epsilon = 1e-6);
    }

    #[test]
    fn powerlaw_g1_closed_form() {
        // g1(z) = Li_{α−1}(z) / (z ζ(α−1))
        let d = DegreeDistribution::simple_powerlaw(3.0).unwrap();
        let z = 0.8;
        let want = polylog(2.0, z).unwrap() / (z * zeta(2.0).unwrap());
        assert_abs_diff_eq!(d.g1(z).unwrap(), want, epsilon = 1e-12);
    }

    #[test]
    fn divergent_moments() {
        let pl3 = DegreeDistribution::simple_powerlaw(3.0).unwrap();
        assert!(matches!(pl3.g0_second(1.0), Err(Error::Divergent(_))));
        let pl2 = DegreeDistribution::simple_powerlaw(2.0).unwrap();
        assert!(matches!(pl2.mean(), Err(Error::Divergent(_))));
        let ba = DegreeDistribution::ba_analytic(1).unwrap();
        assert!(matches!(ba.second_factorial_moment(), Err(Error::Divergent(_))));
        assert_abs_diff_eq!(ba.mean().unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn invalid_distributions() {
        assert!(DegreeDistribution::simple_powerlaw(1.0).is_err());
        assert!(DegreeDistribution::poisson(-1.0).is_err());
        assert!(DegreeDistribution::regular(0).is_err());
        assert!(DegreeDistribution::ba_analytic(0).is_err());
        assert!(DegreeDistribution::empirical(vec![0.5, 0.4]).is_err());
        assert!(DegreeDistribution::empirical(vec![0.5, -0.5, 1.0]).is_err());
        assert!(DegreeDistribution::empirical(vec![1.0]).is_err());
        let d = DegreeDistribution::poisson(2.0).unwrap();
        assert!(d.g0(1.5).is_err());
    }

    #[test]
    fn poisson_analytic_and_truncated_table_agree() {
        let analytic = DegreeDistribution::poisson(2.0).unwrap();
        let table = DegreeDistribution::empirical(analytic.truncated_table(1e-12)).unwrap();
        for &z in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            for which in [GfKind::G0, GfKind::G0Prime, GfKind::G0Second, GfKind::G1] {
                let a = analytic.eval(which, z).unwrap();
                let e = table.eval(which, z).unwrap();
                assert!((a - e).abs() < 1e-6, "{which:?} at {z}: {a} vs {e}");
            }
        }
    }

    #[test]
    fn truncated_table_tail() {
        let d = DegreeDistribution::simple_powerlaw(3.0).unwrap();
        let t = d.truncated_table(1e-8);
        assert_abs_diff_eq!(t.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        // tail Σ_{k>K} k^-3/ζ(3) ≈ 1/(2K²ζ(3)) < 1e-8 ⇒ K ≈ 6450
        assert!((6000..7000).contains(&t.len()), "{}", t.len());
    }

    #[test]
    fn moment_series_matches_derivatives() {
        for d in all_dists() {
            for &u in &[0.3, 0.6, 0.9] {
                let series = d.moment_series(u, |k| k * (k - 1.0) - k);
                let closed = u * u * d.g0_second(u).unwrap() - u * d.g0_prime(u).unwrap();
                assert_abs_diff_eq!(series, closed, epsilon = 1e-10);
            }
        }
    }
}
