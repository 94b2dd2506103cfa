//! Riemann zeta and real polylogarithm.
//!
//! `zeta` uses Euler–Maclaurin summation (with the functional equation for
//! negative arguments). `polylog` sums the defining series for small `z` and
//! switches to the expansion in `ln z` around `z = 1`, where the direct series
//! converges too slowly.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::{Error, Result};

/// Bernoulli numbers B_2, B_4, ..., B_20.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const EM_CUTOFF: usize = 20;

/// Riemann zeta for real `s > 1`.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s.is_finite() && s > 1.0) {
        return Err(Error::Domain(format!("zeta(s) requires s > 1, got {s}")));
    }
    Ok(zeta_continued(s))
}

/// Analytic continuation of zeta for real `s != 1`.
pub(crate) fn zeta_continued(s: f64) -> f64 {
    if s < -0.5 {
        // Functional equation; lands in the Euler–Maclaurin range.
        let t = 1.0 - s;
        return 2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * gamma(t) * zeta_continued(t);
    }
    if s > 60.0 {
        // 1 + 2^-s + 3^-s, anything further is below f64 resolution.
        return 1.0 + 2f64.powf(-s) + 3f64.powf(-s);
    }
    let n = EM_CUTOFF as f64;
    let mut sum: f64 = (1..EM_CUTOFF).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // Σ_j B_2j/(2j)! · s(s+1)…(s+2j−2) · N^{−s−2j+1}
    let mut rising = s; // s(s+1)…(s+2j−2) for j = 1
    let mut fact = 2.0; // (2j)!
    let mut npow = n.powf(-s - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b / fact * rising * npow;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
        let j1 = (j + 1) as f64;
        rising *= (s + 2.0 * j1 - 1.0) * (s + 2.0 * j1);
        fact *= (2.0 * j1 + 1.0) * (2.0 * j1 + 2.0);
        npow /= n * n;
    }
    sum
}

fn harmonic(n: u32) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Polylogarithm Li_s(z) = Σ_{k≥1} z^k / k^s for real `s` and `z ∈ [0, 1]`.
///
/// At `z = 1` the series is ζ(s) and diverges for `s <= 1`.
pub fn polylog(s: f64, z: f64) -> Result<f64> {
    if !s.is_finite() || !z.is_finite() || !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain(format!(
            "polylog({s}, {z}): need finite s and z in [0, 1]"
        )));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z == 1.0 {
        if s <= 1.0 {
            return Err(Error::Divergent(format!("Li_{s}(1) diverges for s <= 1")));
        }
        return Ok(zeta_continued(s));
    }
    let nearest = s.round();
    let near_integer = (s - nearest).abs();
    if z <= 0.5 {
        return Ok(direct_series(s, z));
    }
    if near_integer == 0.0 && nearest >= 1.0 {
        return Ok(log_expansion_integer(nearest as u32, z));
    }
    if near_integer < 1e-4 && nearest >= 1.0 {
        // The non-integer expansion cancels catastrophically next to a pole.
        return Ok(direct_series(s, z));
    }
    Ok(log_expansion(s, z))
}

fn direct_series(s: f64, z: f64) -> f64 {
    const CAP: u64 = 10_000_000;
    let mut sum = 0.0;
    let mut zk = 1.0;
    for k in 1..=CAP {
        let kf = k as f64;
        zk *= z;
        let term = zk * kf.powf(-s);
        sum += term;
        // Ratio of consecutive terms bounds the tail geometrically.
        let ratio = z * (kf / (kf + 1.0)).powf(s).max(1.0);
        if ratio < 1.0 && term * ratio / (1.0 - ratio) < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
        if term < 1e-300 {
            break;
        }
    }
    sum
}

/// Li_s(e^μ) = Γ(1−s)(−μ)^{s−1} + Σ_k ζ(s−k) μ^k / k!, for non-integer s.
fn log_expansion(s: f64, z: f64) -> f64 {
    let mu = z.ln();
    let mut sum = gamma(1.0 - s) * (-mu).powf(s - 1.0);
    let mut pow = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..80 {
        if k > 0 {
            pow *= mu / k as f64;
        }
        let term = zeta_continued(s - k as f64) * pow;
        sum += term;
        // Every other ζ value at negative even integers vanishes, so wait
        // for two consecutive negligible terms.
        if k > 4 && term.abs() + prev.abs() < 1e-18 {
            break;
        }
        prev = term;
    }
    sum
}

/// Li_n(e^μ) = μ^{n−1}/(n−1)! (H_{n−1} − ln(−μ)) + Σ_{k≠n−1} ζ(n−k) μ^k / k!.
fn log_expansion_integer(n: u32, z: f64) -> f64 {
    let mu = z.ln();
    let mut sum = 0.0;
    let mut pow = 1.0; // μ^k / k!
    let mut prev = f64::INFINITY;
    for k in 0..80u32 {
        if k > 0 {
            pow *= mu / k as f64;
        }
        let term = if k + 1 == n {
            pow * (harmonic(n - 1) - (-mu).ln())
        } else {
            zeta_continued(n as f64 - k as f64) * pow
        };
        sum += term;
        if k > n + 4 && term.abs() + prev.abs() < 1e-18 {
            break;
        }
        prev = term;
    }
    sum
}
