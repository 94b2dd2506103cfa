use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeState {
    S,
    I,
    R,
}

/// Per-edge infection rate `beta`, recovery rate `gamma` and the number of
/// nodes infected at the start and after every quarantine, `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpidemicParams {
    pub beta: f64,
    pub gamma: f64,
    pub rho: usize,
}

impl EpidemicParams {
    pub fn new(beta: f64, gamma: f64, rho: usize) -> Result<Self> {
        let p = EpidemicParams { beta, gamma, rho };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::param(format!("beta must be finite and >= 0, got {}", self.beta)));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::param(format!(
                "gamma must be finite and > 0, got {}",
                self.gamma
            )));
        }
        if self.rho < 1 {
            return Err(Error::param("rho must be >= 1"));
        }
        Ok(())
    }

    /// Probability of transmission across one edge before recovery.
    pub fn phi(&self) -> f64 {
        self.beta / (self.beta + self.gamma)
    }
}

/// When perfect quarantines are declared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuarantinePolicy {
    NoQuarantine,
    /// The i-th quarantine fires once the fraction of nodes ever infected
    /// reaches `thresholds[i]`.
    FractionAffected {
        thresholds: Vec<f64>,
    },
    /// A quarantine fires whenever at least `trigger` nodes are infected,
    /// at most `max_quarantines` times (unbounded when `None`).
    InfectedCount {
        trigger: usize,
        max_quarantines: Option<usize>,
    },
    /// The i-th quarantine fires once the fraction of nodes ever infected
    /// has grown by `increments[i]` since the previous quarantine (since
    /// the start for the first one).
    AffectedSinceQuarantine {
        increments: Vec<f64>,
    },
}

impl QuarantinePolicy {
    pub fn validate(&self) -> Result<()> {
        match self {
            QuarantinePolicy::NoQuarantine => Ok(()),
            QuarantinePolicy::FractionAffected { thresholds } => {
                check_fractions("threshold", thresholds)?;
                if thresholds.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::param("quarantine thresholds must be strictly ascending"));
                }
                Ok(())
            }
            QuarantinePolicy::InfectedCount {
                trigger,
                max_quarantines,
            } => {
                if *trigger < 1 {
                    return Err(Error::param("infected-count trigger must be >= 1"));
                }
                if *max_quarantines == Some(0) {
                    return Err(Error::param("max_quarantines must be >= 1 when given"));
                }
                Ok(())
            }
            QuarantinePolicy::AffectedSinceQuarantine { increments } => check_fractions("increment", increments),
        }
    }
}

fn check_fractions(name: &str, xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::param(format!("at least one {name} is required")));
    }
    for &x in xs {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::param(format!("{name} {x} is outside [0, 1]")));
        }
    }
    Ok(())
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .map_err(|_| Error::param(format!("invalid number {t:?} in policy")))
        })
        .collect()
}

/// Text form: `none`, `fraction:0.1,0.4`, `count:50` or `count:50:3`,
/// `since:0.1,0.2`.
impl FromStr for QuarantinePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = match s.split_once(':') {
            Some((k, r)) => (k.trim(), Some(r)),
            None => (s, None),
        };
        let policy = match (kind, rest) {
            ("none", None) => QuarantinePolicy::NoQuarantine,
            ("fraction", Some(r)) => QuarantinePolicy::FractionAffected {
                thresholds: parse_list(r)?,
            },
            ("since", Some(r)) => QuarantinePolicy::AffectedSinceQuarantine {
                increments: parse_list(r)?,
            },
            ("count", Some(r)) => {
                let mut parts = r.split(':');
                let parse = |t: &str| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::param(format!("invalid count {t:?} in policy")))
                };
                let trigger = parse(parts.next().unwrap_or(""))?;
                let max_quarantines = parts.next().map(parse).transpose()?;
                if parts.next().is_some() {
                    return Err(Error::param("count policy takes at most two fields"));
                }
                QuarantinePolicy::InfectedCount {
                    trigger,
                    max_quarantines,
                }
            }
            _ => {
                return Err(Error::param(format!(
                    "unknown policy {s:?}; expected none, fraction:<list>, since:<list> or count:<n>[:<max>]"
                )))
            }
        };
        policy.validate()?;
        Ok(policy)
    }
}

impl fmt::Display for QuarantinePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            QuarantinePolicy::NoQuarantine => write!(f, "none"),
            QuarantinePolicy::FractionAffected { thresholds } => write!(f, "fraction:{}", join(thresholds)),
            QuarantinePolicy::AffectedSinceQuarantine { increments } => write!(f, "since:{}", join(increments)),
            QuarantinePolicy::InfectedCount {
                trigger,
                max_quarantines: None,
            } => write!(f, "count:{trigger}"),
            QuarantinePolicy::InfectedCount {
                trigger,
                max_quarantines: Some(m),
            } => {
                write!(f, "count:{trigger}:{m}")
            }
        }
    }
}
