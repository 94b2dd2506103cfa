//! Continuous-time SIR on a fixed graph with perfect quarantines.

mod engine;
mod metrics;
mod params;

pub use engine::{
    detect_second_wave, run_sir, run_sir_with, QuarantineRecord, Record, SimOptions, SimOutcome, SECOND_WAVE_FRACTION,
};
pub use metrics::{
    degree_class_susceptibility, fwhm, groupwise_survival, DegreeSusceptibility, Group, GroupCurve, Wave,
};
pub use params::{EpidemicParams, NodeState, QuarantinePolicy};
