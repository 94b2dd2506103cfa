//! Generating-function analytics for configuration-model graphs.

pub mod analytics;
pub mod dist;
pub mod special;

pub use analytics::{
    final_size, final_size_fixed_point, herd_condition, herd_threshold, post_quarantine_gfuns, quarantine_operator,
    removed_after_quarantine, reproductive_number, total_removed, total_removed_fixed_point, transmissibility,
    FixedPoint, QuarantinedGf,
};
pub use dist::{DegreeDistribution, GfKind};
pub use special::{polylog, zeta};
