//! Network epidemics with perfect quarantines.
//!
//! The crate is split into four layers:
//!
//! * [`netgen`] builds and measures contact graphs (synthetic generators,
//!   configuration model, edge-list ingestion, summary statistics).
//! * [`gfun`] holds the generating-function analytics: special functions,
//!   the quarantine operator, herd-immunity thresholds and outbreak sizes.
//! * [`sim`] is a continuous-time event-driven SIR engine with quarantine
//!   policies and wave metrics.
//! * [`exper`] runs the Monte Carlo experiment families on top of the above.

pub mod error;
pub mod exper;
pub mod gfun;
pub mod netgen;
pub mod seed;
pub mod sim;

pub use error::{Error, Result};
pub use seed::Seed;
