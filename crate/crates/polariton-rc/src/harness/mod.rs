//! Experiment harness: declarative configuration, seeded deterministic
//! sweeps over both reservoirs, the linear baseline, resource comparison,
//! robustness scans, figure rendering, and result persistence.

pub mod appendix;
pub mod compare;
pub mod config;
pub mod plots;
pub mod record;
pub mod sweeps;
pub mod tolerances;
