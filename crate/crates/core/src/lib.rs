//! Desk-scale carrier shutdown laboratory.
//!
//! A base station saves energy by shutting frequency carriers down when the
//! sector load is low and waking them back up when it climbs, driven by a
//! hysteresis threshold pair. This crate packages the whole tuning loop for
//! that policy:
//!
//! - [`power`]: PA consumption, affine in load with a sleep discontinuity;
//! - [`policy`]: the hysteresis shutdown state machine and the monotone
//!   threshold search segment;
//! - [`traffic`]: synthetic demand/CQI traces, load redistribution, and a
//!   KPI sampler with configurable acceptance response;
//! - [`tuner`]: grid Bayes over a bounded linear acceptance curve, drift
//!   diffusion for slow changes, and the stochastic-approximation baseline;
//! - [`windows`]: splitting the day into CQI-stable windows;
//! - [`runner`]: closed-loop, baseline, and SA campaigns, the open-loop
//!   threshold sweep, and tuner comparisons.
//!
//! Campaign artifacts (scenario TOML, trace CSV, belief checkpoints, run
//! logs) all have strict parsers; see the `fuzz/` directory for their fuzz
//! targets.

pub mod checkpoint;
pub mod error;
pub mod ids;
pub mod policy;
pub mod power;
pub mod runlog;
pub mod runner;
pub mod scenario;
pub mod traffic;
pub mod tuner;
pub mod windows;

pub use error::{Error, Result};
pub use ids::{CarrierId, PaId};
pub use runlog::{evaluate_run, RunLog, RunMetrics};
pub use runner::{compare_tuners, run_baseline, run_closed_loop, run_sa, sweep_x, RunOutput};
pub use scenario::ScenarioConfig;
