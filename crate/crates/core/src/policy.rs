//! Hysteresis carrier shutdown state machine.
//!
//! Carriers are shut down from the back of a fixed order and reactivated in
//! reverse. One step compares the sector mean load against a threshold pair:
//! below `rho_min` the last active carrier is shut down, above `rho_max` the
//! next one is switched back on, in between nothing moves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::CarrierId;

/// Min/max load thresholds driving the hysteresis policy.
///
/// Valid pairs satisfy `0 <= rho_min < rho_max <= 1`; the degenerate
/// all-active pair `[0, 0]` is explicitly allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPair {
    rho_min: f64,
    rho_max: f64,
}

impl ThresholdPair {
    pub fn new(rho_min: f64, rho_max: f64) -> Result<Self> {
        if !rho_min.is_finite() || !rho_max.is_finite() {
            return Err(Error::config("thresholds must be finite"));
        }
        let baseline = rho_min == 0.0 && rho_max == 0.0;
        if !baseline && !(0.0 <= rho_min && rho_min < rho_max && rho_max <= 1.0) {
            return Err(Error::config(format!(
                "threshold pair [{rho_min}, {rho_max}] violates 0 <= min < max <= 1"
            )));
        }
        Ok(ThresholdPair { rho_min, rho_max })
    }

    /// The `[0, 0]` pair: never shut down, reactivate on any load.
    pub fn baseline() -> Self {
        ThresholdPair {
            rho_min: 0.0,
            rho_max: 0.0,
        }
    }

    pub fn rho_min(&self) -> f64 {
        self.rho_min
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }
}

/// One-dimensional threshold search segment.
///
/// Parameter `x` in `[0, 1]` interpolates component-wise from `lo` to `hi`,
/// so both thresholds are non-decreasing along the segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchRegion {
    lo: ThresholdPair,
    hi: ThresholdPair,
}

impl SearchRegion {
    pub fn new(lo: ThresholdPair, hi: ThresholdPair) -> Result<Self> {
        if lo.rho_min > hi.rho_min || lo.rho_max > hi.rho_max {
            return Err(Error::config(
                "search region endpoints must be component-wise non-decreasing",
            ));
        }
        if hi.rho_min >= hi.rho_max {
            return Err(Error::config(
                "search region upper endpoint must have rho_min < rho_max",
            ));
        }
        Ok(SearchRegion { lo, hi })
    }

    pub fn lo(&self) -> ThresholdPair {
        self.lo
    }

    pub fn hi(&self) -> ThresholdPair {
        self.hi
    }
}

impl Default for SearchRegion {
    fn default() -> Self {
        SearchRegion {
            lo: ThresholdPair::baseline(),
            hi: ThresholdPair {
                rho_min: 0.3,
                rho_max: 0.6,
            },
        }
    }
}

/// Map the scalar search parameter to a deployable threshold pair.
pub fn thresholds_from_x(x: f64, region: &SearchRegion) -> Result<ThresholdPair> {
    if !x.is_finite() || !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("x {x} outside [0, 1]")));
    }
    let lerp = |a: f64, b: f64| a + x * (b - a);
    ThresholdPair::new(
        lerp(region.lo.rho_min, region.hi.rho_min),
        lerp(region.lo.rho_max, region.hi.rho_max),
    )
}

/// Activation state of the ordered carrier list.
///
/// The active set is always the first `active_count` carriers of the order;
/// the first `coverage_floor` carriers are never eligible for shutdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyState {
    ordered_carriers: Vec<CarrierId>,
    active_count: usize,
    coverage_floor: usize,
}

impl PolicyState {
    pub fn new(
        ordered_carriers: Vec<CarrierId>,
        active_count: usize,
        coverage_floor: usize,
    ) -> Result<Self> {
        if ordered_carriers.is_empty() {
            return Err(Error::config("carrier order is empty"));
        }
        if coverage_floor < 1 || coverage_floor > ordered_carriers.len() {
            return Err(Error::config(format!(
                "coverage floor {coverage_floor} outside 1..={}",
                ordered_carriers.len()
            )));
        }
        if active_count < coverage_floor || active_count > ordered_carriers.len() {
            return Err(Error::config(format!(
                "active count {active_count} outside {coverage_floor}..={}",
                ordered_carriers.len()
            )));
        }
        Ok(PolicyState {
            ordered_carriers,
            active_count,
            coverage_floor,
        })
    }

    /// Start with every carrier active.
    pub fn all_active(ordered_carriers: Vec<CarrierId>, coverage_floor: usize) -> Result<Self> {
        let n = ordered_carriers.len();
        PolicyState::new(ordered_carriers, n, coverage_floor)
    }

    pub fn active(&self) -> &[CarrierId] {
        &self.ordered_carriers[..self.active_count]
    }

    pub fn inactive(&self) -> &[CarrierId] {
        &self.ordered_carriers[self.active_count..]
    }

    pub fn order(&self) -> &[CarrierId] {
        &self.ordered_carriers
    }

    pub fn active_count(&self) -> usize {
        self.active_count
    }

    pub fn total(&self) -> usize {
        self.ordered_carriers.len()
    }

    pub fn coverage_floor(&self) -> usize {
        self.coverage_floor
    }
}

/// One hysteresis transition. Strict comparisons: load equal to a threshold
/// takes no action. At most one carrier changes per step.
pub fn policy_step(
    state: &PolicyState,
    mean_load: f64,
    thresholds: &ThresholdPair,
) -> PolicyState {
    debug_assert!((0.0..=1.0).contains(&mean_load), "mean load {mean_load}");
    let mut next = state.clone();
    if mean_load < thresholds.rho_min && state.active_count > state.coverage_floor {
        next.active_count -= 1;
    } else if mean_load > thresholds.rho_max && state.active_count < state.total() {
        next.active_count += 1;
    }
    next
}
