//! PA power model: affine in load while the amplifier is awake, with a
//! discontinuous drop to a sleep floor once every carrier it serves is off.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{CarrierId, PaId};

/// Load-to-watts curve of a single power amplifier.
///
/// Awake consumption is `slope_a * load + idle_b`; a fully asleep PA draws
/// `sleep_p`. The curve is discontinuous at zero load: a PA that is awake
/// with no traffic still pays `idle_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerCurve {
    /// Watts per unit of load.
    pub slope_a: f64,
    /// Watts drawn awake as load approaches zero.
    pub idle_b: f64,
    /// Watts drawn with every served carrier shut down.
    pub sleep_p: f64,
}

impl PowerCurve {
    pub fn new(slope_a: f64, idle_b: f64, sleep_p: f64) -> Result<Self> {
        let curve = PowerCurve {
            slope_a,
            idle_b,
            sleep_p,
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite =
            self.slope_a.is_finite() && self.idle_b.is_finite() && self.sleep_p.is_finite();
        if !all_finite {
            return Err(Error::config("power curve values must be finite"));
        }
        if self.slope_a < 0.0 || self.idle_b < 0.0 || self.sleep_p < 0.0 {
            return Err(Error::config("power curve values must be non-negative"));
        }
        if self.sleep_p >= self.idle_b {
            return Err(Error::config(format!(
                "sleep power {} must be below idle power {}",
                self.sleep_p, self.idle_b
            )));
        }
        Ok(())
    }
}

impl Default for PowerCurve {
    fn default() -> Self {
        PowerCurve {
            slope_a: 2.0,
            idle_b: 10.0,
            sleep_p: 3.0,
        }
    }
}

/// Carrier-to-PA wiring of one sector, with the power curve of each PA.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaMap {
    pub pa_of_carrier: BTreeMap<CarrierId, PaId>,
    pub curve_of_pa: BTreeMap<PaId, PowerCurve>,
}

impl PaMap {
    /// One dedicated PA per carrier, all sharing the same curve.
    pub fn per_carrier(carriers: &[CarrierId], curve: PowerCurve) -> Self {
        let mut pa_of_carrier = BTreeMap::new();
        let mut curve_of_pa = BTreeMap::new();
        for c in carriers {
            let pa = PaId::new(format!("pa-{c}"));
            pa_of_carrier.insert(c.clone(), pa.clone());
            curve_of_pa.insert(pa, curve);
        }
        PaMap {
            pa_of_carrier,
            curve_of_pa,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pa_of_carrier.is_empty() {
            return Err(Error::config("PA map has no carriers"));
        }
        for (carrier, pa) in &self.pa_of_carrier {
            if !self.curve_of_pa.contains_key(pa) {
                return Err(Error::config(format!(
                    "carrier {carrier} maps to PA {pa} which has no power curve"
                )));
            }
        }
        for curve in self.curve_of_pa.values() {
            curve.validate()?;
        }
        Ok(())
    }
}

/// Instantaneous power of one PA.
///
/// `any_carrier_active` decides between the sleep floor and the affine
/// branch; the affine branch at zero load returns `idle_b`, not `sleep_p`.
pub fn pa_power(total_load_on_pa: f64, any_carrier_active: bool, curve: &PowerCurve) -> Result<f64> {
    if !total_load_on_pa.is_finite() || !(0.0..=1.0).contains(&total_load_on_pa) {
        return Err(Error::domain(format!(
            "PA load {total_load_on_pa} outside [0, 1]"
        )));
    }
    if any_carrier_active {
        Ok(curve.slope_a * total_load_on_pa + curve.idle_b)
    } else {
        Ok(curve.sleep_p)
    }
}

/// Total PA power of the sector.
///
/// A PA sleeps iff all of its mapped carriers are inactive; an awake PA is
/// charged at the arithmetic mean load of its active carriers.
pub fn sector_power(
    active: &BTreeSet<CarrierId>,
    loads: &BTreeMap<CarrierId, f64>,
    map: &PaMap,
) -> Result<f64> {
    // (load sum, active carrier count) per PA
    let mut per_pa: BTreeMap<&PaId, (f64, usize)> = BTreeMap::new();
    for carrier in active {
        let pa = map.pa_of_carrier.get(carrier).ok_or_else(|| {
            Error::config(format!("active carrier {carrier} missing from PA map"))
        })?;
        let load = *loads
            .get(carrier)
            .ok_or_else(|| Error::domain(format!("no load defined for active carrier {carrier}")))?;
        if !load.is_finite() || !(0.0..=1.0).contains(&load) {
            return Err(Error::domain(format!(
                "load {load} of carrier {carrier} outside [0, 1]"
            )));
        }
        let entry = per_pa.entry(pa).or_insert((0.0, 0));
        entry.0 += load;
        entry.1 += 1;
    }

    let mut total = 0.0;
    for (pa, curve) in &map.curve_of_pa {
        total += match per_pa.get(pa) {
            Some((load_sum, n)) => pa_power(load_sum / *n as f64, true, curve)?,
            None => pa_power(0.0, false, curve)?,
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn curve() -> PowerCurve {
        PowerCurve::new(2.0, 10.0, 3.0).unwrap()
    }

    #[test]
    fn awake_power_is_affine() {
        assert_relative_eq!(pa_power(0.5, true, &curve()).unwrap(), 11.0);
    }

    #[test]
    fn asleep_power_ignores_load() {
        assert_relative_eq!(pa_power(0.0, false, &curve()).unwrap(), 3.0);
        assert_relative_eq!(pa_power(0.9, false, &curve()).unwrap(), 3.0);
    }

    #[test]
    fn awake_at_zero_load_pays_idle() {
        assert_relative_eq!(pa_power(0.0, true, &curve()).unwrap(), 10.0);
    }

    #[test]
    fn load_outside_unit_interval_rejected() {
        assert!(pa_power(-0.01, true, &curve()).is_err());
        assert!(pa_power(1.01, false, &curve()).is_err());
        assert!(pa_power(f64::NAN, true, &curve()).is_err());
    }

    #[test]
    fn sleep_must_sit_below_idle() {
        assert!(PowerCurve::new(2.0, 10.0, 10.0).is_err());
        assert!(PowerCurve::new(-1.0, 10.0, 3.0).is_err());
    }

    fn ids(names: &[&str]) -> Vec<CarrierId> {
        names.iter().map(|n| CarrierId::from(*n)).collect()
    }

    #[test]
    fn lone_coverage_carrier_keeps_only_its_pa_awake() {
        let carriers = ids(&["c0", "c1", "c2"]);
        let map = PaMap::per_carrier(&carriers, curve());
        let active: BTreeSet<_> = [carriers[0].clone()].into();
        let loads: BTreeMap<_, _> = [(carriers[0].clone(), 0.2)].into();
        let watts = sector_power(&active, &loads, &map).unwrap();
        // One awake PA at load 0.2 plus two sleepers.
        assert_relative_eq!(watts, 10.4 + 3.0 + 3.0);
    }

    #[test]
    fn shared_pa_stays_awake_while_any_carrier_is_active() {
        let carriers = ids(&["c1", "c2"]);
        let pa = PaId::from("shared");
        let map = PaMap {
            pa_of_carrier: carriers.iter().map(|c| (c.clone(), pa.clone())).collect(),
            curve_of_pa: [(pa, curve())].into(),
        };
        let active: BTreeSet<_> = [carriers[0].clone()].into();
        let loads: BTreeMap<_, _> = [(carriers[0].clone(), 0.4)].into();
        let watts = sector_power(&active, &loads, &map).unwrap();
        assert_relative_eq!(watts, 2.0 * 0.4 + 10.0);
    }

    #[test]
    fn two_awake_pas_sum() {
        let carriers = ids(&["c1", "c2"]);
        let map = PaMap::per_carrier(&carriers, curve());
        let active: BTreeSet<_> = carriers.iter().cloned().collect();
        let loads: BTreeMap<_, _> = [(carriers[0].clone(), 0.4), (carriers[1].clone(), 0.6)].into();
        let watts = sector_power(&active, &loads, &map).unwrap();
        assert_relative_eq!(watts, 10.8 + 11.2);
    }

    #[test]
    fn active_carrier_missing_from_map_is_config_error() {
        let carriers = ids(&["c1"]);
        let map = PaMap::per_carrier(&carriers, curve());
        let stranger = CarrierId::from("ghost");
        let active: BTreeSet<_> = [stranger.clone()].into();
        let loads: BTreeMap<_, _> = [(stranger, 0.1)].into();
        assert!(matches!(
            sector_power(&active, &loads, &map),
            Err(Error::Config(_))
        ));
    }

    /// Brute-force oracle: walk PAs, pull their carriers directly, and sum.
    fn sector_power_oracle(
        active: &BTreeSet<CarrierId>,
        loads: &BTreeMap<CarrierId, f64>,
        map: &PaMap,
    ) -> f64 {
        let mut total = 0.0;
        for (pa, curve) in &map.curve_of_pa {
            let members: Vec<_> = map
                .pa_of_carrier
                .iter()
                .filter(|(_, p)| *p == pa)
                .map(|(c, _)| c)
                .collect();
            let on: Vec<_> = members.iter().filter(|c| active.contains(**c)).collect();
            if on.is_empty() {
                total += curve.sleep_p;
            } else {
                let mean = on.iter().map(|c| loads[**c]).sum::<f64>() / on.len() as f64;
                total += curve.slope_a * mean + curve.idle_b;
            }
        }
        total
    }

    #[test]
    fn matches_bruteforce_on_all_small_configurations() {
        let load_grid = [0.0, 0.5, 1.0];
        for n_carriers in 1..=4usize {
            for n_pas in 1..=4usize {
                let carriers = (0..n_carriers)
                    .map(|i| CarrierId::new(format!("c{i}")))
                    .collect::<Vec<_>>();
                let pas = (0..n_pas)
                    .map(|i| PaId::new(format!("p{i}")))
                    .collect::<Vec<_>>();
                // Every assignment of carriers to PAs.
                for assign in 0..n_pas.pow(n_carriers as u32) {
                    let mut code = assign;
                    let mut pa_of_carrier = BTreeMap::new();
                    for c in &carriers {
                        pa_of_carrier.insert(c.clone(), pas[code % n_pas].clone());
                        code /= n_pas;
                    }
                    let curve_of_pa = pas
                        .iter()
                        .enumerate()
                        .map(|(i, p)| {
                            (p.clone(), PowerCurve::new(1.0 + i as f64, 10.0, 2.0).unwrap())
                        })
                        .collect();
                    let map = PaMap {
                        pa_of_carrier,
                        curve_of_pa,
                    };
                    for active_bits in 0..(1usize << n_carriers) {
                        let active: BTreeSet<_> = carriers
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| active_bits & (1 << i) != 0)
                            .map(|(_, c)| c.clone())
                            .collect();
                        for load_code in 0..load_grid.len().pow(n_carriers as u32) {
                            let mut lc = load_code;
                            let mut loads = BTreeMap::new();
                            for c in &carriers {
                                loads.insert(c.clone(), load_grid[lc % load_grid.len()]);
                                lc /= load_grid.len();
                            }
                            let got = sector_power(&active, &loads, &map).unwrap();
                            let want = sector_power_oracle(&active, &loads, &map);
                            assert_relative_eq!(got, want, max_relative = 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn discontinuity_gain_lower_bound() {
        let c = curve();
        for load in [0.01, 0.3, 1.0] {
            let awake = pa_power(load, true, &c).unwrap();
            let asleep = pa_power(load, false, &c).unwrap();
            assert!(awake - asleep >= c.idle_b - c.sleep_p);
            assert!(c.idle_b - c.sleep_p > 0.0);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            /// For a fixed activity pattern, power is non-decreasing in
            /// every carrier load.
            #[test]
            fn monotone_in_each_load(
                loads in proptest::collection::vec(0.0f64..=1.0, 3),
                bumped in 0usize..3,
                delta in 0.0f64..=0.5,
            ) {
                let carriers: Vec<_> =
                    (0..3).map(|i| CarrierId::new(format!("c{i}"))).collect();
                let map = PaMap::per_carrier(&carriers, PowerCurve::default());
                let active: BTreeSet<_> = carriers.iter().cloned().collect();
                let base: BTreeMap<_, _> = carriers
                    .iter()
                    .cloned()
                    .zip(loads.iter().copied())
                    .collect();
                let mut higher = base.clone();
                let l = higher.get_mut(&carriers[bumped]).unwrap();
                *l = (*l + delta).min(1.0);
                let p0 = sector_power(&active, &base, &map).unwrap();
                let p1 = sector_power(&active, &higher, &map).unwrap();
                prop_assert!(p1 >= p0 - 1e-12);
            }
        }
    }
}
