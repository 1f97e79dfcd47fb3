//! Synthetic sector traffic: offered demand and channel quality traces,
//! load redistribution over the active carriers, and a KPI sampler whose
//! acceptance odds fall with load and rise with CQI.

use std::io;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::CarrierId;

/// One frequency carrier of the sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarrierSpec {
    pub id: CarrierId,
    pub frequency_mhz: f64,
    /// Relative PRB capacity, > 0.
    pub capacity_weight: f64,
}

/// Offered demand and mean CQI per tick.
///
/// Demand is normalized to full-sector capacity: 1.0 means every carrier
/// fully loaded. CQI lives on the usual 0-15 scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficTrace {
    pub tick_secs: f64,
    pub demand: Vec<f64>,
    pub cqi: Vec<f64>,
}

impl TrafficTrace {
    pub fn validate(&self) -> Result<()> {
        if !(self.tick_secs.is_finite() && self.tick_secs > 0.0) {
            return Err(Error::config("tick duration must be positive"));
        }
        if self.demand.len() != self.cqi.len() {
            return Err(Error::config("demand and cqi series differ in length"));
        }
        for (t, &d) in self.demand.iter().enumerate() {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::config(format!("demand[{t}] = {d} invalid")));
            }
        }
        for (t, &q) in self.cqi.iter().enumerate() {
            if !q.is_finite() || !(0.0..=15.0).contains(&q) {
                return Err(Error::config(format!("cqi[{t}] = {q} outside [0, 15]")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.demand.len()
    }

    pub fn is_empty(&self) -> bool {
        self.demand.is_empty()
    }

    /// Parse the `tick,demand,cqi` CSV schema. Ticks must count up from 0
    /// without gaps.
    pub fn from_csv_reader(reader: impl io::Read, tick_secs: f64) -> Result<Self> {
        let mut csv_reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        {
            let headers = csv_reader
                .headers()
                .map_err(|e| Error::parse(format!("trace header: {e}")))?;
            let expected = ["tick", "demand", "cqi"];
            let got: Vec<_> = headers.iter().collect();
            if got != expected {
                return Err(Error::parse(format!(
                    "trace header {got:?}, expected {expected:?}"
                )));
            }
        }
        let mut demand = Vec::new();
        let mut cqi = Vec::new();
        for (row, record) in csv_reader.records().enumerate() {
            let record = record.map_err(|e| Error::parse(format!("trace row {row}: {e}")))?;
            if record.len() != 3 {
                return Err(Error::parse(format!(
                    "trace row {row}: expected 3 fields, got {}",
                    record.len()
                )));
            }
            let tick: usize = record[0]
                .parse()
                .map_err(|e| Error::parse(format!("trace row {row} tick: {e}")))?;
            if tick != row {
                return Err(Error::parse(format!(
                    "trace row {row}: tick {tick} out of sequence"
                )));
            }
            let d: f64 = record[1]
                .parse()
                .map_err(|e| Error::parse(format!("trace row {row} demand: {e}")))?;
            let q: f64 = record[2]
                .parse()
                .map_err(|e| Error::parse(format!("trace row {row} cqi: {e}")))?;
            demand.push(d);
            cqi.push(q);
        }
        let trace = TrafficTrace {
            tick_secs,
            demand,
            cqi,
        };
        trace.validate()?;
        Ok(trace)
    }

    pub fn from_csv_path(path: impl AsRef<std::path::Path>, tick_secs: f64) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(io::BufReader::new(file), tick_secs)
    }

    pub fn to_csv_writer(&self, writer: impl io::Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["tick", "demand", "cqi"])
            .map_err(|e| Error::parse(format!("trace write: {e}")))?;
        for (t, (d, q)) in self.demand.iter().zip(&self.cqi).enumerate() {
            w.write_record(&[t.to_string(), d.to_string(), q.to_string()])
                .map_err(|e| Error::parse(format!("trace write: {e}")))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Two-regime diurnal generator: a daytime plateau with a sinusoidal hump
/// and a quiet night, with Gaussian noise on both demand and CQI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiurnalModel {
    pub day_start_hour: u32,
    pub day_end_hour: u32,
    pub day_demand: f64,
    pub night_demand: f64,
    /// Peak of the mid-day hump added on top of `day_demand`.
    pub demand_swing: f64,
    pub demand_noise: f64,
    pub day_cqi: f64,
    pub night_cqi: f64,
    pub cqi_noise: f64,
}

impl Default for DiurnalModel {
    fn default() -> Self {
        DiurnalModel {
            day_start_hour: 8,
            day_end_hour: 20,
            day_demand: 0.26,
            night_demand: 0.08,
            demand_swing: 0.05,
            demand_noise: 0.015,
            day_cqi: 9.0,
            night_cqi: 12.0,
            cqi_noise: 0.4,
        }
    }
}

impl DiurnalModel {
    pub fn validate(&self) -> Result<()> {
        if self.day_start_hour >= 24 || self.day_end_hour > 24 || self.day_start_hour >= self.day_end_hour {
            return Err(Error::config("diurnal day span must satisfy start < end <= 24"));
        }
        for (name, v) in [
            ("day_demand", self.day_demand),
            ("night_demand", self.night_demand),
            ("demand_swing", self.demand_swing),
            ("demand_noise", self.demand_noise),
            ("cqi_noise", self.cqi_noise),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::config(format!("diurnal {name} = {v} invalid")));
            }
        }
        for (name, v) in [("day_cqi", self.day_cqi), ("night_cqi", self.night_cqi)] {
            if !v.is_finite() || !(0.0..=15.0).contains(&v) {
                return Err(Error::config(format!("diurnal {name} = {v} outside [0, 15]")));
            }
        }
        Ok(())
    }

    pub fn generate(&self, days: usize, tick_secs: f64, rng: &mut ChaCha8Rng) -> TrafficTrace {
        let ticks_per_day = (86_400.0 / tick_secs) as usize;
        let noise = Normal::new(0.0, 1.0).expect("unit normal");
        let mut demand = Vec::with_capacity(days * ticks_per_day);
        let mut cqi = Vec::with_capacity(days * ticks_per_day);
        for t in 0..days * ticks_per_day {
            let hour = (t % ticks_per_day) as f64 * tick_secs / 3600.0;
            let daytime = hour >= self.day_start_hour as f64 && hour < self.day_end_hour as f64;
            let (d_base, q_base) = if daytime {
                let span = (self.day_end_hour - self.day_start_hour) as f64;
                let phase = (hour - self.day_start_hour as f64) / span;
                let hump = self.demand_swing * (std::f64::consts::PI * phase).sin();
                (self.day_demand + hump, self.day_cqi)
            } else {
                (self.night_demand, self.night_cqi)
            };
            let d = d_base + self.demand_noise * noise.sample(rng);
            let q = q_base + self.cqi_noise * noise.sample(rng);
            demand.push(d.max(0.0));
            cqi.push(q.clamp(0.0, 15.0));
        }
        TrafficTrace {
            tick_secs,
            demand,
            cqi,
        }
    }
}

/// Per-carrier load fractions after spreading demand over the active set.
#[derive(Debug, Clone, PartialEq)]
pub struct Redistribution {
    /// Aligned with the active slice passed to [`redistribute`].
    pub loads: Vec<f64>,
    /// Demand (in capacity units) lost to clipping at full load.
    pub overflow_units: f64,
}

/// Spread `demand_units` (in capacity units: 1 unit = one fully loaded unit
/// of capacity weight) proportionally over the active carriers.
///
/// Proportional split means every active carrier ends at the same load
/// fraction; loads clip at 1.0 and the clipped remainder is reported as
/// congestion overflow.
pub fn redistribute(demand_units: f64, active: &[CarrierSpec]) -> Result<Redistribution> {
    if active.is_empty() {
        return Err(Error::domain("cannot redistribute onto an empty active set"));
    }
    if !demand_units.is_finite() || demand_units < 0.0 {
        return Err(Error::domain(format!("demand {demand_units} invalid")));
    }
    let active_capacity: f64 = active.iter().map(|c| c.capacity_weight).sum();
    let raw = demand_units / active_capacity;
    let load = raw.min(1.0);
    let overflow_units = if raw > 1.0 {
        (raw - 1.0) * active_capacity
    } else {
        0.0
    };
    Ok(Redistribution {
        loads: vec![load; active.len()],
        overflow_units,
    })
}

/// Capacity-weighted mean load over the active carriers.
pub fn mean_load(loads: &[f64], active: &[CarrierSpec]) -> f64 {
    assert_eq!(loads.len(), active.len(), "loads must cover the active set");
    let weight: f64 = active.iter().map(|c| c.capacity_weight).sum();
    let weighted: f64 = loads
        .iter()
        .zip(active)
        .map(|(l, c)| l * c.capacity_weight)
        .sum();
    weighted / weight
}

/// Plain arithmetic mean, for deployments that do not weight by capacity.
pub fn mean_load_unweighted(loads: &[f64]) -> f64 {
    assert!(!loads.is_empty(), "loads must cover the active set");
    loads.iter().sum::<f64>() / loads.len() as f64
}

/// Response of one KPI to load and channel quality.
///
/// The sampled KPI value is logistic-distributed with location
/// `base - load_sens * load + cqi_sens * cqi` and scale `noise`, so the
/// probability of exceeding a target `y` is the logistic function
/// `sigma((location - y) / noise)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpiResponse {
    pub base: f64,
    pub load_sens: f64,
    pub cqi_sens: f64,
    pub noise: f64,
}

impl Default for KpiResponse {
    fn default() -> Self {
        // Calibrated against a target of 5.0 at CQI 9: acceptance ~0.95 at
        // load 0.30 and ~0.50 at load 0.85.
        KpiResponse {
            base: 6.4,
            load_sens: 5.3536,
            cqi_sens: 0.35,
            noise: 1.0,
        }
    }
}

impl KpiResponse {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("base", self.base),
            ("load_sens", self.load_sens),
            ("cqi_sens", self.cqi_sens),
            ("noise", self.noise),
        ] {
            if !v.is_finite() {
                return Err(Error::config(format!("KPI response {name} must be finite")));
            }
        }
        if self.load_sens < 0.0 || self.cqi_sens < 0.0 {
            return Err(Error::config(
                "KPI sensitivities must be non-negative so acceptance falls with load",
            ));
        }
        if self.noise <= 0.0 {
            return Err(Error::config("KPI noise scale must be positive"));
        }
        Ok(())
    }

    pub fn location(&self, load: f64, cqi: f64) -> f64 {
        self.base - self.load_sens * load + self.cqi_sens * cqi
    }

    /// Probability that a sampled value meets `target`.
    pub fn acceptance_probability(&self, load: f64, cqi: f64, target: f64) -> f64 {
        sigmoid((self.location(load, cqi) - target) / self.noise)
    }
}

/// Response curves of every monitored KPI.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KpiModel {
    pub responses: Vec<KpiResponse>,
}

impl KpiModel {
    pub fn validate(&self) -> Result<()> {
        if self.responses.is_empty() {
            return Err(Error::config("KPI model has no responses"));
        }
        for r in &self.responses {
            r.validate()?;
        }
        Ok(())
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Uniform draw strictly inside (0, 1).
fn open_unit(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Draw one value per KPI for a carrier at the given load and CQI.
pub fn sample_kpi(load: f64, cqi: f64, model: &KpiModel, rng: &mut impl Rng) -> Result<Vec<f64>> {
    if !load.is_finite() || !(0.0..=1.0).contains(&load) {
        return Err(Error::domain(format!("load {load} outside [0, 1]")));
    }
    Ok(model
        .responses
        .iter()
        .map(|r| {
            let u = open_unit(rng);
            // Logistic sample around the response location.
            r.location(load, cqi) + r.noise * (u / (1.0 - u)).ln()
        })
        .collect())
}

/// Boolean KPI acceptability: 1 iff every KPI meets its target (inclusive).
pub fn kpi_accept(kpis: &[f64], targets: &[f64]) -> Result<bool> {
    if kpis.len() != targets.len() {
        return Err(Error::domain(format!(
            "{} KPI values against {} targets",
            kpis.len(),
            targets.len()
        )));
    }
    Ok(kpis.iter().zip(targets).all(|(k, y)| k >= y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn carriers(weights: &[f64]) -> Vec<CarrierSpec> {
        weights
            .iter()
            .enumerate()
            .map(|(i, &w)| CarrierSpec {
                id: CarrierId::new(format!("c{i}")),
                frequency_mhz: 800.0 + 100.0 * i as f64,
                capacity_weight: w,
            })
            .collect()
    }

    #[test]
    fn redistribute_clips_and_reports_overflow() {
        // Half the 4-carrier sector's demand squeezed onto one carrier.
        let all = carriers(&[1.0, 1.0, 1.0, 1.0]);
        let r = redistribute(0.5 * 4.0, &all[..1]).unwrap();
        assert_relative_eq!(r.loads[0], 1.0);
        assert_relative_eq!(r.overflow_units, 1.0);
    }

    #[test]
    fn redistribute_splits_proportionally() {
        let all = carriers(&[1.0, 1.0, 1.0, 1.0]);
        let r = redistribute(0.25 * 4.0, &all).unwrap();
        for l in &r.loads {
            assert_relative_eq!(*l, 0.25);
        }
        assert_relative_eq!(r.overflow_units, 0.0);
    }

    #[test]
    fn zero_demand_zero_loads() {
        let all = carriers(&[1.0, 2.0]);
        let r = redistribute(0.0, &all).unwrap();
        assert!(r.loads.iter().all(|&l| l == 0.0));
    }

    #[test]
    fn empty_active_set_rejected() {
        assert!(redistribute(1.0, &[]).is_err());
    }

    #[test]
    fn mean_load_examples() {
        let equal = carriers(&[1.0, 1.0]);
        assert_relative_eq!(mean_load(&[0.2, 0.4], &equal), 0.3);
        let skewed = carriers(&[2.0, 1.0]);
        assert_relative_eq!(mean_load(&[0.3, 0.9], &skewed), 0.5);
        let single = carriers(&[3.0]);
        assert_relative_eq!(mean_load(&[0.7], &single), 0.7);
        assert_relative_eq!(mean_load_unweighted(&[0.3, 0.9]), 0.6);
    }

    #[test]
    fn kpi_accept_is_inclusive_conjunction() {
        assert!(kpi_accept(&[6.1], &[5.0]).unwrap());
        assert!(!kpi_accept(&[6.1, 0.2], &[5.0, 0.5]).unwrap());
        assert!(kpi_accept(&[], &[]).unwrap());
        assert!(kpi_accept(&[5.0], &[5.0]).unwrap());
        assert!(kpi_accept(&[1.0], &[5.0, 5.0]).is_err());
    }

    #[test]
    fn default_response_calibration() {
        let r = KpiResponse::default();
        assert_relative_eq!(r.acceptance_probability(0.30, 9.0, 5.0), 0.95, epsilon = 5e-3);
        assert_relative_eq!(r.acceptance_probability(0.85, 9.0, 5.0), 0.50, epsilon = 5e-3);
    }

    fn seeded(n: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(n)
    }

    #[test]
    fn sampling_is_deterministic_under_a_seed() {
        let model = KpiModel {
            responses: vec![KpiResponse::default()],
        };
        let a = sample_kpi(0.4, 9.0, &model, &mut seeded(7)).unwrap();
        let b = sample_kpi(0.4, 9.0, &model, &mut seeded(7)).unwrap();
        assert_eq!(a, b);
    }

    fn acceptance_rate(load: f64, cqi: f64, draws: usize, seed: u64) -> f64 {
        let model = KpiModel {
            responses: vec![KpiResponse::default()],
        };
        let mut rng = seeded(seed);
        let mut hits = 0usize;
        for _ in 0..draws {
            let v = sample_kpi(load, cqi, &model, &mut rng).unwrap();
            if kpi_accept(&v, &[5.0]).unwrap() {
                hits += 1;
            }
        }
        hits as f64 / draws as f64
    }

    #[test]
    fn acceptance_falls_with_load() {
        let lo = acceptance_rate(0.0, 9.0, 10_000, 1);
        let hi = acceptance_rate(1.0, 9.0, 10_000, 2);
        assert!(lo > hi, "acceptance at load 0 ({lo}) vs load 1 ({hi})");
    }

    #[test]
    fn acceptance_rises_with_cqi() {
        let poor = acceptance_rate(0.5, 1.0, 10_000, 3);
        let good = acceptance_rate(0.5, 15.0, 10_000, 4);
        assert!(good > poor, "acceptance at CQI 15 ({good}) vs CQI 1 ({poor})");
    }

    #[test]
    fn empirical_rate_tracks_analytic_probability() {
        let r = KpiResponse::default();
        let p = r.acceptance_probability(0.5, 9.0, 5.0);
        let rate = acceptance_rate(0.5, 9.0, 10_000, 5);
        // 3-sigma band around the analytic probability.
        let band = 3.0 * (p * (1.0 - p) / 10_000.0).sqrt();
        assert!((rate - p).abs() < band, "rate {rate} vs p {p} +- {band}");
    }

    #[test]
    fn csv_roundtrip_and_schema_errors() {
        let trace = TrafficTrace {
            tick_secs: 60.0,
            demand: vec![0.1, 0.25, 0.0],
            cqi: vec![9.0, 12.5, 15.0],
        };
        let mut buf = Vec::new();
        trace.to_csv_writer(&mut buf).unwrap();
        let parsed = TrafficTrace::from_csv_reader(buf.as_slice(), 60.0).unwrap();
        assert_eq!(parsed, trace);

        let bad_header = "t,demand,cqi\n0,0.1,9\n";
        assert!(TrafficTrace::from_csv_reader(bad_header.as_bytes(), 60.0).is_err());
        let bad_seq = "tick,demand,cqi\n1,0.1,9\n";
        assert!(TrafficTrace::from_csv_reader(bad_seq.as_bytes(), 60.0).is_err());
        let bad_cqi = "tick,demand,cqi\n0,0.1,19\n";
        assert!(TrafficTrace::from_csv_reader(bad_cqi.as_bytes(), 60.0).is_err());
        let bad_demand = "tick,demand,cqi\n0,-0.1,9\n";
        assert!(TrafficTrace::from_csv_reader(bad_demand.as_bytes(), 60.0).is_err());
    }

    #[test]
    fn diurnal_trace_has_two_cqi_regimes() {
        let model = DiurnalModel::default();
        let mut rng = seeded(11);
        let trace = model.generate(1, 60.0, &mut rng);
        assert_eq!(trace.len(), 1440);
        trace.validate().unwrap();
        let hour = |h: usize| trace.cqi[h * 60 + 30];
        assert!(hour(3) > hour(12), "night CQI should exceed day CQI");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            /// Below congestion, load times capacity sums back to demand.
            #[test]
            fn conservation_below_congestion(
                weights in proptest::collection::vec(0.2f64..3.0, 1..5),
                demand_frac in 0.0f64..=0.99,
            ) {
                let active = carriers(&weights);
                let cap: f64 = weights.iter().sum();
                let units = demand_frac * cap;
                let r = redistribute(units, &active).unwrap();
                let back: f64 = r
                    .loads
                    .iter()
                    .zip(&active)
                    .map(|(l, c)| l * c.capacity_weight)
                    .sum();
                prop_assert!((back - units).abs() < 1e-9);
                prop_assert!(r.overflow_units == 0.0);
            }

            /// Dropping a carrier never lowers the mean load.
            #[test]
            fn shutdown_raises_mean_load(
                weights in proptest::collection::vec(0.2f64..3.0, 2..5),
                units in 0.0f64..4.0,
            ) {
                let active = carriers(&weights);
                let full = redistribute(units, &active).unwrap();
                let fewer = redistribute(units, &active[..active.len() - 1]).unwrap();
                let m_full = mean_load(&full.loads, &active);
                let m_fewer = mean_load(&fewer.loads, &active[..active.len() - 1]);
                prop_assert!(m_fewer >= m_full - 1e-12);
            }

            /// Raising any KPI value never flips acceptance from 1 to 0.
            #[test]
            fn accept_is_monotone(
                kpis in proptest::collection::vec(-5.0f64..10.0, 1..4),
                bump in 0.0f64..5.0,
                which in 0usize..4,
            ) {
                let targets = vec![2.5; kpis.len()];
                let before = kpi_accept(&kpis, &targets).unwrap();
                let mut raised = kpis.clone();
                let i = which % raised.len();
                raised[i] += bump;
                let after = kpi_accept(&raised, &targets).unwrap();
                prop_assert!(!(before && !after));
            }
        }
    }
}
