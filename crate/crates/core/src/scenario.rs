//! Scenario configuration: one TOML file describes the sector, the KPI
//! model, the tuner, and the campaign timing. Every section has defaults so
//! minimal files stay small; `compile` validates the whole thing into the
//! resolved objects the runner consumes.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{CarrierId, PaId};
use crate::power::{PaMap, PowerCurve};
use crate::policy::{SearchRegion, ThresholdPair};
use crate::traffic::{CarrierSpec, DiurnalModel, KpiModel, KpiResponse};
use crate::tuner::{DriftKernel, GridSpec};
use crate::windows::DayWindows;

pub const SECS_PER_DAY: u64 = 86_400;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    /// Tuning rounds; one round is one day per window.
    pub rounds: usize,
    pub sector: SectorConfig,
    pub policy: PolicyConfig,
    pub kpi: KpiConfig,
    pub tuner: TunerConfig,
    pub windows: WindowsConfig,
    pub timing: TimingConfig,
    pub traffic: TrafficConfig,
    pub feedback: FeedbackConfig,
    pub prior: PriorConfig,
    pub sa: SaConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            seed: 42,
            rounds: 20,
            sector: SectorConfig::default(),
            policy: PolicyConfig::default(),
            kpi: KpiConfig::default(),
            tuner: TunerConfig::default(),
            windows: WindowsConfig::default(),
            timing: TimingConfig::default(),
            traffic: TrafficConfig::default(),
            feedback: FeedbackConfig::default(),
            prior: PriorConfig::default(),
            sa: SaConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SectorConfig {
    pub carriers: Vec<CarrierEntry>,
    /// Leading carriers of the shutdown order that are never shut down.
    pub coverage_floor: usize,
    /// Explicit shutdown order (first = most protected). Defaults to
    /// ascending frequency, so the highest frequency sleeps first.
    pub order: Option<Vec<String>>,
    /// Explicit PA wiring; empty means one PA per carrier with the default
    /// power curve.
    pub pas: Vec<PaEntry>,
}

impl Default for SectorConfig {
    fn default() -> Self {
        SectorConfig {
            carriers: vec![
                CarrierEntry::new("c800", 800.0, 1.0),
                CarrierEntry::new("c1800", 1800.0, 1.0),
                CarrierEntry::new("c2100", 2100.0, 1.0),
                CarrierEntry::new("c2600", 2600.0, 1.0),
            ],
            coverage_floor: 1,
            order: None,
            pas: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarrierEntry {
    pub id: String,
    pub frequency_mhz: f64,
    #[serde(default = "default_weight")]
    pub capacity_weight: f64,
}

fn default_weight() -> f64 {
    1.0
}

impl CarrierEntry {
    pub fn new(id: &str, frequency_mhz: f64, capacity_weight: f64) -> Self {
        CarrierEntry {
            id: id.to_owned(),
            frequency_mhz,
            capacity_weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaEntry {
    pub id: String,
    pub carriers: Vec<String>,
    #[serde(default = "default_slope_a")]
    pub slope_a: f64,
    #[serde(default = "default_idle_b")]
    pub idle_b: f64,
    #[serde(default = "default_sleep_p")]
    pub sleep_p: f64,
}

fn default_slope_a() -> f64 {
    PowerCurve::default().slope_a
}

fn default_idle_b() -> f64 {
    PowerCurve::default().idle_b
}

fn default_sleep_p() -> f64 {
    PowerCurve::default().sleep_p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoadMeanMode {
    Weighted,
    Unweighted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyConfig {
    /// Search region endpoints as `[rho_min, rho_max]` pairs.
    pub region_lo: [f64; 2],
    pub region_hi: [f64; 2],
    pub load_mean: LoadMeanMode,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        PolicyConfig {
            region_lo: [0.0, 0.0],
            region_hi: [0.5, 0.75],
            load_mean: LoadMeanMode::Weighted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KpiConfig {
    pub targets: Vec<f64>,
    pub responses: Vec<KpiResponse>,
}

impl Default for KpiConfig {
    fn default() -> Self {
        KpiConfig {
            targets: vec![5.0],
            responses: vec![KpiResponse::default()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TunerConfig {
    /// Required long-run fraction of acceptable KPI samples.
    pub xi: f64,
    /// Scan resolution of the search parameter.
    pub x_step: f64,
    pub grid: GridSpec,
    pub drift: DriftKernel,
}

impl Default for TunerConfig {
    fn default() -> Self {
        TunerConfig {
            xi: 0.89,
            x_step: 0.01,
            grid: GridSpec::default(),
            drift: DriftKernel::none(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowsConfig {
    /// Explicit whole-hour boundaries; `None` splits from historical CQI.
    pub boundaries: Option<Vec<u32>>,
    pub n_max: usize,
    pub min_len_hours: u32,
}

impl Default for WindowsConfig {
    fn default() -> Self {
        WindowsConfig {
            boundaries: None,
            n_max: 4,
            min_len_hours: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimingConfig {
    pub tick_secs: u64,
    /// KPI collection period; must be a multiple of the tick.
    pub collection_secs: u64,
}

impl Default for TimingConfig {
    fn default() -> Self {
        TimingConfig {
            tick_secs: 60,
            collection_secs: 900,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrafficMode {
    Diurnal,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrafficConfig {
    pub mode: TrafficMode,
    pub csv_path: Option<String>,
    pub diurnal: DiurnalModel,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        TrafficConfig {
            mode: TrafficMode::Diurnal,
            csv_path: None,
            diurnal: DiurnalModel::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeedbackMode {
    /// Drive KPI batches from the sector simulation.
    Simulated,
    /// Draw batches straight from a known acceptance curve.
    Synthetic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeedbackConfig {
    pub mode: FeedbackMode,
    pub true_intercept: f64,
    pub true_slope: f64,
    pub samples_per_round: usize,
    /// Round at which the true curve steps, if any.
    pub shift_round: Option<usize>,
    pub shift_intercept_delta: f64,
    pub shift_slope_delta: f64,
}

impl Default for FeedbackConfig {
    fn default() -> Self {
        FeedbackConfig {
            mode: FeedbackMode::Simulated,
            true_intercept: 1.0,
            true_slope: 1.0,
            samples_per_round: 48,
            shift_round: None,
            shift_intercept_delta: 0.0,
            shift_slope_delta: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PriorConfig {
    /// Days of historical data replayed into the prior before tuning.
    pub history_days: usize,
    /// Search parameter deployed while history was collected.
    pub history_x: f64,
}

impl Default for PriorConfig {
    fn default() -> Self {
        PriorConfig {
            history_days: 2,
            history_x: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SaConfig {
    pub x0: f64,
    /// Step sizes follow `eps0 / k`.
    pub eps0: f64,
}

impl Default for SaConfig {
    fn default() -> Self {
        SaConfig { x0: 0.5, eps0: 0.5 }
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ScenarioConfig =
            toml::from_str(text).map_err(|e| Error::parse(format!("scenario: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_toml_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.compile().map(|_| ())
    }

    /// Validate and resolve the configuration into runnable objects.
    pub fn compile(&self) -> Result<Scenario> {
        if self.rounds == 0 {
            return Err(Error::config("rounds must be at least 1"));
        }

        // Sector.
        if self.sector.carriers.is_empty() {
            return Err(Error::config("sector has no carriers"));
        }
        let mut seen = BTreeSet::new();
        let mut freqs = BTreeSet::new();
        for c in &self.sector.carriers {
            if !seen.insert(c.id.as_str()) {
                return Err(Error::config(format!("duplicate carrier id {}", c.id)));
            }
            if !c.frequency_mhz.is_finite() || c.frequency_mhz <= 0.0 {
                return Err(Error::config(format!(
                    "carrier {} frequency {} invalid",
                    c.id, c.frequency_mhz
                )));
            }
            if !freqs.insert(c.frequency_mhz.to_bits()) {
                return Err(Error::config(format!(
                    "duplicate carrier frequency {}",
                    c.frequency_mhz
                )));
            }
            if !c.capacity_weight.is_finite() || c.capacity_weight <= 0.0 {
                return Err(Error::config(format!(
                    "carrier {} capacity weight {} invalid",
                    c.id, c.capacity_weight
                )));
            }
        }

        // Shutdown order: explicit permutation or ascending frequency.
        let carriers: Vec<CarrierSpec> = match &self.sector.order {
            Some(order) => {
                if order.len() != self.sector.carriers.len() {
                    return Err(Error::config("order must list every carrier exactly once"));
                }
                order
                    .iter()
                    .map(|id| {
                        self.sector
                            .carriers
                            .iter()
                            .find(|c| &c.id == id)
                            .map(to_spec)
                            .ok_or_else(|| Error::config(format!("order names unknown carrier {id}")))
                    })
                    .collect::<Result<_>>()?
            }
            None => {
                let mut sorted: Vec<_> = self.sector.carriers.iter().map(to_spec).collect();
                sorted.sort_by(|a, b| a.frequency_mhz.total_cmp(&b.frequency_mhz));
                sorted
            }
        };
        if self.sector.order.is_some() {
            let named: BTreeSet<_> = carriers.iter().map(|c| c.id.0.as_str()).collect();
            if named.len() != carriers.len() {
                return Err(Error::config("order repeats a carrier"));
            }
        }

        let floor = self.sector.coverage_floor;
        if floor < 1 || floor > carriers.len() {
            return Err(Error::config(format!(
                "coverage floor {floor} outside 1..={}",
                carriers.len()
            )));
        }

        // PA wiring.
        let pa_map = if self.sector.pas.is_empty() {
            let ids: Vec<CarrierId> = carriers.iter().map(|c| c.id.clone()).collect();
            PaMap::per_carrier(&ids, PowerCurve::default())
        } else {
            let mut pa_of_carrier = std::collections::BTreeMap::new();
            let mut curve_of_pa = std::collections::BTreeMap::new();
            for pa in &self.sector.pas {
                let pid = PaId::new(pa.id.clone());
                if curve_of_pa
                    .insert(pid.clone(), PowerCurve::new(pa.slope_a, pa.idle_b, pa.sleep_p)?)
                    .is_some()
                {
                    return Err(Error::config(format!("duplicate PA id {}", pa.id)));
                }
                for cid in &pa.carriers {
                    if !carriers.iter().any(|c| &c.id.0 == cid) {
                        return Err(Error::config(format!(
                            "PA {} names unknown carrier {cid}",
                            pa.id
                        )));
                    }
                    if pa_of_carrier
                        .insert(CarrierId::new(cid.clone()), pid.clone())
                        .is_some()
                    {
                        return Err(Error::config(format!(
                            "carrier {cid} is wired to more than one PA"
                        )));
                    }
                }
            }
            for c in &carriers {
                if !pa_of_carrier.contains_key(&c.id) {
                    return Err(Error::config(format!("carrier {} has no PA", c.id)));
                }
            }
            PaMap {
                pa_of_carrier,
                curve_of_pa,
            }
        };
        pa_map.validate()?;

        // Policy region.
        let region = SearchRegion::new(
            ThresholdPair::new(self.policy.region_lo[0], self.policy.region_lo[1])?,
            ThresholdPair::new(self.policy.region_hi[0], self.policy.region_hi[1])?,
        )?;

        // KPI model.
        if self.kpi.targets.len() != self.kpi.responses.len() {
            return Err(Error::config(format!(
                "{} KPI targets against {} responses",
                self.kpi.targets.len(),
                self.kpi.responses.len()
            )));
        }
        if self.kpi.targets.iter().any(|y| !y.is_finite()) {
            return Err(Error::config("KPI targets must be finite"));
        }
        let kpi_model = KpiModel {
            responses: self.kpi.responses.clone(),
        };
        kpi_model.validate()?;

        // Tuner.
        if !self.tuner.xi.is_finite() || !(0.0..=1.0).contains(&self.tuner.xi) {
            return Err(Error::config(format!(
                "confidence target {} outside [0, 1]",
                self.tuner.xi
            )));
        }
        if !self.tuner.x_step.is_finite() || !(self.tuner.x_step > 0.0 && self.tuner.x_step <= 1.0)
        {
            return Err(Error::config(format!(
                "x step {} outside (0, 1]",
                self.tuner.x_step
            )));
        }
        self.tuner.grid.validate()?;
        self.tuner.drift.validate()?;

        // Windows.
        let windows = match &self.windows.boundaries {
            Some(b) => Some(DayWindows::new(b.clone())?),
            None => None,
        };
        if self.windows.n_max < 1 {
            return Err(Error::config("windows n_max must be at least 1"));
        }
        if windows.is_none() && matches!(self.feedback.mode, FeedbackMode::Synthetic) {
            return Err(Error::config(
                "synthetic feedback needs explicit window boundaries",
            ));
        }
        if windows.is_none() && self.prior.history_days == 0 {
            return Err(Error::config(
                "automatic window splitting needs at least one history day",
            ));
        }

        // Timing.
        let t = &self.timing;
        if t.tick_secs == 0 || t.collection_secs == 0 {
            return Err(Error::config("timing periods must be positive"));
        }
        if t.collection_secs < t.tick_secs || t.collection_secs % t.tick_secs != 0 {
            return Err(Error::config(
                "collection period must be a multiple of the tick",
            ));
        }
        if t.collection_secs > SECS_PER_DAY || SECS_PER_DAY % t.tick_secs != 0 {
            return Err(Error::config(
                "a day must hold a whole number of ticks and at least one collection",
            ));
        }

        // Traffic.
        self.traffic.diurnal.validate()?;
        if matches!(self.traffic.mode, TrafficMode::Csv) && self.traffic.csv_path.is_none() {
            return Err(Error::config("traffic mode csv needs csv_path"));
        }

        // Feedback.
        let f = &self.feedback;
        if matches!(f.mode, FeedbackMode::Synthetic) {
            for (name, v) in [
                ("true_intercept", f.true_intercept),
                ("true_slope", f.true_slope),
            ] {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::config(format!("synthetic {name} = {v} invalid")));
                }
            }
            if !f.shift_intercept_delta.is_finite() || !f.shift_slope_delta.is_finite() {
                return Err(Error::config("synthetic shift deltas must be finite"));
            }
            if f.samples_per_round == 0 {
                return Err(Error::config("samples_per_round must be at least 1"));
            }
        }

        // Prior and SA.
        if !self.prior.history_x.is_finite() || !(0.0..=1.0).contains(&self.prior.history_x) {
            return Err(Error::config("history_x must lie in [0, 1]"));
        }
        if !self.sa.x0.is_finite() || !(0.0..=1.0).contains(&self.sa.x0) {
            return Err(Error::config("sa x0 must lie in [0, 1]"));
        }
        if !self.sa.eps0.is_finite() || self.sa.eps0 <= 0.0 {
            return Err(Error::config("sa eps0 must be positive"));
        }

        let total_weight = carriers.iter().map(|c| c.capacity_weight).sum();
        Ok(Scenario {
            carriers,
            coverage_floor: floor,
            pa_map,
            region,
            kpi_model,
            targets: self.kpi.targets.clone(),
            grid: self.tuner.grid,
            drift: self.tuner.drift,
            xi: self.tuner.xi,
            x_step: self.tuner.x_step,
            explicit_windows: windows,
            ticks_per_day: (SECS_PER_DAY / t.tick_secs) as usize,
            ticks_per_collection: (t.collection_secs / t.tick_secs) as usize,
            tick_secs: t.tick_secs as f64,
            total_weight,
            load_mean_mode: self.policy.load_mean,
        })
    }

    /// Reference sector: four equal carriers on their own PAs, diurnal
    /// traffic with a day/night CQI step, short history for the prior.
    pub fn reference() -> Self {
        let mut config = ScenarioConfig::default();
        config.windows.n_max = 2;
        config
    }

    /// Stationary synthetic scenario: batches drawn from the bounded linear
    /// curve with intercept 1 and slope 1, one window, uniform prior.
    pub fn synthetic_stationary() -> Self {
        let mut config = ScenarioConfig::default();
        config.rounds = 30;
        config.feedback = FeedbackConfig {
            mode: FeedbackMode::Synthetic,
            true_intercept: 1.0,
            true_slope: 1.0,
            samples_per_round: 48,
            shift_round: None,
            shift_intercept_delta: 0.0,
            shift_slope_delta: 0.0,
        };
        config.windows.boundaries = Some(vec![0]);
        config.prior.history_days = 0;
        config
    }

    /// Synthetic scenario whose true intercept steps down after a while;
    /// used to show the drift kernel's forgetting role.
    pub fn synthetic_drift(drifting: bool) -> Self {
        let mut config = Self::synthetic_stationary();
        config.rounds = 56;
        config.feedback.true_intercept = 1.2;
        config.feedback.shift_round = Some(40);
        config.feedback.shift_intercept_delta = -0.3;
        if drifting {
            config.tuner.drift = DriftKernel {
                intercept_std: 0.08,
                slope_std: 0.08,
            };
        }
        config
    }
}

fn to_spec(entry: &CarrierEntry) -> CarrierSpec {
    CarrierSpec {
        id: CarrierId::new(entry.id.clone()),
        frequency_mhz: entry.frequency_mhz,
        capacity_weight: entry.capacity_weight,
    }
}

/// Validated, resolved scenario ready for the runner.
#[derive(Debug, Clone)]
pub struct Scenario {
    /// Carriers in shutdown order: index 0 is the most protected.
    pub carriers: Vec<CarrierSpec>,
    pub coverage_floor: usize,
    pub pa_map: PaMap,
    pub region: SearchRegion,
    pub kpi_model: KpiModel,
    pub targets: Vec<f64>,
    pub grid: GridSpec,
    pub drift: DriftKernel,
    pub xi: f64,
    pub x_step: f64,
    pub explicit_windows: Option<DayWindows>,
    pub ticks_per_day: usize,
    pub ticks_per_collection: usize,
    pub tick_secs: f64,
    pub total_weight: f64,
    pub load_mean_mode: LoadMeanMode,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_compile() {
        ScenarioConfig::reference().compile().unwrap();
        ScenarioConfig::synthetic_stationary().compile().unwrap();
        ScenarioConfig::synthetic_drift(true).compile().unwrap();
        ScenarioConfig::synthetic_drift(false).compile().unwrap();
    }

    #[test]
    fn toml_roundtrip() {
        let config = ScenarioConfig::reference();
        let text = config.to_toml_string();
        let back = ScenarioConfig::from_toml_str(&text).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn default_order_is_ascending_frequency() {
        let scenario = ScenarioConfig::reference().compile().unwrap();
        let freqs: Vec<f64> = scenario.carriers.iter().map(|c| c.frequency_mhz).collect();
        assert!(freqs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn explicit_order_is_honored() {
        let mut config = ScenarioConfig::reference();
        config.sector.order = Some(vec![
            "c1800".into(),
            "c800".into(),
            "c2600".into(),
            "c2100".into(),
        ]);
        let scenario = config.compile().unwrap();
        assert_eq!(scenario.carriers[0].id.0, "c1800");
        assert_eq!(scenario.carriers[3].id.0, "c2100");

        config.sector.order = Some(vec!["c800".into()]);
        assert!(config.compile().is_err());
        config.sector.order = Some(vec!["x".into(); 4]);
        assert!(config.compile().is_err());
    }

    #[test]
    fn shared_pa_wiring() {
        let mut config = ScenarioConfig::reference();
        config.sector.pas = vec![
            PaEntry {
                id: "low".into(),
                carriers: vec!["c800".into(), "c1800".into()],
                slope_a: 2.0,
                idle_b: 10.0,
                sleep_p: 3.0,
            },
            PaEntry {
                id: "high".into(),
                carriers: vec!["c2100".into(), "c2600".into()],
                slope_a: 2.0,
                idle_b: 10.0,
                sleep_p: 3.0,
            },
        ];
        let scenario = config.compile().unwrap();
        assert_eq!(scenario.pa_map.curve_of_pa.len(), 2);

        // Leaving a carrier unwired is an error.
        config.sector.pas[1].carriers.pop();
        assert!(config.compile().is_err());
    }

    #[test]
    fn validation_catches_bad_configs() {
        let mut c = ScenarioConfig::reference();
        c.rounds = 0;
        assert!(c.compile().is_err());

        let mut c = ScenarioConfig::reference();
        c.sector.coverage_floor = 5;
        assert!(c.compile().is_err());

        let mut c = ScenarioConfig::reference();
        c.policy.region_hi = [0.6, 0.4];
        assert!(c.compile().is_err());

        let mut c = ScenarioConfig::reference();
        c.timing.collection_secs = 90; // not a tick multiple
        assert!(c.compile().is_err());

        let mut c = ScenarioConfig::reference();
        c.tuner.xi = 1.5;
        assert!(c.compile().is_err());

        let mut c = ScenarioConfig::reference();
        c.kpi.targets = vec![5.0, 1.0];
        assert!(c.compile().is_err());

        let mut c = ScenarioConfig::reference();
        c.prior.history_days = 0; // auto windows need history
        assert!(c.compile().is_err());

        let mut c = ScenarioConfig::synthetic_stationary();
        c.windows.boundaries = None;
        assert!(c.compile().is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = "seed = 1\nbogus = true\n";
        assert!(ScenarioConfig::from_toml_str(text).is_err());
        let text = "[sector]\ncarriers = [ { id = \"a\", frequency_mhz = 1.0, typo = 2 } ]\n";
        assert!(ScenarioConfig::from_toml_str(text).is_err());
    }

    #[test]
    fn minimal_toml_uses_defaults() {
        let config = ScenarioConfig::from_toml_str("seed = 7\n").unwrap();
        assert_eq!(config.seed, 7);
        assert_eq!(config.rounds, ScenarioConfig::default().rounds);
    }
}
