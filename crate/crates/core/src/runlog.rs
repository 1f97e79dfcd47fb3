//! Campaign records and evaluation metrics.
//!
//! A `RunLog` is the append-only record of one campaign: per-tick activity
//! and power, per-collection KPI samples, and per-round tuner decisions.
//! `evaluate_run` reduces a log to the headline metrics: time-average
//! watts, the carrier-and-time-weighted acceptance fraction, and the sleep
//! time of shutdown-eligible carriers.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::CarrierId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunLog {
    /// Campaign kind: `tune`, `baseline`, or `sa`.
    pub label: String,
    pub seed: u64,
    pub rounds: usize,
    pub tick_secs: f64,
    /// Carriers in shutdown order.
    pub carriers: Vec<CarrierId>,
    pub coverage_floor: usize,
    pub window_boundaries: Vec<u32>,
    pub ticks: Vec<TickRecord>,
    pub kpi_events: Vec<KpiEvent>,
    pub round_records: Vec<RoundRecord>,
    pub warnings: Vec<String>,
}

/// Sector snapshot at one simulation tick.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TickRecord {
    pub tick: usize,
    pub round: usize,
    pub window: usize,
    pub active_count: usize,
    pub mean_load: f64,
    /// Loads aligned with the shutdown order; inactive carriers read 0.
    pub loads: Vec<f64>,
    pub watts: f64,
    pub overflow_units: f64,
}

/// One KPI collection for one carrier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpiEvent {
    pub tick: usize,
    pub round: usize,
    pub window: usize,
    pub carrier: CarrierId,
    pub values: Vec<f64>,
    pub accepted: bool,
}

/// Tuner decision and batch summary for one (round, window).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub window: usize,
    pub x: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub trials: usize,
    pub successes: usize,
    pub degenerate: bool,
    pub belief_mean_intercept: Option<f64>,
    pub belief_mean_slope: Option<f64>,
    pub belief_entropy: Option<f64>,
    /// Acceptance probability of the generating curve, when the campaign
    /// ran against a synthetic curve.
    pub true_prob: Option<f64>,
}

impl RunLog {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("run log serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(format!("run log: {e}")))
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

/// Per-window slice of the headline metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowMetrics {
    pub window: usize,
    pub kpi_samples: usize,
    pub acceptance: f64,
    pub avg_watts: Option<f64>,
    pub sleep_time_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    /// Time-average PA watts over the campaign; absent for synthetic runs
    /// that never simulate the sector.
    pub avg_watts: Option<f64>,
    /// Total PA energy in joules.
    pub energy_joules: Option<f64>,
    /// Flat average of the concatenated per-carrier acceptance stream.
    pub acceptance: f64,
    pub kpi_samples: usize,
    /// Percentage of time shutdown-eligible carriers spent asleep.
    pub sleep_time_pct: Option<f64>,
    /// 10th percentile of each KPI's sampled values.
    pub kpi_p10: Vec<f64>,
    pub per_window: Vec<WindowMetrics>,
}

/// Reduce a run log to its evaluation metrics.
pub fn evaluate_run(log: &RunLog) -> Result<RunMetrics> {
    if log.ticks.is_empty() && log.kpi_events.is_empty() && log.round_records.is_empty() {
        return Err(Error::domain("run log is empty"));
    }

    // Acceptance: every (collection instant, carrier) sample counts once.
    let mut accepted = 0usize;
    let mut samples = 0usize;
    let mut per_window: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for event in &log.kpi_events {
        samples += 1;
        let w = per_window.entry(event.window).or_insert((0, 0));
        w.1 += 1;
        if event.accepted {
            accepted += 1;
            w.0 += 1;
        }
    }
    // Synthetic campaigns carry their samples only in the round records.
    if log.kpi_events.is_empty() {
        for r in &log.round_records {
            samples += r.trials;
            accepted += r.successes;
            let w = per_window.entry(r.window).or_insert((0, 0));
            w.0 += r.successes;
            w.1 += r.trials;
        }
    }
    let acceptance = if samples > 0 {
        accepted as f64 / samples as f64
    } else {
        0.0
    };

    // Power and sleep statistics from the tick stream.
    let eligible = log.carriers.len().saturating_sub(log.coverage_floor);
    let mut watts_sum = 0.0;
    let mut sleep_ticks = 0usize;
    let mut window_power: BTreeMap<usize, (f64, usize, usize)> = BTreeMap::new();
    for t in &log.ticks {
        watts_sum += t.watts;
        let asleep = log.carriers.len().saturating_sub(t.active_count.max(log.coverage_floor));
        sleep_ticks += asleep;
        let w = window_power.entry(t.window).or_insert((0.0, 0, 0));
        w.0 += t.watts;
        w.1 += 1;
        w.2 += asleep;
    }
    let (avg_watts, energy_joules, sleep_time_pct) = if log.ticks.is_empty() {
        (None, None, None)
    } else {
        let n = log.ticks.len() as f64;
        let sleep = if eligible > 0 {
            100.0 * sleep_ticks as f64 / (eligible as f64 * n)
        } else {
            0.0
        };
        (
            Some(watts_sum / n),
            Some(watts_sum * log.tick_secs),
            Some(sleep),
        )
    };

    // Low percentile of each KPI stream, for report tables.
    let kpi_dims = log.kpi_events.first().map_or(0, |e| e.values.len());
    let mut kpi_p10 = Vec::new();
    for dim in 0..kpi_dims {
        let mut values: Vec<f64> = log
            .kpi_events
            .iter()
            .filter_map(|e| e.values.get(dim))
            .copied()
            .filter(|v| v.is_finite())
            .collect();
        if values.is_empty() {
            continue;
        }
        values.sort_by(f64::total_cmp);
        let idx = ((values.len() as f64) * 0.10) as usize;
        kpi_p10.push(values[idx.min(values.len() - 1)]);
    }

    let windows: Vec<WindowMetrics> = per_window
        .iter()
        .map(|(&window, &(ok, n))| {
            let power = window_power.get(&window);
            WindowMetrics {
                window,
                kpi_samples: n,
                acceptance: if n > 0 { ok as f64 / n as f64 } else { 0.0 },
                avg_watts: power.map(|(w, ticks, _)| w / *ticks as f64),
                sleep_time_pct: power.map(|(_, ticks, asleep)| {
                    if eligible > 0 {
                        100.0 * *asleep as f64 / (eligible as f64 * *ticks as f64)
                    } else {
                        0.0
                    }
                }),
            }
        })
        .collect();

    Ok(RunMetrics {
        avg_watts,
        energy_joules,
        acceptance,
        kpi_samples: samples,
        sleep_time_pct,
        kpi_p10,
        per_window: windows,
    })
}

/// Write the plot-ready per-window report: one row per window plus a total
/// row, with acceptance, sleep time, power, and the low KPI percentile.
pub fn write_report_csv(log: &RunLog, metrics: &RunMetrics, writer: impl io::Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "label",
        "window",
        "kpi_samples",
        "acceptance",
        "sleep_time_pct",
        "avg_watts",
        "kpi_p10",
    ])
    .map_err(|e| Error::parse(format!("report write: {e}")))?;
    let fmt_opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
    for wm in &metrics.per_window {
        w.write_record(&[
            log.label.clone(),
            wm.window.to_string(),
            wm.kpi_samples.to_string(),
            wm.acceptance.to_string(),
            fmt_opt(wm.sleep_time_pct),
            fmt_opt(wm.avg_watts),
            String::new(),
        ])
        .map_err(|e| Error::parse(format!("report write: {e}")))?;
    }
    w.write_record(&[
        log.label.clone(),
        "total".to_string(),
        metrics.kpi_samples.to_string(),
        metrics.acceptance.to_string(),
        fmt_opt(metrics.sleep_time_pct),
        fmt_opt(metrics.avg_watts),
        metrics
            .kpi_p10
            .first()
            .map_or(String::new(), |v| v.to_string()),
    ])
    .map_err(|e| Error::parse(format!("report write: {e}")))?;
    w.flush()?;
    Ok(())
}
