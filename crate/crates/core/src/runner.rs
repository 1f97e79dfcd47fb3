//! Campaign orchestration.
//!
//! One campaign runs the closed loop per window: pick the search parameter,
//! deploy the mapped threshold pair, simulate the sector tick by tick while
//! collecting KPI batches at the configured cadence, then update the belief
//! at the end of each day. Baseline (all carriers active) and
//! stochastic-approximation campaigns reuse the same engine so traces pair
//! exactly under a shared seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policy::{policy_step, thresholds_from_x, PolicyState, ThresholdPair};
use crate::power::sector_power;
use crate::runlog::{evaluate_run, KpiEvent, RoundRecord, RunLog, RunMetrics, TickRecord};
use crate::scenario::{FeedbackMode, LoadMeanMode, Scenario, ScenarioConfig, TrafficMode};
use crate::traffic::{
    kpi_accept, mean_load, mean_load_unweighted, redistribute, sample_kpi, TrafficTrace,
};
use crate::tuner::{
    curve_prob, init_prior, posterior_update, sa_step, select_x, CurveParams, KpiBatch,
    ParamBelief,
};
use crate::windows::{hourly_cqi, split_day, DayWindows};

// ChaCha stream tags keep every random surface independent of the others
// and of iteration order, so paired campaigns share traces and KPI noise.
const STREAM_TRACE: u64 = 1 << 56;
const STREAM_KPI: u64 = 2 << 56;
const STREAM_SYNTH: u64 = 3 << 56;
const STREAM_SYNTH_HISTORY: u64 = 4 << 56;

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Everything a finished campaign hands back.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub log: RunLog,
    pub metrics: RunMetrics,
    pub windows: DayWindows,
    /// Final per-window beliefs; empty for baseline and SA campaigns.
    pub beliefs: Vec<ParamBelief>,
}

enum Tuning {
    Bayes { beliefs: Vec<ParamBelief> },
    Sa { xs: Vec<f64> },
    Baseline,
}

impl Tuning {
    fn label(&self) -> &'static str {
        match self {
            Tuning::Bayes { .. } => "tune",
            Tuning::Sa { .. } => "sa",
            Tuning::Baseline => "baseline",
        }
    }
}

enum Deployed<'a> {
    FromX(&'a [f64]),
    Baseline,
}

/// Tick-level sector simulation driving one campaign.
struct SectorSim<'a> {
    scenario: &'a Scenario,
    seed: u64,
    trace: &'a TrafficTrace,
    windows: &'a DayWindows,
    state: PolicyState,
}

impl<'a> SectorSim<'a> {
    fn new(
        scenario: &'a Scenario,
        seed: u64,
        trace: &'a TrafficTrace,
        windows: &'a DayWindows,
    ) -> Result<Self> {
        let order: Vec<_> = scenario.carriers.iter().map(|c| c.id.clone()).collect();
        let state = PolicyState::all_active(order, scenario.coverage_floor)?;
        Ok(SectorSim {
            scenario,
            seed,
            trace,
            windows,
            state,
        })
    }

    /// Simulate one day and return the per-window acceptance bits gathered
    /// at the KPI collection cadence.
    fn simulate_day(
        &mut self,
        day: usize,
        round: usize,
        deployed: &Deployed<'_>,
        mut log: Option<&mut RunLog>,
    ) -> Result<Vec<Vec<bool>>> {
        let sc = self.scenario;
        let tpd = sc.ticks_per_day;
        let mut bits = vec![Vec::new(); self.windows.count()];
        for t in 0..tpd {
            let tick = day * tpd + t;
            if tick >= self.trace.len() {
                return Err(Error::config(format!(
                    "trace ends at tick {} but day {day} needs tick {tick}",
                    self.trace.len()
                )));
            }
            let hour = (t as f64 * sc.tick_secs / 3600.0) as u32;
            let window = self.windows.window_of_hour(hour);
            let thresholds = match deployed {
                Deployed::FromX(xs) => thresholds_from_x(xs[window], &sc.region)?,
                Deployed::Baseline => ThresholdPair::baseline(),
            };

            let active_count = self.state.active_count();
            let active_specs = &sc.carriers[..active_count];
            let units = self.trace.demand[tick] * sc.total_weight;
            let spread = redistribute(units, active_specs)?;
            let load = match sc.load_mean_mode {
                LoadMeanMode::Weighted => mean_load(&spread.loads, active_specs),
                LoadMeanMode::Unweighted => mean_load_unweighted(&spread.loads),
            };

            let active_set: std::collections::BTreeSet<_> =
                active_specs.iter().map(|c| c.id.clone()).collect();
            let load_map: std::collections::BTreeMap<_, _> = active_specs
                .iter()
                .zip(&spread.loads)
                .map(|(c, &l)| (c.id.clone(), l))
                .collect();
            let watts = sector_power(&active_set, &load_map, &sc.pa_map)?;

            // KPI collection at the end of each period, over the monitored
            // set (= active carriers of the sector).
            if (t + 1) % sc.ticks_per_collection == 0 {
                let cqi = self.trace.cqi[tick];
                for (idx, (carrier, &carrier_load)) in
                    active_specs.iter().zip(&spread.loads).enumerate()
                {
                    let mut rng = stream_rng(
                        self.seed,
                        STREAM_KPI | ((tick as u64) << 8) | idx as u64,
                    );
                    let values = sample_kpi(carrier_load, cqi, &sc.kpi_model, &mut rng)?;
                    let accepted = kpi_accept(&values, &sc.targets)?;
                    bits[window].push(accepted);
                    if let Some(log) = log.as_deref_mut() {
                        log.kpi_events.push(KpiEvent {
                            tick,
                            round,
                            window,
                            carrier: carrier.id.clone(),
                            values,
                            accepted,
                        });
                    }
                }
            }

            if let Some(log) = log.as_deref_mut() {
                let mut loads = vec![0.0; sc.carriers.len()];
                loads[..active_count].copy_from_slice(&spread.loads);
                log.ticks.push(TickRecord {
                    tick,
                    round,
                    window,
                    active_count,
                    mean_load: load,
                    loads,
                    watts,
                    overflow_units: spread.overflow_units,
                });
            }

            self.state = policy_step(&self.state, load, &thresholds);
        }
        Ok(bits)
    }
}

fn make_trace(config: &ScenarioConfig, scenario: &Scenario, days: usize) -> Result<TrafficTrace> {
    match config.traffic.mode {
        TrafficMode::Diurnal => {
            let mut rng = stream_rng(config.seed, STREAM_TRACE);
            Ok(config
                .traffic
                .diurnal
                .generate(days, scenario.tick_secs, &mut rng))
        }
        TrafficMode::Csv => {
            let path = config
                .traffic
                .csv_path
                .as_ref()
                .ok_or_else(|| Error::config("traffic mode csv needs csv_path"))?;
            let trace = TrafficTrace::from_csv_path(path, scenario.tick_secs)?;
            let needed = days * scenario.ticks_per_day;
            if trace.len() < needed {
                return Err(Error::config(format!(
                    "trace has {} ticks but the campaign needs {needed}",
                    trace.len()
                )));
            }
            Ok(trace)
        }
    }
}

fn resolve_windows(
    config: &ScenarioConfig,
    scenario: &Scenario,
    trace: &TrafficTrace,
) -> Result<DayWindows> {
    if let Some(w) = &scenario.explicit_windows {
        return Ok(w.clone());
    }
    let history_ticks = config.prior.history_days * scenario.ticks_per_day;
    let history = TrafficTrace {
        tick_secs: trace.tick_secs,
        demand: trace.demand[..history_ticks].to_vec(),
        cqi: trace.cqi[..history_ticks].to_vec(),
    };
    let buckets = hourly_cqi(&history)?;
    let outcome = split_day(&buckets, config.windows.n_max, config.windows.min_len_hours)?;
    Ok(outcome.windows)
}

fn new_log(config: &ScenarioConfig, scenario: &Scenario, windows: &DayWindows, label: &str) -> RunLog {
    RunLog {
        label: label.to_owned(),
        seed: config.seed,
        rounds: config.rounds,
        tick_secs: scenario.tick_secs,
        carriers: scenario.carriers.iter().map(|c| c.id.clone()).collect(),
        coverage_floor: scenario.coverage_floor,
        window_boundaries: windows.boundaries().to_vec(),
        ticks: Vec::new(),
        kpi_events: Vec::new(),
        round_records: Vec::new(),
        warnings: Vec::new(),
    }
}

/// True synthetic curve in effect at a campaign round.
fn synthetic_curve(config: &ScenarioConfig, round: usize) -> CurveParams {
    let f = &config.feedback;
    let shifted = f.shift_round.is_some_and(|r| round >= r);
    CurveParams {
        intercept: f.true_intercept + if shifted { f.shift_intercept_delta } else { 0.0 },
        slope: f.true_slope + if shifted { f.shift_slope_delta } else { 0.0 },
    }
}

fn synthetic_bits(
    config: &ScenarioConfig,
    stream: u64,
    x: f64,
    params: &CurveParams,
) -> Vec<bool> {
    let p = curve_prob(x, params);
    let mut rng = stream_rng(config.seed, stream);
    (0..config.feedback.samples_per_round)
        .map(|_| rng.random::<f64>() < p)
        .collect()
}

fn run_campaign(config: &ScenarioConfig, mut tuning: Tuning) -> Result<RunOutput> {
    let scenario = config.compile()?;
    let label = tuning.label();

    match config.feedback.mode {
        FeedbackMode::Synthetic => run_synthetic(config, &scenario, &mut tuning, label),
        FeedbackMode::Simulated => run_simulated(config, &scenario, &mut tuning, label),
    }
}

fn run_simulated(
    config: &ScenarioConfig,
    scenario: &Scenario,
    tuning: &mut Tuning,
    label: &str,
) -> Result<RunOutput> {
    let history_days = config.prior.history_days;
    let total_days = history_days + config.rounds;
    let trace = make_trace(config, scenario, total_days)?;
    let windows = resolve_windows(config, scenario, &trace)?;
    let n_windows = windows.count();
    let mut log = new_log(config, scenario, &windows, label);
    let mut sim = SectorSim::new(scenario, config.seed, &trace, &windows)?;

    // Prior initialization from the history segment: the policy runs at the
    // configured history parameter and each day's batches are replayed into
    // the prior, oldest first.
    if let Tuning::Bayes { beliefs } = tuning {
        let mut history: Vec<Vec<KpiBatch>> = vec![Vec::new(); n_windows];
        let xs = vec![config.prior.history_x; n_windows];
        for day in 0..history_days {
            let bits = sim.simulate_day(day, 0, &Deployed::FromX(&xs), None)?;
            for (w, b) in bits.into_iter().enumerate() {
                history[w].push(KpiBatch::new(config.prior.history_x, b, w, day));
            }
        }
        *beliefs = history
            .iter()
            .map(|h| init_prior(&scenario.grid, h))
            .collect::<Result<_>>()?;
    } else {
        // Warm the policy state through the history days so every campaign
        // kind starts the first round from the same sector state.
        let xs = vec![config.prior.history_x; n_windows];
        for day in 0..history_days {
            let deployed = match tuning {
                Tuning::Baseline => Deployed::Baseline,
                _ => Deployed::FromX(&xs),
            };
            sim.simulate_day(day, 0, &deployed, None)?;
        }
    }

    let mut sa_eps_round = 0usize;
    for round in 0..config.rounds {
        let xs: Vec<f64> = match &*tuning {
            Tuning::Bayes { beliefs } => beliefs
                .iter()
                .map(|b| select_x(b, scenario.xi, scenario.x_step))
                .collect(),
            Tuning::Sa { xs } => xs.clone(),
            Tuning::Baseline => vec![0.0; n_windows],
        };
        let deployed = match tuning {
            Tuning::Baseline => Deployed::Baseline,
            _ => Deployed::FromX(&xs),
        };
        let bits = sim.simulate_day(history_days + round, round, &deployed, Some(&mut log))?;

        for (w, b) in bits.into_iter().enumerate() {
            let batch = KpiBatch::new(xs[w], b, w, round);
            let (rho_min, rho_max) = match tuning {
                Tuning::Baseline => (0.0, 0.0),
                _ => {
                    let pair = thresholds_from_x(xs[w], &scenario.region)?;
                    (pair.rho_min(), pair.rho_max())
                }
            };
            let mut record = RoundRecord {
                round,
                window: w,
                x: xs[w],
                rho_min,
                rho_max,
                trials: batch.len(),
                successes: batch.successes(),
                degenerate: false,
                belief_mean_intercept: None,
                belief_mean_slope: None,
                belief_entropy: None,
                true_prob: None,
            };
            match tuning {
                Tuning::Bayes { beliefs } => {
                    let outcome = posterior_update(&beliefs[w], &batch, &scenario.drift);
                    record.degenerate = outcome.degenerate;
                    if outcome.degenerate {
                        log.warnings.push(format!(
                            "round {round} window {w}: degenerate evidence, belief kept"
                        ));
                    } else {
                        beliefs[w] = outcome.belief;
                    }
                    let mean = beliefs[w].mean_params();
                    record.belief_mean_intercept = Some(mean.intercept);
                    record.belief_mean_slope = Some(mean.slope);
                    record.belief_entropy = Some(beliefs[w].entropy());
                }
                Tuning::Sa { xs: sa_xs } => {
                    if let Some(m) = batch.mean() {
                        let eps = config.sa.eps0 / (sa_eps_round + 1) as f64;
                        sa_xs[w] = sa_step(sa_xs[w], m, scenario.xi, eps);
                    } else {
                        log.warnings
                            .push(format!("round {round} window {w}: empty batch, SA x kept"));
                    }
                }
                Tuning::Baseline => {}
            }
            log.round_records.push(record);
        }
        sa_eps_round += 1;
    }

    let metrics = evaluate_run(&log)?;
    let beliefs = match tuning {
        Tuning::Bayes { beliefs } => std::mem::take(beliefs),
        _ => Vec::new(),
    };
    Ok(RunOutput {
        log,
        metrics,
        windows,
        beliefs,
    })
}

fn run_synthetic(
    config: &ScenarioConfig,
    scenario: &Scenario,
    tuning: &mut Tuning,
    label: &str,
) -> Result<RunOutput> {
    let windows = scenario
        .explicit_windows
        .clone()
        .ok_or_else(|| Error::config("synthetic feedback needs explicit window boundaries"))?;
    let n_windows = windows.count();
    let mut log = new_log(config, scenario, &windows, label);

    if let Tuning::Bayes { beliefs } = tuning {
        let base = synthetic_curve(config, 0);
        let mut priors = Vec::with_capacity(n_windows);
        for w in 0..n_windows {
            let history: Vec<KpiBatch> = (0..config.prior.history_days)
                .map(|day| {
                    let stream = STREAM_SYNTH_HISTORY | ((day as u64) << 8) | w as u64;
                    let bits = synthetic_bits(config, stream, config.prior.history_x, &base);
                    KpiBatch::new(config.prior.history_x, bits, w, day)
                })
                .collect();
            priors.push(init_prior(&scenario.grid, &history)?);
        }
        *beliefs = priors;
    }

    for round in 0..config.rounds {
        let truth = synthetic_curve(config, round);
        let xs: Vec<f64> = match &*tuning {
            Tuning::Bayes { beliefs } => beliefs
                .iter()
                .map(|b| select_x(b, scenario.xi, scenario.x_step))
                .collect(),
            Tuning::Sa { xs } => xs.clone(),
            Tuning::Baseline => vec![0.0; n_windows],
        };
        for w in 0..n_windows {
            let x = xs[w];
            let stream = STREAM_SYNTH | ((round as u64) << 8) | w as u64;
            let bits = synthetic_bits(config, stream, x, &truth);
            let batch = KpiBatch::new(x, bits, w, round);
            let pair = match tuning {
                Tuning::Baseline => ThresholdPair::baseline(),
                _ => thresholds_from_x(x, &scenario.region)?,
            };
            let mut record = RoundRecord {
                round,
                window: w,
                x,
                rho_min: pair.rho_min(),
                rho_max: pair.rho_max(),
                trials: batch.len(),
                successes: batch.successes(),
                degenerate: false,
                belief_mean_intercept: None,
                belief_mean_slope: None,
                belief_entropy: None,
                true_prob: Some(curve_prob(x, &truth)),
            };
            match tuning {
                Tuning::Bayes { beliefs } => {
                    let outcome = posterior_update(&beliefs[w], &batch, &scenario.drift);
                    record.degenerate = outcome.degenerate;
                    if outcome.degenerate {
                        log.warnings.push(format!(
                            "round {round} window {w}: degenerate evidence, belief kept"
                        ));
                    } else {
                        beliefs[w] = outcome.belief;
                    }
                    let mean = beliefs[w].mean_params();
                    record.belief_mean_intercept = Some(mean.intercept);
                    record.belief_mean_slope = Some(mean.slope);
                    record.belief_entropy = Some(beliefs[w].entropy());
                }
                Tuning::Sa { xs: sa_xs } => {
                    if let Some(m) = batch.mean() {
                        let eps = config.sa.eps0 / (round + 1) as f64;
                        sa_xs[w] = sa_step(sa_xs[w], m, scenario.xi, eps);
                    }
                }
                Tuning::Baseline => {}
            }
            log.round_records.push(record);
        }
    }

    let metrics = evaluate_run(&log)?;
    let beliefs = match tuning {
        Tuning::Bayes { beliefs } => std::mem::take(beliefs),
        _ => Vec::new(),
    };
    Ok(RunOutput {
        log,
        metrics,
        windows,
        beliefs,
    })
}

/// Closed-loop Bayesian tuning campaign.
pub fn run_closed_loop(config: &ScenarioConfig) -> Result<RunOutput> {
    run_campaign(config, Tuning::Bayes { beliefs: Vec::new() })
}

/// All-carriers-active reference campaign (threshold pair pinned to [0,0]).
pub fn run_baseline(config: &ScenarioConfig) -> Result<RunOutput> {
    run_campaign(config, Tuning::Baseline)
}

/// Stochastic-approximation campaign, the convergence-speed baseline.
pub fn run_sa(config: &ScenarioConfig) -> Result<RunOutput> {
    let scenario = config.compile()?;
    let n_windows = scenario
        .explicit_windows
        .as_ref()
        .map(DayWindows::count)
        .unwrap_or(0);
    // Window count is only known up front for explicit windows; otherwise
    // resolve through a compile-and-split pass identical to the campaign's.
    let xs = if n_windows > 0 {
        vec![config.sa.x0; n_windows]
    } else {
        let trace = make_trace(config, &scenario, config.prior.history_days + config.rounds)?;
        let windows = resolve_windows(config, &scenario, &trace)?;
        vec![config.sa.x0; windows.count()]
    };
    run_campaign(config, Tuning::Sa { xs })
}

/// One point of the open-loop threshold sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub x: f64,
    pub acceptance: f64,
    pub per_window_acceptance: Vec<f64>,
    pub avg_watts: Option<f64>,
    pub sleep_time_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub xi: f64,
    pub days_per_point: usize,
    pub points: Vec<SweepPoint>,
    /// Highest x minimizing the overall |acceptance - xi|.
    pub x_star: f64,
    /// Same criterion applied per window.
    pub x_star_per_window: Vec<f64>,
}

/// Brute-force oracle over the search segment: deploy each fixed `x` for a
/// stretch of days and measure the realized acceptance, power, and sleep.
pub fn sweep_x(config: &ScenarioConfig, xs: &[f64], days_per_point: usize) -> Result<SweepReport> {
    if matches!(config.feedback.mode, FeedbackMode::Synthetic) {
        return Err(Error::config(
            "the threshold sweep needs the simulated feedback mode",
        ));
    }
    if xs.is_empty() || days_per_point == 0 {
        return Err(Error::domain("sweep needs at least one x and one day"));
    }
    let scenario = config.compile()?;
    let history_days = config.prior.history_days;
    let total_days = history_days + days_per_point.max(config.rounds);
    let trace = make_trace(config, &scenario, total_days)?;
    let windows = resolve_windows(config, &scenario, &trace)?;
    let n_windows = windows.count();

    let mut points = Vec::with_capacity(xs.len());
    for &x in xs {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain(format!("sweep x {x} outside [0, 1]")));
        }
        let mut sim = SectorSim::new(&scenario, config.seed, &trace, &windows)?;
        let mut log = new_log(config, &scenario, &windows, "sweep");
        let deployed_xs = vec![x; n_windows];
        let mut per_window_bits: Vec<(usize, usize)> = vec![(0, 0); n_windows];
        for day in 0..days_per_point {
            let bits = sim.simulate_day(
                history_days + day,
                day,
                &Deployed::FromX(&deployed_xs),
                Some(&mut log),
            )?;
            for (w, b) in bits.iter().enumerate() {
                per_window_bits[w].0 += b.iter().filter(|&&ok| ok).count();
                per_window_bits[w].1 += b.len();
            }
        }
        let metrics = evaluate_run(&log)?;
        points.push(SweepPoint {
            x,
            acceptance: metrics.acceptance,
            per_window_acceptance: per_window_bits
                .iter()
                .map(|&(ok, n)| if n > 0 { ok as f64 / n as f64 } else { 0.0 })
                .collect(),
            avg_watts: metrics.avg_watts,
            sleep_time_pct: metrics.sleep_time_pct,
        });
    }

    let pick = |value: &dyn Fn(&SweepPoint) -> f64| -> f64 {
        let mut best_x = points[0].x;
        let mut best = f64::INFINITY;
        for p in &points {
            let d = (value(p) - scenario.xi).abs();
            if d <= best {
                best = d;
                best_x = p.x;
            }
        }
        best_x
    };
    let x_star = pick(&|p: &SweepPoint| p.acceptance);
    let x_star_per_window = (0..n_windows)
        .map(|w| pick(&|p: &SweepPoint| p.per_window_acceptance[w]))
        .collect();

    Ok(SweepReport {
        xi: scenario.xi,
        days_per_point,
        points,
        x_star,
        x_star_per_window,
    })
}

/// Constrained optimum of a synthetic scenario, straight from the known
/// curve: the highest x on the scan grid minimizing |p(x) - xi|.
pub fn synthetic_x_star(config: &ScenarioConfig) -> Result<f64> {
    if !matches!(config.feedback.mode, FeedbackMode::Synthetic) {
        return Err(Error::config("synthetic_x_star needs synthetic feedback"));
    }
    let scenario = config.compile()?;
    let truth = synthetic_curve(config, 0);
    let steps = (1.0 / scenario.x_step).round() as usize;
    let mut best_x = 0.0;
    let mut best = f64::INFINITY;
    for i in 0..=steps {
        let x = if i == steps {
            1.0
        } else {
            (i as f64 * scenario.x_step).min(1.0)
        };
        let d = (curve_prob(x, &truth) - scenario.xi).abs();
        if d <= best {
            best = d;
            best_x = x;
        }
    }
    Ok(best_x)
}

/// Per-round view of one campaign in a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundPoint {
    pub round: usize,
    pub x: f64,
    pub abs_err: f64,
    pub batch_mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodTrace {
    pub seed: u64,
    pub points: Vec<RoundPoint>,
    /// 1-based round at which |x - x*| first dropped within tolerance.
    pub rounds_to_hit: Option<usize>,
    /// Acceptance over the last ten rounds.
    pub final_acceptance: f64,
    pub energy_joules: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub xi: f64,
    pub x_star: f64,
    pub hit_tolerance: f64,
    pub rounds: usize,
    pub bayes: Vec<MethodTrace>,
    pub sa: Vec<MethodTrace>,
    pub bayes_mean_rounds_to_hit: Option<f64>,
    pub sa_mean_rounds_to_hit: Option<f64>,
}

const HIT_TOLERANCE: f64 = 0.05;

fn method_trace(output: &RunOutput, x_star: f64, window: usize) -> MethodTrace {
    let records: Vec<_> = output
        .log
        .round_records
        .iter()
        .filter(|r| r.window == window)
        .collect();
    let points: Vec<RoundPoint> = records
        .iter()
        .map(|r| RoundPoint {
            round: r.round,
            x: r.x,
            abs_err: (r.x - x_star).abs(),
            batch_mean: if r.trials > 0 {
                Some(r.successes as f64 / r.trials as f64)
            } else {
                None
            },
        })
        .collect();
    let rounds_to_hit = points
        .iter()
        .position(|p| p.abs_err <= HIT_TOLERANCE)
        .map(|i| i + 1);
    let tail = records.iter().rev().take(10).collect::<Vec<_>>();
    let (ok, n) = tail
        .iter()
        .fold((0usize, 0usize), |(ok, n), r| (ok + r.successes, n + r.trials));
    MethodTrace {
        seed: output.log.seed,
        points,
        rounds_to_hit,
        final_acceptance: if n > 0 { ok as f64 / n as f64 } else { 0.0 },
        energy_joules: output.metrics.energy_joules,
    }
}

fn mean_hit(traces: &[MethodTrace]) -> Option<f64> {
    let mut total = 0.0;
    for t in traces {
        total += t.rounds_to_hit? as f64;
    }
    Some(total / traces.len() as f64)
}

/// Run the Bayesian and SA campaigns on paired seeds and report how fast
/// each approaches the constrained optimum. Window 0 is tracked.
pub fn compare_tuners(config: &ScenarioConfig, seeds: &[u64]) -> Result<CompareReport> {
    if seeds.is_empty() {
        return Err(Error::domain("compare needs at least one seed"));
    }
    let x_star = match config.feedback.mode {
        FeedbackMode::Synthetic => synthetic_x_star(config)?,
        FeedbackMode::Simulated => {
            let xs: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
            sweep_x(config, &xs, 8)?.x_star
        }
    };
    let mut bayes = Vec::with_capacity(seeds.len());
    let mut sa = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let mut seeded = config.clone();
        seeded.seed = seed;
        bayes.push(method_trace(&run_closed_loop(&seeded)?, x_star, 0));
        sa.push(method_trace(&run_sa(&seeded)?, x_star, 0));
    }
    Ok(CompareReport {
        xi: config.tuner.xi,
        x_star,
        hit_tolerance: HIT_TOLERANCE,
        rounds: config.rounds,
        bayes_mean_rounds_to_hit: mean_hit(&bayes),
        sa_mean_rounds_to_hit: mean_hit(&sa),
        bayes,
        sa,
    })
}

/// Plot-ready comparison rows: method, seed, round, x, error, batch mean.
pub fn write_compare_csv(report: &CompareReport, writer: impl std::io::Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["method", "seed", "round", "x", "abs_err", "batch_mean"])
        .map_err(|e| Error::parse(format!("compare write: {e}")))?;
    for (method, traces) in [("bayes", &report.bayes), ("sa", &report.sa)] {
        for t in traces {
            for p in &t.points {
                w.write_record(&[
                    method.to_string(),
                    t.seed.to_string(),
                    p.round.to_string(),
                    p.x.to_string(),
                    p.abs_err.to_string(),
                    p.batch_mean.map_or(String::new(), |m| m.to_string()),
                ])
                .map_err(|e| Error::parse(format!("compare write: {e}")))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
