//! Bayesian threshold tuner.
//!
//! The unknown acceptance curve is parameterized as a bounded linear
//! function `p(x) = clamp(intercept - slope * x, 0, 1)` and the belief over
//! its parameters lives on a discrete grid. Each tuning round multiplies the
//! belief by a Bernoulli batch likelihood; an optional Gaussian drift kernel
//! diffuses the belief first, which makes the learner forget old evidence
//! and track slow changes. A stochastic-approximation step is provided as
//! the comparison baseline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the bounded linear acceptance curve.
///
/// `slope >= 0` keeps the curve non-increasing in `x`, which is what the
/// monotone threshold segment guarantees physically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    pub intercept: f64,
    pub slope: f64,
}

/// Acceptance probability of the bounded linear curve at `x`.
pub fn curve_prob(x: f64, params: &CurveParams) -> f64 {
    (params.intercept - params.slope * x).clamp(0.0, 1.0)
}

/// Rectangular parameter lattice: `resolution` nodes per axis, intercept
/// over `[0, intercept_max]`, slope over `[0, slope_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    pub intercept_max: f64,
    pub slope_max: f64,
    pub resolution: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            intercept_max: 1.5,
            slope_max: 3.0,
            resolution: 61,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.intercept_max.is_finite() && self.intercept_max > 0.0) {
            return Err(Error::config("grid intercept_max must be positive"));
        }
        if !(self.slope_max.is_finite() && self.slope_max > 0.0) {
            return Err(Error::config("grid slope_max must be positive"));
        }
        if self.resolution < 2 || self.resolution > 1024 {
            return Err(Error::config(format!(
                "grid resolution {} outside 2..=1024",
                self.resolution
            )));
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.resolution * self.resolution
    }

    pub fn intercept_step(&self) -> f64 {
        self.intercept_max / (self.resolution - 1) as f64
    }

    pub fn slope_step(&self) -> f64 {
        self.slope_max / (self.resolution - 1) as f64
    }

    /// Node index layout is intercept-major: `index = ia * resolution + ib`.
    pub fn params_at(&self, index: usize) -> CurveParams {
        let ia = index / self.resolution;
        let ib = index % self.resolution;
        CurveParams {
            intercept: ia as f64 * self.intercept_step(),
            slope: ib as f64 * self.slope_step(),
        }
    }

    /// Index of the node nearest to the given parameters.
    pub fn nearest_index(&self, params: &CurveParams) -> usize {
        let clamp_axis = |v: f64, step: f64| -> usize {
            ((v / step).round() as i64).clamp(0, self.resolution as i64 - 1) as usize
        };
        let ia = clamp_axis(params.intercept, self.intercept_step());
        let ib = clamp_axis(params.slope, self.slope_step());
        ia * self.resolution + ib
    }
}

/// Discrete probability mass over curve parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamBelief {
    spec: GridSpec,
    mass: Vec<f64>,
}

impl ParamBelief {
    /// Uninformative start: uniform over the whole (monotone) grid.
    pub fn uniform(spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.node_count();
        Ok(ParamBelief {
            spec,
            mass: vec![1.0 / n as f64; n],
        })
    }

    /// Build a belief from explicit masses; they are validated and
    /// normalized.
    pub fn from_masses(spec: GridSpec, mass: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if mass.len() != spec.node_count() {
            return Err(Error::config(format!(
                "{} masses for a {} node grid",
                mass.len(),
                spec.node_count()
            )));
        }
        let mut total = 0.0;
        for &m in &mass {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::config(format!("belief mass {m} invalid")));
            }
            total += m;
        }
        if !(total > 0.0) {
            return Err(Error::config("belief total mass is zero"));
        }
        let mut belief = ParamBelief { spec, mass };
        // Already-normalized input is kept bit-for-bit.
        if (total - 1.0).abs() > 1e-9 {
            for m in &mut belief.mass {
                *m /= total;
            }
        }
        Ok(belief)
    }

    fn from_normalized(spec: GridSpec, mass: Vec<f64>) -> Self {
        ParamBelief { spec, mass }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Expected acceptance probability at `x` under the belief.
    pub fn expected_prob(&self, x: f64) -> f64 {
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0.0)
            .map(|(i, &m)| m * curve_prob(x, &self.spec.params_at(i)))
            .sum()
    }

    /// Posterior mean of the curve parameters.
    pub fn mean_params(&self) -> CurveParams {
        let mut intercept = 0.0;
        let mut slope = 0.0;
        for (i, &m) in self.mass.iter().enumerate() {
            if m > 0.0 {
                let p = self.spec.params_at(i);
                intercept += m * p.intercept;
                slope += m * p.slope;
            }
        }
        CurveParams { intercept, slope }
    }

    /// Shannon entropy (nats) of the mass vector.
    pub fn entropy(&self) -> f64 {
        -self
            .mass
            .iter()
            .filter(|&&m| m > 0.0)
            .map(|&m| m * m.ln())
            .sum::<f64>()
    }
}

/// One round of binary KPI acceptability observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpiBatch {
    /// Search parameter deployed while the samples were collected.
    pub x_used: f64,
    pub samples: Vec<bool>,
    pub window: usize,
    pub round: usize,
}

impl KpiBatch {
    pub fn new(x_used: f64, samples: Vec<bool>, window: usize, round: usize) -> Self {
        KpiBatch {
            x_used,
            samples,
            window,
            round,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn successes(&self) -> usize {
        self.samples.iter().filter(|&&d| d).count()
    }

    /// Fraction of acceptable samples; `None` for an empty batch.
    pub fn mean(&self) -> Option<f64> {
        if self.samples.is_empty() {
            None
        } else {
            Some(self.successes() as f64 / self.samples.len() as f64)
        }
    }
}

/// Per-round Gaussian random-walk law on the curve parameters. Zero
/// standard deviations disable drift and recover the static Bayes update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DriftKernel {
    pub intercept_std: f64,
    pub slope_std: f64,
}

impl Default for DriftKernel {
    fn default() -> Self {
        DriftKernel::none()
    }
}

impl DriftKernel {
    pub fn none() -> Self {
        DriftKernel {
            intercept_std: 0.0,
            slope_std: 0.0,
        }
    }

    pub fn is_static(&self) -> bool {
        self.intercept_std == 0.0 && self.slope_std == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.intercept_std.is_finite() && self.intercept_std >= 0.0)
            || !(self.slope_std.is_finite() && self.slope_std >= 0.0)
        {
            return Err(Error::config("drift deviations must be finite and >= 0"));
        }
        Ok(())
    }
}

fn bernoulli_log_likelihood(p: f64, successes: usize, trials: usize) -> f64 {
    let failures = trials - successes;
    let mut ll = 0.0;
    if successes > 0 {
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        ll += successes as f64 * p.ln();
    }
    if failures > 0 {
        if p >= 1.0 {
            return f64::NEG_INFINITY;
        }
        ll += failures as f64 * (1.0 - p).ln();
    }
    ll
}

/// Log-likelihood of a batch under one parameter node.
pub fn batch_log_likelihood(batch: &KpiBatch, params: &CurveParams) -> f64 {
    let p = curve_prob(batch.x_used, params);
    bernoulli_log_likelihood(p, batch.successes(), batch.len())
}

/// Plain likelihood `p^s (1-p)^(J-s)`; underflows to zero for large
/// batches, which is why the posterior update works in log space.
pub fn batch_likelihood(batch: &KpiBatch, params: &CurveParams) -> f64 {
    batch_log_likelihood(batch, params).exp()
}

/// Truncated (+-3 sigma) discrete Gaussian, symmetric, normalized to 1.
/// `None` when the deviation vanishes below the grid step.
fn gaussian_weights(sigma: f64, step: f64) -> Option<Vec<f64>> {
    if sigma <= 0.0 {
        return None;
    }
    let reach = (3.0 * sigma / step).floor() as usize;
    if reach == 0 {
        return None;
    }
    let mut weights: Vec<f64> = (0..=reach)
        .map(|o| {
            let d = o as f64 * step;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let total = weights[0] + 2.0 * weights[1..].iter().sum::<f64>();
    for w in &mut weights {
        *w /= total;
    }
    Some(weights)
}

/// Half-sample reflection of an out-of-range index into `0..n`.
fn reflect(idx: i64, n: i64) -> usize {
    let period = 2 * n;
    let mut t = idx % period;
    if t < 0 {
        t += period;
    }
    if t < n {
        t as usize
    } else {
        (period - 1 - t) as usize
    }
}

/// Convolve one line with a symmetric kernel under reflecting boundaries.
/// Reflection keeps the transition doubly stochastic, so no mass leaks off
/// the lattice and the diffusion never sharpens the belief.
fn convolve_line(line: &[f64], weights: &[f64], out: &mut [f64]) {
    let n = line.len() as i64;
    out.fill(0.0);
    for (i, &m) in line.iter().enumerate() {
        if m == 0.0 {
            continue;
        }
        out[i] += m * weights[0];
        for (offset, &w) in weights.iter().enumerate().skip(1) {
            out[reflect(i as i64 - offset as i64, n)] += m * w;
            out[reflect(i as i64 + offset as i64, n)] += m * w;
        }
    }
}

/// Diffuse the mass along both axes. Returns whether anything changed.
fn apply_drift(mass: &mut [f64], spec: &GridSpec, kernel: &DriftKernel) -> bool {
    let res = spec.resolution;
    let mut changed = false;
    let mut line = vec![0.0; res];
    let mut conv = vec![0.0; res];

    if let Some(w) = gaussian_weights(kernel.intercept_std, spec.intercept_step()) {
        // Intercept axis: stride `res` within each slope column.
        for ib in 0..res {
            for ia in 0..res {
                line[ia] = mass[ia * res + ib];
            }
            convolve_line(&line, &w, &mut conv);
            for ia in 0..res {
                mass[ia * res + ib] = conv[ia];
            }
        }
        changed = true;
    }
    if let Some(w) = gaussian_weights(kernel.slope_std, spec.slope_step()) {
        // Slope axis: contiguous rows.
        for ia in 0..res {
            let row = &mut mass[ia * res..(ia + 1) * res];
            line.copy_from_slice(row);
            convolve_line(&line, &w, &mut conv);
            row.copy_from_slice(&conv);
        }
        changed = true;
    }
    if changed {
        let total: f64 = mass.iter().sum();
        for m in mass.iter_mut() {
            *m /= total;
        }
    }
    changed
}

/// Result of a posterior update. When every node contradicts the batch the
/// input belief is returned untouched with `degenerate` set.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateOutcome {
    pub belief: ParamBelief,
    pub degenerate: bool,
}

/// Bayes update of the belief with one batch: drift convolution first (when
/// the kernel is non-zero), then the Bernoulli likelihood, then
/// renormalization.
pub fn posterior_update(
    belief: &ParamBelief,
    batch: &KpiBatch,
    kernel: &DriftKernel,
) -> UpdateOutcome {
    let spec = belief.spec;
    let mut prior = belief.mass.clone();
    let drifted = apply_drift(&mut prior, &spec, kernel);

    if batch.is_empty() {
        let belief = if drifted {
            ParamBelief::from_normalized(spec, prior)
        } else {
            belief.clone()
        };
        return UpdateOutcome {
            belief,
            degenerate: false,
        };
    }

    let successes = batch.successes();
    let trials = batch.len();
    let mut loglik = vec![f64::NEG_INFINITY; prior.len()];
    let mut peak = f64::NEG_INFINITY;
    for (i, &m) in prior.iter().enumerate() {
        if m <= 0.0 {
            continue;
        }
        let p = curve_prob(batch.x_used, &spec.params_at(i));
        let ll = bernoulli_log_likelihood(p, successes, trials);
        loglik[i] = ll;
        if ll > peak {
            peak = ll;
        }
    }
    if peak == f64::NEG_INFINITY {
        return UpdateOutcome {
            belief: belief.clone(),
            degenerate: true,
        };
    }

    let mut post: Vec<f64> = prior
        .iter()
        .zip(&loglik)
        .map(|(&m, &ll)| {
            if m > 0.0 && ll > f64::NEG_INFINITY {
                m * (ll - peak).exp()
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = post.iter().sum();
    if !(total > 0.0) {
        return UpdateOutcome {
            belief: belief.clone(),
            degenerate: true,
        };
    }
    for m in &mut post {
        *m /= total;
    }
    UpdateOutcome {
        belief: ParamBelief::from_normalized(spec, post),
        degenerate: false,
    }
}

/// Pick the next search parameter: scan `x` over `{0, step, ..., 1}` and
/// return the largest `x` minimizing `|E[p(x)] - xi|`. Ties go to the
/// highest `x` because it consumes the least energy.
pub fn select_x(belief: &ParamBelief, xi: f64, x_step: f64) -> f64 {
    assert!(
        x_step > 0.0 && x_step <= 1.0,
        "x step {x_step} outside (0, 1]"
    );
    debug_assert!((0.0..=1.0).contains(&xi), "confidence target {xi}");
    let steps = (1.0 / x_step).round() as usize;
    let mut best_x = 0.0;
    let mut best_dist = f64::INFINITY;
    for i in 0..=steps {
        let x = if i == steps {
            1.0
        } else {
            (i as f64 * x_step).min(1.0)
        };
        let dist = (belief.expected_prob(x) - xi).abs();
        if dist <= best_dist {
            best_dist = dist;
            best_x = x;
        }
    }
    best_x
}

/// Prior initialization: uniform over the monotone grid, then a replay of
/// historical batches in chronological order with no drift, as if the tuner
/// had discovered them online. Degenerate batches leave the belief as-is.
pub fn init_prior(spec: &GridSpec, history: &[KpiBatch]) -> Result<ParamBelief> {
    let mut belief = ParamBelief::uniform(*spec)?;
    let static_kernel = DriftKernel::none();
    for batch in history {
        let outcome = posterior_update(&belief, batch, &static_kernel);
        if !outcome.degenerate {
            belief = outcome.belief;
        }
    }
    Ok(belief)
}

/// Stochastic-approximation baseline: move `x` by `eps * (m - xi)`, clipped
/// into `[0, 1]` to stay inside the search segment.
pub fn sa_step(x: f64, batch_mean: f64, xi: f64, eps: f64) -> f64 {
    debug_assert!(eps > 0.0, "step size {eps}");
    (x + eps * (batch_mean - xi)).clamp(0.0, 1.0)
}
