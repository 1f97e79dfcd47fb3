//! Day segmentation into CQI-stable windows.
//!
//! The splitter enumerates every count and placement of whole-hour window
//! boundaries (with wrap-around at midnight) and keeps the configuration
//! minimizing the mean of per-window CQI standard deviations, subject to a
//! minimum window duration. Enumeration at hour granularity is small enough
//! that the operation *is* its own brute force.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::traffic::TrafficTrace;

pub const HOURS_PER_DAY: u32 = 24;

/// Ordered whole-hour window boundaries; window `i` spans
/// `[boundaries[i], boundaries[i+1])` with the last window wrapping past
/// midnight back to `boundaries[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayWindows {
    boundaries: Vec<u32>,
}

impl DayWindows {
    pub fn new(boundaries: Vec<u32>) -> Result<Self> {
        if boundaries.is_empty() {
            return Err(Error::config("window boundary list is empty"));
        }
        if boundaries.iter().any(|&h| h >= HOURS_PER_DAY) {
            return Err(Error::config("window boundaries must be hours in 0..24"));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("window boundaries must be strictly increasing"));
        }
        Ok(DayWindows { boundaries })
    }

    /// The whole day as a single window.
    pub fn single() -> Self {
        DayWindows { boundaries: vec![0] }
    }

    pub fn count(&self) -> usize {
        self.boundaries.len()
    }

    pub fn boundaries(&self) -> &[u32] {
        &self.boundaries
    }

    /// Duration of window `i` in hours, including the wrap window.
    pub fn duration(&self, i: usize) -> u32 {
        let start = self.boundaries[i];
        let end = self.boundaries[(i + 1) % self.boundaries.len()];
        if end > start {
            end - start
        } else {
            HOURS_PER_DAY - start + end
        }
    }

    /// Index of the window containing the given hour of day.
    pub fn window_of_hour(&self, hour: u32) -> usize {
        let hour = hour % HOURS_PER_DAY;
        // The hours before the first boundary belong to the wrap window.
        match self.boundaries.iter().rposition(|&b| b <= hour) {
            Some(i) => i,
            None => self.boundaries.len() - 1,
        }
    }

    /// Hours of day covered by window `i`, in chronological order.
    pub fn hours(&self, i: usize) -> Vec<u32> {
        let start = self.boundaries[i];
        (0..self.duration(i))
            .map(|k| (start + k) % HOURS_PER_DAY)
            .collect()
    }
}

/// Splitter output: the winning windows and their objective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitOutcome {
    pub windows: DayWindows,
    /// Mean of per-window CQI standard deviations.
    pub objective: f64,
}

/// Population standard deviation, two-pass. Fixed formula so independent
/// implementations agree exactly.
fn pooled_std(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    var.sqrt()
}

fn window_objective(cqi_by_hour: &[Vec<f64>], boundaries: &[u32]) -> f64 {
    let windows = DayWindows {
        boundaries: boundaries.to_vec(),
    };
    let mut total = 0.0;
    for i in 0..windows.count() {
        let pooled: Vec<f64> = windows
            .hours(i)
            .into_iter()
            .flat_map(|h| cqi_by_hour[h as usize].iter().copied())
            .collect();
        total += pooled_std(&pooled);
    }
    total / windows.count() as f64
}

/// Exhaustively choose the window count and boundaries minimizing the mean
/// per-window CQI standard deviation.
///
/// Ties break toward fewer windows, then lexicographically earliest
/// boundaries. Window counts whose minimum durations cannot tile 24 hours
/// are skipped; if nothing fits at all the split is infeasible.
pub fn split_day(cqi_by_hour: &[Vec<f64>], n_max: usize, min_len: u32) -> Result<SplitOutcome> {
    if cqi_by_hour.len() != HOURS_PER_DAY as usize {
        return Err(Error::config(format!(
            "expected {HOURS_PER_DAY} hour buckets, got {}",
            cqi_by_hour.len()
        )));
    }
    for (h, bucket) in cqi_by_hour.iter().enumerate() {
        if bucket.is_empty() {
            return Err(Error::config(format!("hour bucket {h} has no CQI samples")));
        }
    }
    if n_max < 1 {
        return Err(Error::config("n_max must be at least 1"));
    }
    let min_len = min_len.max(1);

    let mut best: Option<SplitOutcome> = None;
    let mut boundaries = Vec::new();
    for n in 1..=n_max {
        enumerate_boundaries(&mut boundaries, n, min_len, cqi_by_hour, &mut best);
    }
    best.ok_or_else(|| {
        Error::Infeasible(format!(
            "no placement of up to {n_max} windows with min duration {min_len} h tiles 24 h"
        ))
    })
}

fn enumerate_boundaries(
    prefix: &mut Vec<u32>,
    n: usize,
    min_len: u32,
    cqi_by_hour: &[Vec<f64>],
    best: &mut Option<SplitOutcome>,
) {
    if n as u32 * min_len > HOURS_PER_DAY {
        return;
    }
    fn recurse(
        prefix: &mut Vec<u32>,
        remaining: usize,
        min_len: u32,
        cqi_by_hour: &[Vec<f64>],
        best: &mut Option<SplitOutcome>,
    ) {
        if remaining == 0 {
            // All gaps between consecutive boundaries were enforced on the
            // way down; the wrap window still needs checking.
            if prefix.len() > 1 {
                let wrap = HOURS_PER_DAY - prefix[prefix.len() - 1] + prefix[0];
                if wrap < min_len {
                    return;
                }
            }
            let objective = window_objective(cqi_by_hour, prefix);
            let better = match best {
                None => true,
                // Strict improvement only: earlier (fewer windows, earlier
                // boundaries) candidates win ties by enumeration order.
                Some(b) => objective < b.objective,
            };
            if better {
                *best = Some(SplitOutcome {
                    windows: DayWindows {
                        boundaries: prefix.clone(),
                    },
                    objective,
                });
            }
            return;
        }
        let next_min = match prefix.last() {
            Some(&last) => last + min_len,
            None => 0,
        };
        for h in next_min..HOURS_PER_DAY {
            prefix.push(h);
            recurse(prefix, remaining - 1, min_len, cqi_by_hour, best);
            prefix.pop();
        }
    }
    prefix.clear();
    recurse(prefix, n, min_len, cqi_by_hour, best);
}

/// Bucket a trace's CQI samples by hour of day. Used to feed the splitter
/// from historical (or CSV) traces.
pub fn hourly_cqi(trace: &TrafficTrace) -> Result<Vec<Vec<f64>>> {
    trace.validate()?;
    let mut buckets = vec![Vec::new(); HOURS_PER_DAY as usize];
    for (t, &q) in trace.cqi.iter().enumerate() {
        let hour = ((t as f64 * trace.tick_secs / 3600.0) as u32) % HOURS_PER_DAY;
        buckets[hour as usize].push(q);
    }
    Ok(buckets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn buckets_from(levels: &[f64]) -> Vec<Vec<f64>> {
        levels.iter().map(|&v| vec![v]).collect()
    }

    fn two_level_day() -> Vec<Vec<f64>> {
        let mut levels = [6.0; 24];
        for h in 8..20 {
            levels[h] = 12.0;
        }
        buckets_from(&levels)
    }

    #[test]
    fn constant_trace_collapses_to_one_window() {
        let out = split_day(&buckets_from(&[7.0; 24]), 3, 2).unwrap();
        assert_eq!(out.windows.boundaries(), &[0]);
        assert_relative_eq!(out.objective, 0.0);
    }

    #[test]
    fn two_level_day_splits_at_the_steps() {
        let out = split_day(&two_level_day(), 2, 4).unwrap();
        assert_eq!(out.windows.boundaries(), &[8, 20]);
        assert_relative_eq!(out.objective, 0.0);
    }

    #[test]
    fn infeasible_pair_count_forces_single_window() {
        let out = split_day(&two_level_day(), 2, 13).unwrap();
        assert_eq!(out.windows.count(), 1);
    }

    #[test]
    fn nothing_fits_is_an_error() {
        let result = split_day(&two_level_day(), 2, 25);
        assert!(matches!(result, Err(Error::Infeasible(_))));
    }

    #[test]
    fn empty_bucket_is_rejected() {
        let mut buckets = two_level_day();
        buckets[3].clear();
        assert!(split_day(&buckets, 2, 4).is_err());
    }

    #[test]
    fn every_window_respects_min_len_including_wrap() {
        // Noisy bucket means: force a nontrivial optimum and check durations.
        let levels: Vec<f64> = (0..24).map(|h| ((h * 7) % 13) as f64).collect();
        for min_len in [1u32, 3, 6] {
            let out = split_day(&buckets_from(&levels), 4, min_len).unwrap();
            for i in 0..out.windows.count() {
                assert!(out.windows.duration(i) >= min_len);
            }
        }
    }

    #[test]
    fn objective_is_shift_invariant() {
        let levels: Vec<f64> = (0..24).map(|h| ((h * 5) % 11) as f64).collect();
        let shifted: Vec<f64> = levels.iter().map(|v| v + 100.0).collect();
        let a = split_day(&buckets_from(&levels), 3, 2).unwrap();
        let b = split_day(&buckets_from(&shifted), 3, 2).unwrap();
        assert_eq!(a.windows, b.windows);
        assert_relative_eq!(a.objective, b.objective, epsilon = 1e-9);
    }

    #[test]
    fn window_of_hour_handles_wrap() {
        let w = DayWindows::new(vec![8, 20]).unwrap();
        assert_eq!(w.window_of_hour(8), 0);
        assert_eq!(w.window_of_hour(19), 0);
        assert_eq!(w.window_of_hour(20), 1);
        assert_eq!(w.window_of_hour(23), 1);
        assert_eq!(w.window_of_hour(0), 1);
        assert_eq!(w.window_of_hour(7), 1);
        assert_eq!(w.duration(0), 12);
        assert_eq!(w.duration(1), 12);
        assert_eq!(w.hours(1), vec![20, 21, 22, 23, 0, 1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn single_window_covers_everything() {
        let w = DayWindows::single();
        assert_eq!(w.duration(0), 24);
        for h in 0..24 {
            assert_eq!(w.window_of_hour(h), 0);
        }
    }

    #[test]
    fn hourly_buckets_from_trace() {
        let trace = TrafficTrace {
            tick_secs: 1800.0, // two ticks per hour
            demand: vec![0.1; 48],
            cqi: (0..48).map(|i| (i / 2) as f64 % 15.0).collect(),
        };
        let buckets = hourly_cqi(&trace).unwrap();
        assert_eq!(buckets.len(), 24);
        assert!(buckets.iter().all(|b| b.len() == 2));
        assert_eq!(buckets[3], vec![3.0, 3.0]);
    }
}
