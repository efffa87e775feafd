use serde::{Deserialize, Serialize};

use crate::crn::Trajectory;

use super::ExperimentError;

/// Time-averaged weights of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSummary {
    /// Mean count of `H_n` over the window, per channel.
    pub means: Vec<f64>,
    /// `means` divided by their sum; all zero when the sum is zero.
    pub normalized: Vec<f64>,
    pub window: (f64, f64),
}

impl WeightSummary {
    pub fn from_means(means: Vec<f64>, window: (f64, f64)) -> Self {
        let total: f64 = means.iter().sum();
        let normalized = if total > 0.0 {
            means.iter().map(|m| m / total).collect()
        } else {
            vec![0.0; means.len()]
        };
        Self {
            means,
            normalized,
            window,
        }
    }

    pub fn total(&self) -> f64 {
        self.means.iter().sum()
    }
}

/// Time average of every recorded weight column over
/// `[t_transient, t_transient + t_window]`, using the trapezoid rule on the
/// sampled trajectory.
pub fn steady_state_weights(
    trajectory: &Trajectory,
    weight_columns: &[usize],
    t_transient: f64,
    t_window: f64,
) -> Result<WeightSummary, ExperimentError> {
    let from = t_transient;
    let to = t_transient + t_window;
    let times = trajectory.times();
    let bad = || ExperimentError::WindowOutsideTrajectory { from, to };
    if !(t_window > 0.0 && from >= 0.0) || times.is_empty() {
        return Err(bad());
    }
    let tol = 1e-9 * to.abs().max(1.0);
    if times[0] > from + tol || *times.last().unwrap() < to - tol {
        return Err(bad());
    }
    let mut means = Vec::with_capacity(weight_columns.len());
    for &c in weight_columns {
        let series = trajectory.series(c);
        let mut acc = 0.0;
        for i in 1..times.len() {
            let (t0, t1) = (times[i - 1].max(from), times[i].min(to));
            if t1 <= t0 {
                continue;
            }
            let lerp = |t: f64| {
                let f = (t - times[i - 1]) / (times[i] - times[i - 1]);
                series[i - 1] + f * (series[i] - series[i - 1])
            };
            acc += 0.5 * (lerp(t0) + lerp(t1)) * (t1 - t0);
        }
        means.push(acc / t_window);
    }
    Ok(WeightSummary::from_means(means, (from, to)))
}

/// Population standard deviation of the per-channel means divided by their
/// mean.
pub fn index_of_dispersion(summary: &WeightSummary) -> Result<f64, ExperimentError> {
    let n = summary.means.len() as f64;
    let mean = summary.total() / n;
    if !(mean > 0.0) {
        return Err(ExperimentError::ZeroMeanWeight);
    }
    let var = summary.means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / n;
    Ok(var.sqrt() / mean)
}

/// Mean, standard error and median of a sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub stderr: f64,
    pub median: f64,
    pub n: usize,
}

impl Stat {
    /// `None` for an empty sample. A single value has zero standard error.
    pub fn of(values: &[f64]) -> Option<Self> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        Some(Self {
            mean,
            stderr,
            median,
            n,
        })
    }
}
