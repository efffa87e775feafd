use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crn::{replicate_rng, Simulator, TimeAverage};
use crate::model::{build_basic_cn, BasicConfig, CnNetwork};
use crate::stimulus::{generate_schedule, ChannelProcess};

use super::{ExperimentError, WeightSummary};

/// Input statistics shared by the training tasks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InputSpec {
    pub f_low: f64,
    pub f_high: f64,
    /// Mean lag of a follower channel behind its leader.
    pub delta: f64,
    /// Variance of the lag jitter.
    pub sigma2: f64,
}

impl Default for InputSpec {
    fn default() -> Self {
        Self {
            f_low: 2.0,
            f_high: 4.0,
            delta: 0.0047,
            sigma2: 1e-4,
        }
    }
}

/// Transient and averaging window of a training run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Protocol {
    pub transient: f64,
    pub window: f64,
}

impl Default for Protocol {
    fn default() -> Self {
        Self {
            transient: 700.0,
            window: 300.0,
        }
    }
}

impl Protocol {
    /// Half-length protocol for quick runs.
    pub fn reduced() -> Self {
        Self {
            transient: 350.0,
            window: 150.0,
        }
    }

    pub fn t_end(&self) -> f64 {
        self.transient + self.window
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    /// The first `k` channels fire at the high frequency, the rest low.
    Fb(usize),
    /// Channels `1..=k` form a follower chain in index order; all low.
    Tc(usize),
    /// Three channels: 1 and 2 correlated at the low frequency, 3
    /// independent at the high frequency.
    Mixed,
    /// All channels independent at the low frequency.
    Unbiased,
}

impl Task {
    pub fn processes(&self, channels: usize, inputs: &InputSpec) -> Result<Vec<ChannelProcess>, ExperimentError> {
        let need = match *self {
            Task::Fb(k) | Task::Tc(k) => k.max(1),
            Task::Mixed => 3,
            Task::Unbiased => 1,
        };
        if channels < need {
            return Err(ExperimentError::InvalidTask(format!(
                "{self:?} needs at least {need} channels, got {channels}"
            )));
        }
        let low = |c| ChannelProcess::poisson(c, inputs.f_low);
        let follow = |c, of| ChannelProcess::follower(c, of, inputs.delta, inputs.sigma2);
        Ok((0..channels)
            .map(|c| match *self {
                Task::Fb(k) if c < k => ChannelProcess::poisson(c, inputs.f_high),
                Task::Tc(k) if c > 0 && c < k => follow(c, c - 1),
                Task::Mixed if c == 1 => follow(1, 0),
                Task::Mixed if c == 2 => ChannelProcess::poisson(2, inputs.f_high),
                _ => low(c),
            })
            .collect())
    }

    /// Whether the weights reflect the input bias.
    ///
    /// FB k: every high-frequency weight exceeds every low-frequency one.
    /// TC k: weights strictly decrease along the chain and the last chain
    /// weight exceeds every other weight. Mixed: the follower's weight is
    /// the largest. Unbiased: always true.
    pub fn success(&self, summary: &WeightSummary) -> bool {
        let h = &summary.means;
        let max_of = |s: &[f64]| s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min_of = |s: &[f64]| s.iter().copied().fold(f64::INFINITY, f64::min);
        match *self {
            Task::Fb(k) => k == 0 || k >= h.len() || min_of(&h[..k]) > max_of(&h[k..]),
            Task::Tc(k) if k <= 1 => true,
            Task::Tc(k) => {
                let k = k.min(h.len());
                h[..k].windows(2).all(|w| w[0] > w[1]) && (k == h.len() || h[k - 1] > max_of(&h[k..]))
            }
            Task::Mixed => h.len() >= 3 && h[1] > h[0] && h[1] > h[2],
            Task::Unbiased => true,
        }
    }
}

/// Result of one training run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskRun {
    pub seed: u64,
    pub summary: WeightSummary,
    pub success: bool,
}

/// Trains `cn` on the processes from `seed` and averages the weights over
/// the protocol window. The simulation stream is `replicate_rng(seed, 0)`;
/// bolus times come from an independent stream of the same seed.
pub fn train(
    cn: &CnNetwork,
    processes: &[ChannelProcess],
    protocol: &Protocol,
    seed: u64,
) -> Result<WeightSummary, ExperimentError> {
    let t_end = protocol.t_end();
    let schedule = generate_schedule(processes, &cn.precursors(), cn.bolus_size, t_end, seed)?;
    let mut avg = TimeAverage::new(protocol.transient, t_end, &cn.weight_species())?;
    let mut sim = Simulator::new(&cn.spec, replicate_rng(seed, 0));
    sim.run(&schedule, t_end, &mut avg)?;
    Ok(WeightSummary::from_means(avg.means()?, avg.window()))
}

/// Runs `task` once per seed (in parallel) on an already built neuron.
pub fn run_task(
    cn: &CnNetwork,
    task: Task,
    inputs: &InputSpec,
    protocol: &Protocol,
    seeds: &[u64],
) -> Result<Vec<TaskRun>, ExperimentError> {
    let processes = task.processes(cn.num_channels(), inputs)?;
    seeds
        .par_iter()
        .map(|&seed| {
            let summary = train(cn, &processes, protocol, seed)?;
            Ok(TaskRun {
                seed,
                success: task.success(&summary),
                summary,
            })
        })
        .collect()
}

/// Frequency-bias task with `k` high-frequency channels.
pub fn run_fb(
    k: usize,
    config: &BasicConfig,
    inputs: &InputSpec,
    protocol: &Protocol,
    seeds: &[u64],
) -> Result<Vec<TaskRun>, ExperimentError> {
    run_task(&build_basic_cn(config)?, Task::Fb(k), inputs, protocol, seeds)
}

/// Correlation task with a follower chain over the first `k` channels.
pub fn run_tc(
    k: usize,
    config: &BasicConfig,
    inputs: &InputSpec,
    protocol: &Protocol,
    seeds: &[u64],
) -> Result<Vec<TaskRun>, ExperimentError> {
    run_task(&build_basic_cn(config)?, Task::Tc(k), inputs, protocol, seeds)
}

/// Fraction of runs whose success predicate holds.
pub fn pass_rate(runs: &[TaskRun]) -> f64 {
    if runs.is_empty() {
        return 0.0;
    }
    runs.iter().filter(|r| r.success).count() as f64 / runs.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stimulus::ProcessKind;

    fn summary(h: &[f64]) -> WeightSummary {
        WeightSummary::from_means(h.to_vec(), (0.0, 1.0))
    }

    #[test]
    fn fb_processes() {
        let p = Task::Fb(2).processes(5, &InputSpec::default()).unwrap();
        let f: Vec<f64> = p
            .iter()
            .map(|p| match p.kind {
                ProcessKind::Poisson { frequency } => frequency,
                _ => panic!(),
            })
            .collect();
        assert_eq!(f, vec![4.0, 4.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn tc_chain_is_follower_of_follower() {
        let p = Task::Tc(3).processes(5, &InputSpec::default()).unwrap();
        assert!(matches!(p[1].kind, ProcessKind::Follower { of: 0, .. }));
        assert!(matches!(p[2].kind, ProcessKind::Follower { of: 1, .. }));
        assert!(matches!(p[3].kind, ProcessKind::Poisson { .. }));
        assert!(Task::Tc(6).processes(5, &InputSpec::default()).is_err());
    }

    #[test]
    fn predicates() {
        assert!(Task::Fb(2).success(&summary(&[5.0, 6.0, 1.0, 2.0, 3.0])));
        assert!(!Task::Fb(2).success(&summary(&[5.0, 2.0, 1.0, 2.0, 3.0])));
        assert!(Task::Tc(2).success(&summary(&[6.0, 5.0, 1.0, 2.0, 3.0])));
        assert!(!Task::Tc(2).success(&summary(&[5.0, 6.0, 1.0, 2.0, 3.0])));
        assert!(!Task::Tc(3).success(&summary(&[6.0, 5.0, 1.0, 2.0, 3.0])));
        assert!(Task::Tc(4).success(&summary(&[9.0, 8.0, 7.0, 6.0, 1.0])));
        assert!(Task::Tc(1).success(&summary(&[1.0, 2.0, 3.0, 4.0, 5.0])));
        assert!(Task::Mixed.success(&summary(&[1.0, 3.0, 2.0])));
    }
}
