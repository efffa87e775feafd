use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crn::{replicate_rng, BolusEvent, Simulator};
use crate::model::{build_basic_cn, estimate_threshold, BasicConfig, CnNetwork, DEFAULT_THRESHOLD_CAP};

use super::{index_of_dispersion, run_task, ExperimentError, InputSpec, Protocol, Stat, Task};

/// How long the delay protocol keeps simulating after the second bolus.
pub const DELAY_FOLLOW_UP: f64 = 0.2;

/// One axis value of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub axis: f64,
    /// One entry per label of the owning [`SweepResult`]; `None` when no
    /// replicate produced a defined value.
    pub values: Vec<Option<Stat>>,
    /// Index of dispersion of the raw weights, when meaningful.
    pub dispersion: Option<Stat>,
    pub replicates: usize,
}

/// A line of results over one axis at a fixed series parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis_name: String,
    /// For example `m=5` or `k_b_decay=0.1`.
    pub series: String,
    pub labels: Vec<String>,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn axis(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.axis).collect()
    }

    /// Mean of `label` at each point.
    pub fn series_of(&self, label: &str) -> Vec<Option<f64>> {
        let i = self.labels.iter().position(|l| l == label);
        self.points
            .iter()
            .map(|p| i.and_then(|i| p.values[i].as_ref()).map(|s| s.mean))
            .collect()
    }

    /// Writes `axis,channel,value,stderr`, one row per point and label, and
    /// a row with channel `iod` where a dispersion is present. Missing
    /// values leave `value` and `stderr` empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "axis,channel,value,stderr")?;
        for p in &self.points {
            let iod = p.dispersion.clone().map(|d| ("iod", Some(d)));
            let rows = self.labels.iter().map(String::as_str).zip(p.values.iter().cloned()).chain(iod);
            for (label, value) in rows {
                match value {
                    Some(s) => writeln!(w, "{},{},{},{}", p.axis, label, s.mean, s.stderr)?,
                    None => writeln!(w, "{},{},,", p.axis, label)?,
                }
            }
        }
        Ok(())
    }
}

fn check_axis(values: &[f64], name: &str) -> Result<(), ExperimentError> {
    if values.is_empty() || values.windows(2).any(|w| !(w[0] < w[1])) || values.iter().any(|v| !v.is_finite()) {
        return Err(ExperimentError::InvalidSweep(format!("{name} must be a nonempty strictly increasing list")));
    }
    Ok(())
}

fn check_seeds(seeds: &[u64]) -> Result<(), ExperimentError> {
    if seeds.is_empty() {
        return Err(ExperimentError::InvalidSweep("need at least one seed".into()));
    }
    Ok(())
}

/// Bolus size for a fraction of the chain threshold: `max(1, round(f * theta))`.
pub fn bolus_for_fraction(config: &BasicConfig, m: usize, fraction: f64) -> Result<u64, ExperimentError> {
    let theta = estimate_threshold(m, &config.rates.chain(), DEFAULT_THRESHOLD_CAP)?.theta;
    Ok((fraction * theta).round().max(1.0) as u64)
}

fn weight_point(
    cn: &CnNetwork,
    task: Task,
    axis: f64,
    inputs: &InputSpec,
    protocol: &Protocol,
    seeds: &[u64],
) -> Result<SweepPoint, ExperimentError> {
    let runs = run_task(cn, task, inputs, protocol, seeds)?;
    let values = (0..cn.num_channels())
        .map(|c| Stat::of(&runs.iter().map(|r| r.summary.normalized[c]).collect::<Vec<_>>()))
        .collect();
    // A neuron whose weights all decayed to zero discriminates nothing.
    let iod: Vec<f64> = runs
        .iter()
        .filter_map(|r| match index_of_dispersion(&r.summary) {
            Err(ExperimentError::ZeroMeanWeight) => Some(0.0),
            v => v.ok(),
        })
        .collect();
    Ok(SweepPoint {
        axis,
        values,
        dispersion: Stat::of(&iod),
        replicates: seeds.len(),
    })
}

fn channel_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("H{i}")).collect()
}

/// Mixed task (correlated pair plus one fast channel) over bolus sizes given
/// as fractions of the threshold of each `m`. One result per `m`; values are
/// normalized weights.
pub fn sweep_bolus(
    m_list: &[usize],
    fractions: &[f64],
    base: &BasicConfig,
    inputs: &InputSpec,
    protocol: &Protocol,
    seeds: &[u64],
) -> Result<Vec<SweepResult>, ExperimentError> {
    check_axis(fractions, "bolus fractions")?;
    check_seeds(seeds)?;
    m_list
        .iter()
        .map(|&m| {
            let points = fractions
                .iter()
                .map(|&f| {
                    let mut cfg = base.clone();
                    cfg.channels = 3;
                    cfg.nonlinearity = m;
                    cfg.initial_weights.clear();
                    cfg.bolus_size = bolus_for_fraction(&cfg, m, f)?;
                    weight_point(&build_basic_cn(&cfg)?, Task::Mixed, f, inputs, protocol, seeds)
                })
                .collect::<Result<_, ExperimentError>>()?;
            Ok(SweepResult {
                axis_name: "bolus_fraction".into(),
                series: format!("m={m}"),
                labels: channel_labels(3),
                points,
            })
        })
        .collect()
}

/// Index of dispersion over chain lengths, one result per bolus fraction.
/// Values carry the normalized weights; the dispersion is the index.
pub fn sweep_iod(
    m_list: &[usize],
    fractions: &[f64],
    task: Task,
    base: &BasicConfig,
    inputs: &InputSpec,
    protocol: &Protocol,
    seeds: &[u64],
) -> Result<Vec<SweepResult>, ExperimentError> {
    let axis: Vec<f64> = m_list.iter().map(|&m| m as f64).collect();
    check_axis(&axis, "chain lengths")?;
    check_seeds(seeds)?;
    fractions
        .iter()
        .map(|&f| {
            let points = m_list
                .iter()
                .map(|&m| {
                    let mut cfg = base.clone();
                    cfg.nonlinearity = m;
                    cfg.bolus_size = bolus_for_fraction(&cfg, m, f)?;
                    weight_point(&build_basic_cn(&cfg)?, task, m as f64, inputs, protocol, seeds)
                })
                .collect::<Result<_, ExperimentError>>()?;
            Ok(SweepResult {
                axis_name: "m".into(),
                series: format!("bolus_fraction={f}"),
                labels: channel_labels(base.channels),
                points,
            })
        })
        .collect()
}

/// Series parameter of a delay sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DelayAxis {
    Nonlinearity(Vec<usize>),
    /// Removal rates of `B` at the base config's chain length.
    RemovalRate(Vec<f64>),
}

/// Weight gains of one delay trial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelayTrial {
    pub dh1: f64,
    pub dh2: f64,
}

impl DelayTrial {
    /// `dH1 / (dH1 + dH2)`, undefined when neither weight grew.
    pub fn h1_fraction(&self) -> Option<f64> {
        let total = self.dh1 + self.dh2;
        (total > 0.0).then(|| self.dh1 / total)
    }
}

/// Per-delay statistics of a delay sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelayPoint {
    pub delta: f64,
    pub h1_fraction: Option<Stat>,
    pub h2_fraction: Option<Stat>,
    /// H1 fraction from pairing independent single-bolus runs.
    pub baseline: Option<Stat>,
    /// Replicates with no weight gain at all.
    pub missing: usize,
    pub replicates: usize,
}

/// Bolus on channel 1 at time 0 and, unless `second` is false, on channel 2
/// at `delta`; the run stops `follow_up` after `delta`. Returns the weight
/// gains. Channels beyond the second are ignored.
pub fn delay_trial(
    cn: &CnNetwork,
    delta: f64,
    follow_up: f64,
    first: bool,
    second: bool,
    seed: u64,
    replicate: u64,
) -> Result<DelayTrial, ExperimentError> {
    let mut sim = Simulator::new(&cn.spec, replicate_rng(seed, replicate));
    let start = cn.weights(sim.counts());
    let events: Vec<BolusEvent> = [(first, 0, 0.0), (second, 1, delta)]
        .into_iter()
        .filter(|e| e.0)
        .map(|(_, ch, t)| cn.bolus(ch, t))
        .collect();
    for e in &events {
        sim.advance(e.time, &mut ());
        sim.inject(e)?;
    }
    sim.advance(delta + follow_up, &mut ());
    let end = cn.weights(sim.counts());
    Ok(DelayTrial {
        dh1: end[0] as f64 - start[0] as f64,
        dh2: end[1] as f64 - start[1] as f64,
    })
}

/// Statistics of `replicates` delay trials at one delay.
pub fn delay_point(cn: &CnNetwork, delta: f64, replicates: u64, seed: u64) -> Result<DelayPoint, ExperimentError> {
    // Streams: 2r for the paired run, 2r+1 for the two single-bolus runs.
    let trials = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let paired = delay_trial(cn, delta, DELAY_FOLLOW_UP, true, true, seed, 2 * r)?;
            let alone1 = delay_trial(cn, delta, DELAY_FOLLOW_UP, true, false, seed, 2 * r + 1)?;
            let alone2 = delay_trial(cn, 0.0, DELAY_FOLLOW_UP, false, true, seed, 2 * r + 1 + (1 << 40))?;
            Ok((
                paired,
                DelayTrial {
                    dh1: alone1.dh1,
                    dh2: alone2.dh2,
                },
            ))
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    let h1: Vec<f64> = trials.iter().filter_map(|t| t.0.h1_fraction()).collect();
    let h2: Vec<f64> = h1.iter().map(|f| 1.0 - f).collect();
    let base: Vec<f64> = trials.iter().filter_map(|t| t.1.h1_fraction()).collect();
    Ok(DelayPoint {
        delta,
        h1_fraction: Stat::of(&h1),
        h2_fraction: Stat::of(&h2),
        baseline: Stat::of(&base),
        missing: replicates as usize - h1.len(),
        replicates: replicates as usize,
    })
}

/// Two-channel delay protocol with both weights starting at zero.
///
/// For each series value and delay, `replicates` paired runs give the
/// fractions of the weight gain that went to each channel. Labels are
/// `H1_fraction`, `H2_fraction` and `baseline_H1_fraction`.
pub fn sweep_delay(
    axis: &DelayAxis,
    deltas: &[f64],
    base: &BasicConfig,
    replicates: u64,
    seed: u64,
) -> Result<Vec<SweepResult>, ExperimentError> {
    check_axis(deltas, "delays")?;
    if replicates == 0 || deltas[0] < 0.0 {
        return Err(ExperimentError::InvalidSweep("need replicates >= 1 and delays >= 0".into()));
    }
    let mut configs = Vec::new();
    let mut cfg = base.clone();
    cfg.channels = 2;
    cfg.initial_weights = vec![0, 0];
    match axis {
        DelayAxis::Nonlinearity(ms) => {
            for &m in ms {
                let mut c = cfg.clone();
                c.nonlinearity = m;
                configs.push((format!("m={m}"), c));
            }
        }
        DelayAxis::RemovalRate(ks) => {
            for &k in ks {
                let mut c = cfg.clone();
                c.rates.k_b_decay = k;
                configs.push((format!("k_b_decay={k}"), c));
            }
        }
    }
    let labels = vec!["H1_fraction".to_string(), "H2_fraction".into(), "baseline_H1_fraction".into()];
    configs
        .into_iter()
        .map(|(series, c)| {
            let cn = build_basic_cn(&c)?;
            let points = deltas
                .iter()
                .map(|&d| {
                    let p = delay_point(&cn, d, replicates, seed)?;
                    Ok(SweepPoint {
                        axis: d,
                        values: vec![p.h1_fraction, p.h2_fraction, p.baseline],
                        dispersion: None,
                        replicates: p.replicates,
                    })
                })
                .collect::<Result<_, ExperimentError>>()?;
            Ok(SweepResult {
                axis_name: "delta".into(),
                series,
                labels: labels.clone(),
                points,
            })
        })
        .collect()
}
