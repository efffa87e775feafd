use serde::{Deserialize, Serialize};

use crate::crn::{replicate_rng, BolusEvent, Simulator};
use crate::model::{BasicConfig, BasicRates, CnNetwork};
use crate::stimulus::AssociativePattern;

use super::presets::fast_rates;
use super::{ExperimentError, TriggerInterval, TriggerObserver};

/// Bolus size of the associative pattern.
pub const ASSOC_BOLUS: u64 = 20;

/// Rates for the associative pattern: the fast set with the
/// weight-independent conversion `A -> B` left slow, so that the speed at
/// which an input reaches `B` is set by its weight.
pub fn associative_rates() -> BasicRates {
    let base = BasicRates::default();
    BasicRates {
        k_ab: base.k_ab * 10.0,
        ..fast_rates()
    }
}

/// Chain length of the associative pattern.
pub const ASSOC_NONLINEARITY: usize = 5;

/// Two channels with `H1 = 100`, `H2 = 0`. A bolus through `H1` crosses
/// the threshold; a bolus through `H2` alone does not.
pub fn associative_config() -> BasicConfig {
    BasicConfig::new(2, ASSOC_NONLINEARITY)
        .with_weights(vec![100, 0])
        .with_bolus_size(ASSOC_BOLUS)
        .with_rates(associative_rates())
}

/// Outcome of one run of an [`AssociativePattern`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssociativeReport {
    pub seed: u64,
    /// The learning signal appeared between the first probe and the first pair.
    pub pre_probe_triggered: bool,
    /// The learning signal appeared after the final probe.
    pub post_probe_triggered: bool,
    /// `[dH1, dH2]` from each pair to the next event.
    pub pair_increments: Vec<[f64; 2]>,
    /// Weights just before every bolus event and at the end of the run.
    pub weight_trace: Vec<(f64, Vec<u64>)>,
    pub triggers: Vec<TriggerInterval>,
}

/// Runs the pattern on a two-channel neuron. The run ends `pattern.probe_gap`
/// after the final probe. A trigger is any stretch with the signal at or
/// above `min_level`.
pub fn run_associative(
    cn: &CnNetwork,
    pattern: &AssociativePattern,
    min_level: f64,
    seed: u64,
) -> Result<AssociativeReport, ExperimentError> {
    if cn.num_channels() < 2 {
        return Err(ExperimentError::InvalidTask(format!(
            "associative pattern needs two channels, got {}",
            cn.num_channels()
        )));
    }
    let times = pattern.times();
    let t_end = times.final_probe + pattern.probe_gap;
    let mut events: Vec<BolusEvent> = times
        .channels
        .iter()
        .enumerate()
        .flat_map(|(ch, ts)| ts.iter().map(move |&t| cn.bolus(ch, t)))
        .collect();
    events.sort_by(|a, b| a.time.total_cmp(&b.time));

    let mut sim = Simulator::new(&cn.spec, replicate_rng(seed, 0));
    let mut obs = TriggerObserver::new(|c: &[u64]| cn.signal_level(c), min_level);
    let mut trace = Vec::with_capacity(events.len() + 1);
    for e in &events {
        sim.advance(e.time, &mut obs);
        trace.push((e.time, cn.weights(sim.counts())[..2].to_vec()));
        sim.inject(e)?;
    }
    sim.advance(t_end, &mut obs);
    trace.push((t_end, cn.weights(sim.counts())[..2].to_vec()));

    // Weights at the first trace entry at or after `t`.
    let weights_at = |t: f64| -> &[u64] {
        &trace.iter().find(|(s, _)| *s >= t).unwrap_or(trace.last().unwrap()).1
    };
    let pair_increments = times
        .pairs
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let next = times.pairs.get(i + 1).copied().unwrap_or(times.final_probe);
            let (a, b) = (weights_at(t), weights_at(next));
            [b[0] as f64 - a[0] as f64, b[1] as f64 - a[1] as f64]
        })
        .collect();

    let triggers = obs.intervals(0.0);
    let first_pair = times.pairs.first().copied().unwrap_or(times.final_probe);
    Ok(AssociativeReport {
        seed,
        pre_probe_triggered: triggers.iter().any(|i| i.overlaps(times.first_probe, first_pair)),
        post_probe_triggered: triggers.iter().any(|i| i.overlaps(times.final_probe, t_end)),
        pair_increments,
        weight_trace: trace,
        triggers,
    })
}
