//! Bolus timing: independent Poisson streams, delayed followers of another
//! channel, and fixed patterns.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crn::{BolusEvent, BolusSchedule, CrnError, SpeciesId};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProcessKind {
    /// Exponential gaps with mean `1 / frequency`.
    Poisson { frequency: f64 },
    /// One bolus per bolus of channel `of`, delayed by `delta + xi` with
    /// `xi ~ Normal(0, sigma2)`. Negative delays are clamped to zero.
    Follower { of: usize, delta: f64, sigma2: f64 },
    Fixed { times: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelProcess {
    pub channel: usize,
    #[serde(flatten)]
    pub kind: ProcessKind,
}

impl ChannelProcess {
    pub fn poisson(channel: usize, frequency: f64) -> Self {
        Self { channel, kind: ProcessKind::Poisson { frequency } }
    }

    pub fn follower(channel: usize, of: usize, delta: f64, sigma2: f64) -> Self {
        Self { channel, kind: ProcessKind::Follower { of, delta, sigma2 } }
    }

    pub fn fixed(channel: usize, times: Vec<f64>) -> Self {
        Self { channel, kind: ProcessKind::Fixed { times } }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum StimulusError {
    #[error("channel {channel}: frequency must be positive and finite, got {frequency}")]
    NonPositiveFrequency { channel: usize, frequency: f64 },
    #[error("channel {channel}: delay parameters must be finite and nonnegative")]
    InvalidDelay { channel: usize },
    #[error("channel {channel}: fixed times must be finite and sorted")]
    UnsortedTimes { channel: usize },
    #[error("follower channels form a cycle through channel {0}")]
    CyclicFollowers(usize),
    #[error("channel {channel} follows channel {of}, which has no process")]
    UnknownParent { channel: usize, of: usize },
    #[error("channel {0} has more than one process")]
    DuplicateChannel(usize),
    #[error("channel {channel} has no target species ({available} given)")]
    MissingTarget { channel: usize, available: usize },
    #[error("end time must be positive and finite, got {0}")]
    InvalidEndTime(f64),
    #[error(transparent)]
    Network(#[from] CrnError),
}

/// Mixed into the master seed so stimulus streams differ from the
/// simulation streams derived from the same seed.
const STIMULUS_SALT: u64 = 0x5eed_0fb0_1a55_c0de;

fn channel_rng(seed: u64, channel: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ STIMULUS_SALT);
    rng.set_stream(channel as u64);
    rng
}

fn validate(processes: &[ChannelProcess], t_end: f64) -> Result<Vec<usize>, StimulusError> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(StimulusError::InvalidEndTime(t_end));
    }
    let n = processes.iter().map(|p| p.channel + 1).max().unwrap_or(0);
    let mut slot = vec![None; n];
    for (i, p) in processes.iter().enumerate() {
        if slot[p.channel].replace(i).is_some() {
            return Err(StimulusError::DuplicateChannel(p.channel));
        }
        match &p.kind {
            ProcessKind::Poisson { frequency } => {
                if !(frequency.is_finite() && *frequency > 0.0) {
                    return Err(StimulusError::NonPositiveFrequency { channel: p.channel, frequency: *frequency });
                }
            }
            ProcessKind::Follower { delta, sigma2, .. } => {
                if !(delta.is_finite() && *delta >= 0.0 && sigma2.is_finite() && *sigma2 >= 0.0) {
                    return Err(StimulusError::InvalidDelay { channel: p.channel });
                }
            }
            ProcessKind::Fixed { times } => {
                if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[0] > w[1]) {
                    return Err(StimulusError::UnsortedTimes { channel: p.channel });
                }
            }
        }
    }
    for p in processes {
        if let ProcessKind::Follower { of, .. } = p.kind {
            if of >= n || slot[of].is_none() {
                return Err(StimulusError::UnknownParent { channel: p.channel, of });
            }
        }
    }
    // Topological order over the follower edges (parent before child).
    let parent = |i: usize| match processes[i].kind {
        ProcessKind::Follower { of, .. } => slot[of],
        _ => None,
    };
    let mut state = vec![0u8; processes.len()];
    let mut order = Vec::with_capacity(processes.len());
    for start in 0..processes.len() {
        let mut path = Vec::new();
        let mut cur = Some(start);
        while let Some(i) = cur {
            match state[i] {
                2 => break,
                1 => return Err(StimulusError::CyclicFollowers(processes[i].channel)),
                _ => {
                    state[i] = 1;
                    path.push(i);
                    cur = parent(i);
                }
            }
        }
        for &i in path.iter().rev() {
            state[i] = 2;
            order.push(i);
        }
    }
    Ok(order)
}

/// Bolus times per channel (index = channel), each sorted and inside
/// `[0, t_end]`. Channels without a process get no events.
pub fn generate_times(processes: &[ChannelProcess], t_end: f64, seed: u64) -> Result<Vec<Vec<f64>>, StimulusError> {
    let order = validate(processes, t_end)?;
    let n = processes.iter().map(|p| p.channel + 1).max().unwrap_or(0);
    let mut times: Vec<Vec<f64>> = vec![Vec::new(); n];
    for i in order {
        let p = &processes[i];
        let mut rng = channel_rng(seed, p.channel);
        let out = match &p.kind {
            ProcessKind::Poisson { frequency } => {
                let gap = Exp::new(*frequency).expect("validated frequency");
                let mut v = Vec::new();
                let mut t = gap.sample(&mut rng);
                while t <= t_end {
                    v.push(t);
                    t += gap.sample(&mut rng);
                }
                v
            }
            ProcessKind::Follower { of, delta, sigma2 } => {
                let jitter = Normal::new(0.0, sigma2.sqrt()).expect("validated variance");
                let mut v: Vec<f64> = times[*of]
                    .iter()
                    .map(|&t| t + (delta + jitter.sample(&mut rng)).max(0.0))
                    .filter(|&t| t <= t_end)
                    .collect();
                v.sort_by(f64::total_cmp);
                v
            }
            ProcessKind::Fixed { times } => times.iter().copied().filter(|&t| (0.0..=t_end).contains(&t)).collect(),
        };
        times[p.channel] = out;
    }
    Ok(times)
}

/// Turns per-channel bolus times into injections of `beta` copies of the
/// channel's target species.
pub fn times_to_schedule(times: &[Vec<f64>], targets: &[SpeciesId], beta: u64) -> Result<BolusSchedule, StimulusError> {
    let mut events = Vec::new();
    for (channel, ts) in times.iter().enumerate() {
        if ts.is_empty() {
            continue;
        }
        let species = *targets.get(channel).ok_or(StimulusError::MissingTarget {
            channel,
            available: targets.len(),
        })?;
        events.extend(ts.iter().map(|&time| BolusEvent { time, species, count: beta }));
    }
    Ok(BolusSchedule::new(events)?)
}

/// Draws the bolus times and converts them to a schedule on the channel
/// targets (normally the precursor species `I_n`).
pub fn generate_schedule(
    processes: &[ChannelProcess],
    targets: &[SpeciesId],
    beta: u64,
    t_end: f64,
    seed: u64,
) -> Result<BolusSchedule, StimulusError> {
    let times = generate_times(processes, t_end, seed)?;
    times_to_schedule(&times, targets, beta)
}

/// Deterministic two-channel training pattern: a probe on channel 2 alone,
/// a run of paired boluses on both channels, and a final probe on channel 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AssociativePattern {
    pub first_probe: f64,
    /// Gap between the first probe and the first pair, and between the last
    /// pair and the final probe.
    pub probe_gap: f64,
    pub pairs: usize,
    pub pair_spacing: f64,
    /// Channel-2 bolus of each pair comes this long after channel 1.
    pub jitter: f64,
}

impl Default for AssociativePattern {
    fn default() -> Self {
        Self {
            first_probe: 0.0,
            probe_gap: 2.0,
            pairs: 5,
            pair_spacing: 2.0,
            jitter: 0.0,
        }
    }
}

/// Bolus times of an [`AssociativePattern`] (index 0 = channel 1).
#[derive(Clone, Debug, PartialEq)]
pub struct AssociativeTimes {
    pub first_probe: f64,
    pub pairs: Vec<f64>,
    pub final_probe: f64,
    pub channels: [Vec<f64>; 2],
}

impl AssociativePattern {
    pub fn times(&self) -> AssociativeTimes {
        let pairs: Vec<f64> = (0..self.pairs)
            .map(|i| self.first_probe + self.probe_gap + i as f64 * self.pair_spacing)
            .collect();
        let final_probe = match pairs.last() {
            Some(&t) => t + self.probe_gap,
            None => self.first_probe + self.probe_gap,
        };
        let ch1 = pairs.clone();
        let mut ch2 = vec![self.first_probe];
        ch2.extend(pairs.iter().map(|t| t + self.jitter));
        ch2.push(final_probe);
        AssociativeTimes {
            first_probe: self.first_probe,
            pairs,
            final_probe,
            channels: [ch1, ch2],
        }
    }

    /// Time after which nothing more happens in the pattern.
    pub fn last_event(&self) -> f64 {
        self.times().final_probe
    }
}

/// Schedule for an associative pattern on two channel targets.
pub fn associative_schedule(
    pattern: &AssociativePattern,
    targets: &[SpeciesId],
    beta: u64,
) -> Result<BolusSchedule, StimulusError> {
    let t = pattern.times();
    times_to_schedule(&t.channels, targets, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_parent_exact_delay() {
        let p = [ChannelProcess::fixed(0, vec![0.0]), ChannelProcess::follower(1, 0, 0.0047, 0.0)];
        let t = generate_times(&p, 1.0, 3).unwrap();
        assert_eq!(t[1], vec![0.0047]);
    }

    #[test]
    fn empty_fixed_channel() {
        let t = generate_times(&[ChannelProcess::fixed(0, vec![])], 5.0, 0).unwrap();
        assert!(t[0].is_empty());
        let s = generate_schedule(&[ChannelProcess::fixed(0, vec![])], &[SpeciesId(0)], 3, 5.0, 0).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn events_outside_window_dropped() {
        let p = [ChannelProcess::fixed(0, vec![0.5, 0.99]), ChannelProcess::follower(1, 0, 0.1, 0.0)];
        let t = generate_times(&p, 1.0, 0).unwrap();
        assert_eq!(t[1], vec![0.6]);
        let t = generate_times(&[ChannelProcess::fixed(0, vec![-1.0, 0.5, 2.0])], 1.0, 0).unwrap();
        assert_eq!(t[0], vec![0.5]);
    }

    #[test]
    fn negative_delays_clamp_to_parent() {
        let p = [ChannelProcess::fixed(0, (0..2000).map(|i| i as f64).collect()), ChannelProcess::follower(1, 0, 0.0, 1.0)];
        let t = generate_times(&p, 3000.0, 9).unwrap();
        let zero = t[1].iter().filter(|x| x.fract() == 0.0).count();
        // Half of a centred normal is negative.
        assert!((zero as f64 - 1000.0).abs() < 5.0 * 500f64.sqrt(), "{zero}");
        assert!(t[1].windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn cycles_and_bad_parameters() {
        let cyc = [ChannelProcess::follower(0, 1, 0.1, 0.0), ChannelProcess::follower(1, 0, 0.1, 0.0)];
        assert!(matches!(generate_times(&cyc, 1.0, 0), Err(StimulusError::CyclicFollowers(_))));
        let selfloop = [ChannelProcess::follower(0, 0, 0.1, 0.0)];
        assert!(matches!(generate_times(&selfloop, 1.0, 0), Err(StimulusError::CyclicFollowers(0))));
        assert!(matches!(
            generate_times(&[ChannelProcess::poisson(0, 0.0)], 1.0, 0),
            Err(StimulusError::NonPositiveFrequency { .. })
        ));
        assert!(matches!(
            generate_times(&[ChannelProcess::follower(0, 3, 0.1, 0.0)], 1.0, 0),
            Err(StimulusError::UnknownParent { .. })
        ));
        assert!(matches!(
            generate_times(&[ChannelProcess::poisson(0, 1.0), ChannelProcess::poisson(0, 2.0)], 1.0, 0),
            Err(StimulusError::DuplicateChannel(0))
        ));
        assert!(matches!(generate_times(&[], 0.0, 0), Err(StimulusError::InvalidEndTime(_))));
        assert!(matches!(
            generate_times(&[ChannelProcess::fixed(0, vec![2.0, 1.0])], 5.0, 0),
            Err(StimulusError::UnsortedTimes { .. })
        ));
    }

    #[test]
    fn chains_resolve_in_any_declaration_order() {
        let p = [
            ChannelProcess::follower(2, 1, 0.01, 0.0),
            ChannelProcess::follower(1, 0, 0.01, 0.0),
            ChannelProcess::fixed(0, vec![1.0]),
        ];
        let t = generate_times(&p, 5.0, 0).unwrap();
        assert!((t[2][0] - 1.02).abs() < 1e-12);
    }

    #[test]
    fn reproducible_per_seed() {
        let p = [ChannelProcess::poisson(0, 2.0), ChannelProcess::follower(1, 0, 0.0047, 1e-4)];
        assert_eq!(generate_times(&p, 50.0, 11).unwrap(), generate_times(&p, 50.0, 11).unwrap());
        assert_ne!(generate_times(&p, 50.0, 11).unwrap(), generate_times(&p, 50.0, 12).unwrap());
    }

    #[test]
    fn schedule_targets_channel_species() {
        let p = [ChannelProcess::fixed(0, vec![1.0]), ChannelProcess::fixed(1, vec![0.5])];
        let s = generate_schedule(&p, &[SpeciesId(4), SpeciesId(7)], 12, 2.0, 0).unwrap();
        let ev = s.events();
        assert_eq!((ev[0].species, ev[0].count, ev[0].time), (SpeciesId(7), 12, 0.5));
        assert_eq!(ev[1].species, SpeciesId(4));
        assert!(matches!(
            generate_schedule(&p, &[SpeciesId(0)], 1, 2.0, 0),
            Err(StimulusError::MissingTarget { channel: 1, .. })
        ));
    }

    #[test]
    fn associative_default_has_pairs_between_probes() {
        let pat = AssociativePattern::default();
        let t = pat.times();
        assert!(t.pairs.len() >= 3);
        assert!(t.pairs.iter().all(|&p| p > t.first_probe && p < t.final_probe));
        assert_eq!(t.channels[1].len(), t.pairs.len() + 2);
    }

    #[test]
    fn associative_variants() {
        let none = AssociativePattern { pairs: 0, ..Default::default() }.times();
        assert!(none.channels[0].is_empty());
        assert_eq!(none.channels[1].len(), 2);
        let t = AssociativePattern { jitter: 0.0, ..Default::default() }.times();
        assert_eq!(&t.channels[1][1..t.channels[1].len() - 1], &t.channels[0][..]);
        let s = associative_schedule(&AssociativePattern::default(), &[SpeciesId(0), SpeciesId(1)], 5).unwrap();
        assert_eq!(s.len(), 5 + 7);
    }
}
