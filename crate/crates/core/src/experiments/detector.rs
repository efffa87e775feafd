use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crn::{replicate_rng, NetworkSpec, Simulator, TimeAverage};
use crate::stimulus::{generate_schedule, ChannelProcess};

use super::{ExperimentError, Stat};

/// Steady mean count of one channel of the minimal detector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorChannel {
    pub frequency: f64,
    /// `f * beta / d`.
    pub expected: f64,
    /// Ensemble statistics of the per-seed time averages.
    pub observed: Stat,
}

/// Simulates `A_i -> 0` at rate `d`, with Poisson boluses of `beta`
/// molecules into each `A_i` at `frequencies[i]`, and returns the time
/// average of every `A_i` over `[10/d, t_end]` per seed.
///
/// A zero frequency gives a channel that never receives input.
pub fn minimal_detector_reference(
    frequencies: &[f64],
    beta: u64,
    d: f64,
    t_end: f64,
    seeds: &[u64],
) -> Result<Vec<DetectorChannel>, ExperimentError> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(ExperimentError::InvalidTask(format!("decay rate must be positive, got {d}")));
    }
    let transient = 10.0 / d;
    if seeds.is_empty() || !(t_end > transient) {
        return Err(ExperimentError::InvalidTask(format!(
            "need at least one seed and t_end > {transient}"
        )));
    }
    let mut b = NetworkSpec::builder();
    let species: Vec<_> = (1..=frequencies.len())
        .map(|i| {
            let s = b.add_species(&format!("A{i}"), 0)?;
            b.add_reaction(&[s], &[], d)?;
            Ok(s)
        })
        .collect::<Result<_, crate::crn::CrnError>>()?;
    let net = b.build();
    let driven: Vec<usize> = (0..frequencies.len()).filter(|&i| frequencies[i] > 0.0).collect();
    let processes: Vec<ChannelProcess> = driven
        .iter()
        .enumerate()
        .map(|(c, &i)| ChannelProcess::poisson(c, frequencies[i]))
        .collect();
    let targets: Vec<_> = driven.iter().map(|&i| species[i]).collect();

    let runs = seeds
        .par_iter()
        .map(|&seed| {
            let schedule = generate_schedule(&processes, &targets, beta, t_end, seed)?;
            let mut avg = TimeAverage::new(transient, t_end, &species)?;
            Simulator::new(&net, replicate_rng(seed, 0)).run(&schedule, t_end, &mut avg)?;
            Ok(avg.means()?)
        })
        .collect::<Result<Vec<Vec<f64>>, ExperimentError>>()?;

    Ok(frequencies
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let values: Vec<f64> = runs.iter().map(|r| r[i]).collect();
            DetectorChannel {
                frequency: f,
                expected: f * beta as f64 / d,
                observed: Stat::of(&values).expect("at least one seed"),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn silent_channel_stays_empty() {
        let r = minimal_detector_reference(&[0.0, 2.0], 10, 1.0, 40.0, &[1, 2]).unwrap();
        assert_eq!(r[0].observed.mean, 0.0);
        assert_eq!(r[1].expected, 20.0);
        assert!(r[1].observed.mean > 0.0);
    }

    #[test]
    fn rejects_bad_decay() {
        assert!(minimal_detector_reference(&[1.0], 1, 0.0, 10.0, &[1]).is_err());
    }
}
