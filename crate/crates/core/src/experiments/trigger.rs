use serde::{Deserialize, Serialize};

use crate::crn::{Observer, Trajectory};
use crate::model::CnNetwork;

/// A maximal stretch of time with the learning signal at or above a level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriggerInterval {
    pub start: f64,
    pub end: f64,
}

impl TriggerInterval {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    pub fn overlaps(&self, from: f64, to: f64) -> bool {
        self.start < to && self.end >= from
    }
}

/// Trigger intervals read off a sampled signal column.
///
/// An interval starts at the first sample with value `>= min_level` and
/// ends at the next sample below it (or the last sample). Intervals shorter
/// than `min_duration` are dropped.
pub fn detect_trigger(
    trajectory: &Trajectory,
    column: usize,
    min_level: f64,
    min_duration: f64,
) -> Vec<TriggerInterval> {
    let times = trajectory.times();
    let values = trajectory.series(column);
    let mut out = Vec::new();
    let mut open: Option<f64> = None;
    for (&t, &v) in times.iter().zip(&values) {
        match (open, v >= min_level) {
            (None, true) => open = Some(t),
            (Some(start), false) => {
                out.push(TriggerInterval { start, end: t });
                open = None;
            }
            _ => {}
        }
    }
    if let (Some(start), Some(&end)) = (open, times.last()) {
        out.push(TriggerInterval { start, end });
    }
    out.retain(|i| i.duration() >= min_duration);
    out
}

/// Exact trigger intervals of a stochastic run, evaluated on every state
/// change rather than on samples.
pub struct TriggerObserver<F> {
    level: F,
    min_level: f64,
    intervals: Vec<TriggerInterval>,
    open: Option<TriggerInterval>,
}

impl<F: Fn(&[u64]) -> f64> TriggerObserver<F> {
    pub fn new(level: F, min_level: f64) -> Self {
        Self {
            level,
            min_level,
            intervals: Vec::new(),
            open: None,
        }
    }

    /// Closed intervals so far, including one still open at the last
    /// observed time, filtered by `min_duration`.
    pub fn intervals(&self, min_duration: f64) -> Vec<TriggerInterval> {
        self.intervals
            .iter()
            .chain(self.open.as_ref())
            .filter(|i| i.duration() >= min_duration)
            .copied()
            .collect()
    }
}

impl<F: Fn(&[u64]) -> f64> Observer for TriggerObserver<F> {
    fn hold(&mut self, from: f64, to: f64, counts: &[u64]) {
        if (self.level)(counts) >= self.min_level {
            match &mut self.open {
                Some(i) => i.end = to,
                None => self.open = Some(TriggerInterval { start: from, end: to }),
            }
        } else if let Some(i) = self.open.take() {
            self.intervals.push(i);
        }
    }
}

/// Trigger observer on a neuron's learning signal.
pub fn signal_trigger(cn: &CnNetwork, min_level: f64) -> TriggerObserver<impl Fn(&[u64]) -> f64 + '_> {
    TriggerObserver::new(move |c: &[u64]| cn.signal_level(c), min_level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crn::{NetworkSpec, Sampling};

    fn step_trajectory(values: &[u64]) -> Trajectory {
        let mut b = NetworkSpec::builder();
        b.add_species("Eact", 0).unwrap();
        let net = b.build();
        let mut t = Trajectory::new(&net, &Sampling::every(1.0), true);
        for (i, &v) in values.iter().enumerate() {
            t.push_row(i as f64, std::iter::once(v as f64));
        }
        t
    }

    #[test]
    fn flat_zero_has_no_trigger() {
        assert!(detect_trigger(&step_trajectory(&[0, 0, 0, 0]), 0, 1.0, 0.0).is_empty());
    }

    #[test]
    fn sustained_rise_is_one_interval() {
        let got = detect_trigger(&step_trajectory(&[0, 0, 3, 3, 0, 0]), 0, 1.0, 0.0);
        assert_eq!(got, vec![TriggerInterval { start: 2.0, end: 4.0 }]);
        assert!(detect_trigger(&step_trajectory(&[0, 0, 3, 3, 0]), 0, 1.0, 5.0).is_empty());
        let open = detect_trigger(&step_trajectory(&[0, 2, 2]), 0, 1.0, 0.0);
        assert_eq!(open, vec![TriggerInterval { start: 1.0, end: 2.0 }]);
    }

    #[test]
    fn observer_merges_and_splits() {
        let mut o = TriggerObserver::new(|c: &[u64]| c[0] as f64, 1.0);
        o.hold(0.0, 1.0, &[0]);
        o.hold(1.0, 2.0, &[3]);
        o.hold(2.0, 2.5, &[1]);
        o.hold(2.5, 4.0, &[0]);
        o.hold(4.0, 4.1, &[2]);
        assert_eq!(
            o.intervals(0.0),
            vec![TriggerInterval { start: 1.0, end: 2.5 }, TriggerInterval { start: 4.0, end: 4.1 }]
        );
        assert_eq!(o.intervals(0.5).len(), 1);
    }
}
