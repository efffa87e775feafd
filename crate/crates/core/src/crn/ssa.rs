//! Gillespie direct method with dependency-indexed propensity updates.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::{
    propensity, replicate_rng, BolusEvent, BolusSchedule, CrnError, NetworkSpec, Sampling, SimRng,
    SimState, Trajectory, TrajectoryRecorder,
};

/// Receives the piecewise-constant state of a stochastic run.
pub trait Observer {
    /// The state equals `counts` on `[from, to)`.
    fn hold(&mut self, from: f64, to: f64, counts: &[u64]);

    /// Called once with the final state at the end time (closed interval).
    fn finish(&mut self, _end: f64, _counts: &[u64]) {}
}

impl Observer for () {
    #[inline]
    fn hold(&mut self, _: f64, _: f64, _: &[u64]) {}
}

impl<A: Observer, B: Observer> Observer for (A, B) {
    #[inline]
    fn hold(&mut self, from: f64, to: f64, counts: &[u64]) {
        self.0.hold(from, to, counts);
        self.1.hold(from, to, counts);
    }

    fn finish(&mut self, end: f64, counts: &[u64]) {
        self.0.finish(end, counts);
        self.1.finish(end, counts);
    }
}

/// Exact time integral of selected species over a window.
#[derive(Clone, Debug)]
pub struct TimeAverage {
    from: f64,
    to: f64,
    species: Vec<usize>,
    integrals: Vec<f64>,
    covered: f64,
}

impl TimeAverage {
    pub fn new(from: f64, to: f64, species: &[super::SpeciesId]) -> Result<Self, CrnError> {
        if !(from.is_finite() && to.is_finite() && from >= 0.0 && to > from) {
            return Err(CrnError::InvalidWindow { from, to });
        }
        Ok(Self {
            from,
            to,
            species: species.iter().map(|s| s.0).collect(),
            integrals: vec![0.0; species.len()],
            covered: 0.0,
        })
    }

    pub fn window(&self) -> (f64, f64) {
        (self.from, self.to)
    }

    /// Time-averaged values, in the order the species were given.
    pub fn means(&self) -> Result<Vec<f64>, CrnError> {
        let span = self.to - self.from;
        if self.covered < span * (1.0 - 1e-9) {
            return Err(CrnError::InvalidWindow {
                from: self.from,
                to: self.to,
            });
        }
        Ok(self.integrals.iter().map(|v| v / span).collect())
    }
}

impl Observer for TimeAverage {
    #[inline]
    fn hold(&mut self, from: f64, to: f64, counts: &[u64]) {
        let lo = from.max(self.from);
        let hi = to.min(self.to);
        if hi > lo {
            let dt = hi - lo;
            self.covered += dt;
            for (acc, &s) in self.integrals.iter_mut().zip(&self.species) {
                *acc += counts[s] as f64 * dt;
            }
        }
    }
}

const REFRESH_INTERVAL: u32 = 1 << 12;

/// Stochastic simulator for one run. Owns its state and random stream.
pub struct Simulator<'a> {
    network: &'a NetworkSpec,
    state: SimState,
    rng: SimRng,
    propensities: Vec<f64>,
    total: f64,
    /// Net change per reaction over non-clamped species.
    deltas: Vec<Vec<(usize, i64)>>,
    /// Reactions whose propensity must be recomputed after each reaction fires.
    dependents: Vec<Vec<usize>>,
    /// Reactions reading each species.
    readers: Vec<Vec<usize>>,
    fired: u64,
    since_refresh: u32,
    max_drift: f64,
}

impl<'a> Simulator<'a> {
    pub fn new(network: &'a NetworkSpec, rng: SimRng) -> Self {
        Self::with_state(network, SimState::initial(network), rng)
            .expect("initial counts match the network")
    }

    pub fn with_state(network: &'a NetworkSpec, state: SimState, rng: SimRng) -> Result<Self, CrnError> {
        let ns = network.num_species();
        if state.counts.len() != ns {
            return Err(CrnError::DimensionMismatch {
                expected: ns,
                found: state.counts.len(),
            });
        }
        let reactions = network.reactions();
        let mut readers = vec![Vec::new(); ns];
        for (j, r) in reactions.iter().enumerate() {
            for s in r.inputs() {
                readers[s.0].push(j);
            }
        }
        let deltas: Vec<Vec<(usize, i64)>> = reactions
            .iter()
            .map(|r| {
                r.net_change()
                    .into_iter()
                    .filter(|(s, _)| !network.is_clamped(*s))
                    .map(|(s, d)| (s.0, d))
                    .collect()
            })
            .collect();
        let dependents = deltas
            .iter()
            .map(|delta| {
                let mut deps: Vec<usize> = delta
                    .iter()
                    .flat_map(|&(s, _)| readers[s].iter().copied())
                    .collect();
                deps.sort_unstable();
                deps.dedup();
                deps
            })
            .collect();
        let mut sim = Self {
            network,
            state,
            rng,
            propensities: vec![0.0; reactions.len()],
            total: 0.0,
            deltas,
            dependents,
            readers,
            fired: 0,
            since_refresh: 0,
            max_drift: 0.0,
        };
        sim.refresh();
        Ok(sim)
    }

    pub fn network(&self) -> &NetworkSpec {
        self.network
    }

    pub fn state(&self) -> &SimState {
        &self.state
    }

    pub fn time(&self) -> f64 {
        self.state.time
    }

    pub fn counts(&self) -> &[u64] {
        &self.state.counts
    }

    /// Number of reaction events fired so far.
    pub fn fired(&self) -> u64 {
        self.fired
    }

    /// Incrementally maintained total propensity.
    pub fn total_propensity(&self) -> f64 {
        self.total
    }

    /// Total propensity recomputed from scratch.
    pub fn recomputed_total(&self) -> f64 {
        self.network
            .reactions()
            .iter()
            .map(|r| propensity(r, &self.state.counts))
            .sum()
    }

    /// Largest relative gap seen between the incremental and recomputed
    /// totals at periodic refresh points.
    pub fn max_relative_drift(&self) -> f64 {
        self.max_drift
    }

    fn refresh(&mut self) {
        let counts = &self.state.counts;
        for (p, r) in self.propensities.iter_mut().zip(self.network.reactions()) {
            *p = propensity(r, counts);
        }
        let exact: f64 = self.propensities.iter().sum();
        if self.fired > 0 && exact > 0.0 {
            let drift = (self.total - exact).abs() / exact;
            self.max_drift = self.max_drift.max(drift);
        }
        self.total = exact;
        self.since_refresh = 0;
    }

    /// Injects a bolus at or after the current time.
    pub fn inject(&mut self, event: &BolusEvent) -> Result<(), CrnError> {
        self.state.apply_bolus(event)?;
        let reactions = self.network.reactions();
        for &j in &self.readers[event.species.0] {
            let p = propensity(&reactions[j], &self.state.counts);
            self.total += p - self.propensities[j];
            self.propensities[j] = p;
        }
        Ok(())
    }

    fn select(&mut self) -> usize {
        loop {
            let target = self.rng.random::<f64>() * self.total;
            let mut acc = 0.0;
            let mut last_positive = None;
            for (j, &p) in self.propensities.iter().enumerate() {
                if p > 0.0 {
                    acc += p;
                    last_positive = Some(j);
                    if target < acc {
                        return j;
                    }
                }
            }
            // Accumulated rounding left `target` past the end.
            if let Some(j) = last_positive {
                if target <= acc * (1.0 + 1e-12) || self.since_refresh == 0 {
                    return j;
                }
            }
            self.refresh();
        }
    }

    fn fire(&mut self, j: usize) {
        let counts = &mut self.state.counts;
        for &(s, d) in &self.deltas[j] {
            let c = counts[s] as i64 + d;
            debug_assert!(c >= 0, "negative count for species {s}");
            counts[s] = c as u64;
        }
        let reactions = self.network.reactions();
        for &k in &self.dependents[j] {
            let p = propensity(&reactions[k], counts);
            self.total += p - self.propensities[k];
            self.propensities[k] = p;
        }
        self.fired += 1;
        self.since_refresh += 1;
        if self.since_refresh >= REFRESH_INTERVAL {
            self.refresh();
        }
    }

    /// Fires reactions until `until`, leaving the clock at `until`.
    pub fn advance<O: Observer + ?Sized>(&mut self, until: f64, observer: &mut O) {
        while self.state.time < until {
            if self.total <= 0.0 {
                self.refresh();
                if self.total <= 0.0 {
                    observer.hold(self.state.time, until, &self.state.counts);
                    self.state.time = until;
                    break;
                }
            }
            let e: f64 = Exp1.sample(&mut self.rng);
            let next = self.state.time + e / self.total;
            if next >= until {
                observer.hold(self.state.time, until, &self.state.counts);
                self.state.time = until;
                break;
            }
            observer.hold(self.state.time, next, &self.state.counts);
            self.state.time = next;
            let j = self.select();
            self.fire(j);
        }
    }

    /// Runs to `t_end`, applying every scheduled bolus with time in
    /// `[now, t_end]`. Boluses after `t_end` are ignored.
    pub fn run<O: Observer + ?Sized>(
        &mut self,
        schedule: &BolusSchedule,
        t_end: f64,
        observer: &mut O,
    ) -> Result<(), CrnError> {
        if !(t_end.is_finite() && t_end >= self.state.time) {
            return Err(CrnError::InvalidEndTime(t_end));
        }
        for event in schedule.events().iter().filter(|e| e.time <= t_end) {
            if event.time < self.state.time {
                return Err(CrnError::BolusInPast {
                    event: event.time,
                    now: self.state.time,
                });
            }
            self.advance(event.time, observer);
            self.inject(event)?;
        }
        self.advance(t_end, observer);
        observer.finish(t_end, &self.state.counts);
        Ok(())
    }
}

/// Runs one exact stochastic trajectory from the network's initial counts.
///
/// Boluses at exactly `t_end` are applied before the final sample; later
/// boluses are ignored. Same seed, network and schedule give identical output.
pub fn ssa_run(
    network: &NetworkSpec,
    schedule: &BolusSchedule,
    t_end: f64,
    seed: u64,
    sampling: &Sampling,
) -> Result<Trajectory, CrnError> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(CrnError::InvalidEndTime(t_end));
    }
    let mut recorder = TrajectoryRecorder::new(network, sampling)?;
    let mut sim = Simulator::new(network, replicate_rng(seed, 0));
    sim.run(schedule, t_end, &mut recorder)?;
    Ok(recorder.into_trajectory())
}
