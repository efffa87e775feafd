//! Mean-field rate equations integrated with an embedded Dormand–Prince 5(4)
//! pair. Boluses are applied as jumps in the state.

use super::{
    mean_field_flux, BolusSchedule, CrnError, NetworkSpec, Sampling, Trajectory,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    /// Smallest accepted step before the run is reported as failed.
    pub min_step: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-9,
            initial_step: 1e-4,
            min_step: 1e-14,
        }
    }
}

struct RateEquations<'a> {
    network: &'a NetworkSpec,
    deltas: Vec<Vec<(usize, f64)>>,
}

impl<'a> RateEquations<'a> {
    fn new(network: &'a NetworkSpec) -> Self {
        let deltas = network
            .reactions()
            .iter()
            .map(|r| {
                r.net_change()
                    .into_iter()
                    .filter(|(s, _)| !network.is_clamped(*s))
                    .map(|(s, d)| (s.0, d as f64))
                    .collect()
            })
            .collect();
        Self { network, deltas }
    }

    fn eval(&self, y: &[f64], dy: &mut [f64]) {
        dy.iter_mut().for_each(|v| *v = 0.0);
        for (r, delta) in self.network.reactions().iter().zip(&self.deltas) {
            let flux = mean_field_flux(r, y);
            if flux != 0.0 {
                for &(s, d) in delta {
                    dy[s] += d * flux;
                }
            }
        }
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Difference between the 5th and 4th order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Stepper<'a> {
    eqs: RateEquations<'a>,
    opts: OdeOptions,
    h: f64,
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    y_new: Vec<f64>,
}

impl<'a> Stepper<'a> {
    fn new(network: &'a NetworkSpec, opts: OdeOptions) -> Self {
        let n = network.num_species();
        Self {
            eqs: RateEquations::new(network),
            opts,
            h: opts.initial_step,
            k: std::array::from_fn(|_| vec![0.0; n]),
            tmp: vec![0.0; n],
            y_new: vec![0.0; n],
        }
    }

    /// One trial step of size `h`; returns the scaled error norm.
    fn trial(&mut self, y: &[f64], h: f64) -> f64 {
        let n = y.len();
        for stage in 0..7 {
            if stage == 0 {
                self.eqs.eval(y, &mut self.k[0]);
                continue;
            }
            for i in 0..n {
                let mut acc = y[i];
                for (j, a) in A[stage].iter().enumerate().take(stage) {
                    acc += h * a * self.k[j][i];
                }
                self.tmp[i] = acc;
            }
            let (_, tail) = self.k.split_at_mut(stage);
            self.eqs.eval(&self.tmp, &mut tail[0]);
            if stage == 6 {
                self.y_new.copy_from_slice(&self.tmp);
            }
        }
        let mut sum = 0.0;
        for i in 0..n {
            let err: f64 = h * (0..7).map(|j| E[j] * self.k[j][i]).sum::<f64>();
            let scale = self.opts.atol + self.opts.rtol * y[i].abs().max(self.y_new[i].abs());
            sum += (err / scale).powi(2);
        }
        if n == 0 {
            0.0
        } else {
            (sum / n as f64).sqrt()
        }
    }

    fn integrate(&mut self, y: &mut [f64], t0: f64, t1: f64) -> Result<(), CrnError> {
        let mut t = t0;
        while t < t1 {
            let remaining = t1 - t;
            let h = self.h.min(remaining);
            let err = self.trial(y, h);
            if err.is_finite() && err <= 1.0 {
                y.copy_from_slice(&self.y_new);
                t = if h >= remaining { t1 } else { t + h };
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // Do not let a short final step shrink the next segment's step.
                if h >= self.h * 0.999 || grow < 1.0 {
                    self.h = h * grow;
                }
            } else {
                let shrink = if err.is_finite() { (0.9 * err.powf(-0.25)).max(0.1) } else { 0.1 };
                self.h = h * shrink;
                if self.h < self.opts.min_step {
                    return Err(CrnError::StepSizeUnderflow { time: t });
                }
            }
        }
        Ok(())
    }
}

/// Integrates the deterministic mass-action rate equations to `t_end`.
///
/// Boluses are applied as instantaneous jumps; one at exactly a sample time
/// is visible in that sample.
pub fn ode_run(
    network: &NetworkSpec,
    schedule: &BolusSchedule,
    t_end: f64,
    sampling: &Sampling,
    opts: &OdeOptions,
) -> Result<Trajectory, CrnError> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(CrnError::InvalidEndTime(t_end));
    }
    sampling.validate()?;
    let mut traj = Trajectory::new(network, sampling, false);
    let columns: Vec<usize> = traj.columns().iter().map(|s| s.0).collect();
    let mut y: Vec<f64> = network.initial_counts().iter().map(|&c| c as f64).collect();
    let mut stepper = Stepper::new(network, *opts);
    let events = schedule.events();
    let mut next_event = 0;
    let mut k: u64 = 0;
    let sample_time = |k: u64| k as f64 * sampling.stride;
    let limit = t_end * (1.0 + 1e-12);
    let mut t = 0.0;
    loop {
        while next_event < events.len() && events[next_event].time <= t {
            let e = &events[next_event];
            y[e.species.0] += e.count as f64;
            next_event += 1;
        }
        while sample_time(k) <= t * (1.0 + 1e-12) && sample_time(k) <= limit {
            traj.push_row(sample_time(k), columns.iter().map(|&c| y[c]));
            k += 1;
        }
        if t >= t_end {
            break;
        }
        let mut stop = t_end;
        if sample_time(k) <= limit {
            stop = stop.min(sample_time(k));
        }
        if next_event < events.len() {
            stop = stop.min(events[next_event].time);
        }
        stepper.integrate(&mut y, t, stop)?;
        t = stop;
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crn::BolusEvent;

    #[test]
    fn linear_decay_matches_exponential() {
        let mut b = NetworkSpec::builder();
        let a = b.add_species("A", 100).unwrap();
        let c = b.add_species("B", 0).unwrap();
        b.add_reaction(&[a], &[c], 0.1).unwrap();
        let net = b.build();
        let traj = ode_run(&net, &BolusSchedule::empty(), 10.0, &Sampling::every(1.0), &OdeOptions::default()).unwrap();
        let last = traj.last_row().unwrap();
        let expected = 100.0 * (-1.0f64).exp();
        assert!(((last[0] - expected) / expected).abs() < 1e-6, "{}", last[0]);
        assert!((last[0] + last[1] - 100.0).abs() < 1e-9);
    }

    #[test]
    fn zero_rate_network_is_constant() {
        let mut b = NetworkSpec::builder();
        let a = b.add_species("A", 42).unwrap();
        let c = b.add_species("B", 3).unwrap();
        b.add_reaction(&[a, c], &[c], 0.0).unwrap();
        let net = b.build();
        let traj = ode_run(&net, &BolusSchedule::empty(), 5.0, &Sampling::every(0.5), &OdeOptions::default()).unwrap();
        for i in 0..traj.len() {
            assert_eq!(traj.row(i), &[42.0, 3.0]);
        }
    }

    #[test]
    fn symmetric_reversible_reaches_half() {
        let mut b = NetworkSpec::builder();
        let a = b.add_species("A", 100).unwrap();
        let c = b.add_species("B", 0).unwrap();
        b.add_reversible(&[a], &[c], 0.7, 0.7).unwrap();
        let net = b.build();
        let traj = ode_run(&net, &BolusSchedule::empty(), 40.0, &Sampling::every(10.0), &OdeOptions::default()).unwrap();
        let last = traj.last_row().unwrap();
        assert!((last[0] - 50.0).abs() < 1e-6 && (last[1] - 50.0).abs() < 1e-6);
    }

    #[test]
    fn bolus_is_a_jump() {
        let mut b = NetworkSpec::builder();
        let a = b.add_species("A", 0).unwrap();
        let net = b.build();
        let sched = BolusSchedule::new(vec![BolusEvent { time: 0.3, species: a, count: 5 }]).unwrap();
        let traj = ode_run(&net, &sched, 1.0, &Sampling::every(0.1), &OdeOptions::default()).unwrap();
        assert_eq!(traj.value_at(0, 0.25), Some(0.0));
        assert_eq!(traj.value_at(0, 0.3 + 1e-9), Some(5.0));
    }

    #[test]
    fn underflow_reports_time() {
        let mut b = NetworkSpec::builder();
        let a = b.add_species("A", 1).unwrap();
        b.add_reaction(&[a], &[a, a], 1.0).unwrap();
        let net = b.build();
        // An unreachable absolute tolerance forces the step size down.
        let opts = OdeOptions { rtol: 0.0, atol: 1e-300, initial_step: 1e-3, min_step: 1e-6 };
        let err = ode_run(&net, &BolusSchedule::empty(), 1.0, &Sampling::every(0.5), &opts).unwrap_err();
        assert!(matches!(err, CrnError::StepSizeUnderflow { time } if (0.0..1.0).contains(&time)));
    }
}
