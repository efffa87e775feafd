//! Generic mass-action reaction networks: exact stochastic simulation,
//! mean-field integration and timed bolus injections.

mod network;
mod ode;
mod rng;
mod schedule;
mod ssa;
mod trajectory;

pub use network::{
    hill, mean_field_flux, propensity, NetworkBuilder, NetworkSpec, RateModulator, Reaction,
    Species, SpeciesId,
};
pub use ode::{ode_run, OdeOptions};
pub use rng::{replicate_rng, SimRng};
pub use schedule::{BolusEvent, BolusSchedule, ScheduleParseError, SimState};
pub use ssa::{ssa_run, Observer, Simulator, TimeAverage};
pub use trajectory::{format_time, Sampling, Trajectory, TrajectoryRecorder};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CrnError {
    #[error("rate constant must be finite and nonnegative, got {0}")]
    InvalidRate(f64),
    #[error("modulator parameters must be finite and positive, got {0}")]
    InvalidModulator(f64),
    #[error("at most 2 reactants are supported, got {0}")]
    TooManyReactants(usize),
    #[error("at most 2 products are supported, got {0}")]
    TooManyProducts(usize),
    #[error("species {0} is not declared in the network")]
    UndeclaredSpecies(SpeciesId),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("unknown reaction index {0}")]
    UnknownReaction(usize),
    #[error("species `{0}` declared twice")]
    DuplicateSpecies(String),
    #[error("species names must be nonempty")]
    EmptyName,
    #[error("expected {expected} species counts, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("end time must be positive and finite, got {0}")]
    InvalidEndTime(f64),
    #[error("sampling stride must be positive and finite, got {0}")]
    InvalidStride(f64),
    #[error("bolus at t={event} precedes the current time t={now}")]
    BolusInPast { event: f64, now: f64 },
    #[error("bolus must inject a positive count at a finite time >= 0 (t={time}, count={count})")]
    InvalidBolus { time: f64, count: u64 },
    #[error("integration failed at t={time}: step size underflow")]
    StepSizeUnderflow { time: f64 },
    #[error("averaging window [{from}, {to}] is not inside the simulated interval")]
    InvalidWindow { from: f64, to: f64 },
}
