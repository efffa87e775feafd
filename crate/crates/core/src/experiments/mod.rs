//! Task runners and metrics: associative learning, frequency-bias and
//! correlation tasks, and parameter sweeps over bolus size, input delay and
//! nonlinearity.

mod associative;
mod detector;
mod metrics;
mod presets;
mod sweeps;
mod tasks;
mod trigger;

pub use associative::{associative_config, associative_rates, run_associative, AssociativeReport, ASSOC_BOLUS, ASSOC_NONLINEARITY};
pub use detector::{minimal_detector_reference, DetectorChannel};
pub use metrics::{index_of_dispersion, steady_state_weights, Stat, WeightSummary};
pub use presets::{
    bio_associative_config, bio_rates, bio_task_config, delay_config, fast_rates, task_config, BIO_BOLUS, BIO_NONLINEARITY,
    BIO_TIME_SCALE, DELAY_BOLUS, FAST_TIME_SCALE, FB_BOLUS, TC_BOLUS,
};
pub use sweeps::{
    bolus_for_fraction, delay_point, delay_trial, sweep_bolus, sweep_delay, sweep_iod, DelayAxis, DelayPoint, DelayTrial,
    SweepPoint, SweepResult, DELAY_FOLLOW_UP,
};
pub use tasks::{pass_rate, run_fb, run_task, run_tc, train, InputSpec, Protocol, Task, TaskRun};
pub use trigger::{detect_trigger, signal_trigger, TriggerInterval, TriggerObserver};

use thiserror::Error;

use crate::crn::CrnError;
use crate::model::ModelError;
use crate::stimulus::StimulusError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Stimulus(#[from] StimulusError),
    #[error(transparent)]
    Crn(#[from] CrnError),
    #[error("averaging window [{from}, {to}] is not covered by the trajectory")]
    WindowOutsideTrajectory { from: f64, to: f64 },
    #[error("index of dispersion is undefined for zero mean weight")]
    ZeroMeanWeight,
    #[error("invalid task: {0}")]
    InvalidTask(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}
