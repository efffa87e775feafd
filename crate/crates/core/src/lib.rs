//! Chemical neuron: a spiking neuron with Hebbian learning written as
//! mass-action chemistry, plus the stochastic simulator and experiment
//! harness used to train and probe it.

pub mod crn;
pub mod dsl;
pub mod experiments;
pub mod model;
pub mod stimulus;

pub use crn::{BolusEvent, BolusSchedule, NetworkSpec, Simulator, SpeciesId, Trajectory};
pub use dsl::{parse_network, print_network};
pub use model::{build_basic_cn, build_bio_cn, build_hill_cn, BasicConfig, BioConfig, CnNetwork};
