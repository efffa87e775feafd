//! Builders for the chemical neuron in its three forms, and the equilibrium
//! oracle for its binding chain.
//!
//! * [`build_basic_cn`]: the micro-reversible mass-action neuron. Inputs `A_n`
//!   feed the internal state `B`, `B` drives a shared ladder `E_0 .. E_{m-1}`
//!   whose top state `Eact` is the learning signal, and `Eact` converts
//!   coincident inputs into weights `H_n`.
//! * [`build_bio_cn`]: the compartmental reading, where each channel is a cell
//!   with its own receptor ladder and a gene expressing the transporter `H`.
//! * [`build_hill_cn`]: the compartmental network with the ladders replaced
//!   by a Hill-modulated activation step.

mod activation;
mod basic;
mod bio;
mod config;

pub use activation::{
    activation_equilibrium, effective_hill_exponent, estimate_threshold, ThresholdEstimate,
    DEFAULT_THRESHOLD_CAP,
};
pub use basic::build_basic_cn;
pub use bio::{build_bio_cn, build_hill_cn, default_hill_theta};
pub use config::{
    BasicConfig, BasicRates, BioConfig, BioRates, ChainRates, CnConfig, DEFAULT_E_TOTAL,
};

use thiserror::Error;

use crate::crn::{hill, BolusEvent, CrnError, NetworkSpec, SpeciesId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid config field `{field}`: {message}")]
    InvalidConfig {
        field: &'static str,
        message: String,
    },
    #[error("activation probability stays below 1/2 for B up to {cap}")]
    ThresholdNotReached { cap: f64 },
    #[error(transparent)]
    Network(#[from] CrnError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Basic,
    Bio,
    Hill,
}

/// Species of one input channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChannelSpecies {
    /// Receives boluses and decays into `input`.
    pub precursor: SpeciesId,
    pub input: SpeciesId,
    pub weight: SpeciesId,
}

/// How the learning signal is read off the state.
#[derive(Clone, Debug, PartialEq)]
pub enum Signal {
    /// Sum of the counts of the active receptor species.
    Species(Vec<SpeciesId>),
    /// Expected number of active receptors, `receptors * Hill(B)`.
    Hill {
        ligand: SpeciesId,
        theta: f64,
        exponent: f64,
        receptors: f64,
    },
}

/// A built neuron: the network plus handles to its named roles.
#[derive(Clone, Debug, PartialEq)]
pub struct CnNetwork {
    pub spec: NetworkSpec,
    pub variant: Variant,
    pub channels: Vec<ChannelSpecies>,
    /// The internal state `B`.
    pub internal: SpeciesId,
    pub signal: Signal,
    pub bolus_size: u64,
}

impl CnNetwork {
    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn weight_species(&self) -> Vec<SpeciesId> {
        self.channels.iter().map(|c| c.weight).collect()
    }

    pub fn weights(&self, counts: &[u64]) -> Vec<u64> {
        self.channels.iter().map(|c| counts[c.weight.0]).collect()
    }

    pub fn signal_level(&self, counts: &[u64]) -> f64 {
        match &self.signal {
            Signal::Species(ids) => ids.iter().map(|s| counts[s.0] as f64).sum(),
            Signal::Hill {
                ligand,
                theta,
                exponent,
                receptors,
            } => receptors * hill(counts[ligand.0] as f64, *theta, *exponent),
        }
    }

    /// Signal level that counts as a triggered output: one active receptor
    /// for the explicit ladders, half of the receptors for the Hill form.
    pub fn default_trigger_level(&self) -> f64 {
        match &self.signal {
            Signal::Species(_) => 1.0,
            Signal::Hill { receptors, .. } => 0.5 * receptors,
        }
    }

    /// One bolus of the configured size on channel `n` (0-based).
    pub fn bolus(&self, channel: usize, time: f64) -> BolusEvent {
        BolusEvent {
            time,
            species: self.channels[channel].precursor,
            count: self.bolus_size,
        }
    }

    pub fn precursors(&self) -> Vec<SpeciesId> {
        self.channels.iter().map(|c| c.precursor).collect()
    }
}
