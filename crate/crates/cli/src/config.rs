//! Flat key/value run configuration.
//!
//! Values are layered: subcommand preset, then the config file, then flags.

use std::path::Path;

use serde::{Deserialize, Serialize};

use chemneuron::experiments::{InputSpec, Protocol};
use chemneuron::model::{BasicConfig, BasicRates, BioConfig, BioRates};

/// Every key accepted in a config file. All are optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub channels: Option<usize>,
    pub nonlinearity: Option<usize>,
    pub bolus_size: Option<u64>,
    pub e_total: Option<u64>,
    pub initial_weights: Option<Vec<u64>>,
    pub gene_copies: Option<u64>,
    pub reversible_precursor: Option<bool>,
    pub hill_exponent: Option<f64>,

    pub transient: Option<f64>,
    pub window: Option<f64>,
    pub f_low: Option<f64>,
    pub f_high: Option<f64>,
    pub delta: Option<f64>,
    pub sigma2: Option<f64>,

    pub k_ia: Option<f64>,
    pub k_ai: Option<f64>,
    pub k_ab: Option<f64>,
    pub k_ba: Option<f64>,
    pub k_plus: Option<f64>,
    pub k_minus: Option<f64>,
    pub k_minus_last: Option<f64>,
    pub k_ae: Option<f64>,
    pub k_ea: Option<f64>,
    pub k_eh: Option<f64>,
    pub k_he: Option<f64>,
    pub k_ah: Option<f64>,
    pub k_ha: Option<f64>,
    pub k_hb: Option<f64>,
    pub k_bh: Option<f64>,
    pub k_h_decay: Option<f64>,
    pub k_b_decay: Option<f64>,
    pub k_astar_e: Option<f64>,
    pub k_e_astar: Option<f64>,
    pub k_astar_a: Option<f64>,
    pub k_a_astar: Option<f64>,
    pub k_astar_h: Option<f64>,
    pub k_h_astar: Option<f64>,
    pub k_leak: Option<f64>,
    pub k_h: Option<f64>,
}

/// A config file that failed to parse, with the 1-based line of the error.
#[derive(Debug)]
pub struct ConfigError {
    pub path: String,
    pub line: usize,
    pub column: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.path, self.line)?;
        if let Some(c) = self.column {
            write!(f, ":{c}")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            path: display.clone(),
            line: 0,
            column: None,
            message: e.to_string(),
        })?;
        Self::parse(&text).map_err(|(line, message)| ConfigError {
            path: display,
            line,
            column: None,
            message,
        })
    }

    pub fn parse(text: &str) -> Result<Self, (usize, String)> {
        toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
                .unwrap_or(1);
            (line, e.message().to_string())
        })
    }

    pub fn apply_basic(&self, cfg: &mut BasicConfig) {
        self.apply_shape(cfg);
        let r: &mut BasicRates = &mut cfg.rates;
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { r.$f = v; })* };
        }
        set!(k_ia, k_ai, k_ab, k_ba, k_plus, k_minus, k_minus_last, k_ae, k_ea, k_eh, k_he, k_ah, k_ha, k_hb, k_bh, k_h_decay, k_b_decay);
    }

    pub fn apply_bio(&self, cfg: &mut BioConfig) {
        self.apply_shape(cfg);
        let r: &mut BioRates = &mut cfg.rates;
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { r.$f = v; })* };
        }
        set!(
            k_ia, k_ai, k_plus, k_minus, k_minus_last, k_ae, k_ea, k_astar_e, k_e_astar, k_astar_a, k_a_astar,
            k_astar_h, k_h_astar, k_leak, k_h, k_ah, k_ha, k_hb, k_bh, k_h_decay, k_b_decay, hill_exponent
        );
    }

    fn apply_shape<R>(&self, cfg: &mut chemneuron::model::CnConfig<R>) {
        if let Some(v) = self.channels {
            cfg.channels = v;
        }
        if let Some(v) = self.nonlinearity {
            cfg.nonlinearity = v;
        }
        if let Some(v) = self.bolus_size {
            cfg.bolus_size = v;
        }
        if let Some(v) = self.e_total {
            cfg.e_total = v;
        }
        if let Some(v) = &self.initial_weights {
            cfg.initial_weights = v.clone();
        }
        if let Some(v) = self.gene_copies {
            cfg.gene_copies = v;
        }
        if let Some(v) = self.reversible_precursor {
            cfg.reversible_precursor = v;
        }
    }

    pub fn apply_protocol(&self, p: &mut Protocol) {
        if let Some(v) = self.transient {
            p.transient = v;
        }
        if let Some(v) = self.window {
            p.window = v;
        }
    }

    pub fn apply_inputs(&self, i: &mut InputSpec) {
        if let Some(v) = self.f_low {
            i.f_low = v;
        }
        if let Some(v) = self.f_high {
            i.f_high = v;
        }
        if let Some(v) = self.delta {
            i.delta = v;
        }
        if let Some(v) = self.sigma2 {
            i.sigma2 = v;
        }
    }
}
