use serde::{Deserialize, Serialize};

use super::ModelError;

/// Rate constants of the mass-action neuron. Defaults are the reference
/// parameter set for the basic model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BasicRates {
    /// Precursor decay `I_n -> A_n`.
    pub k_ia: f64,
    pub k_ai: f64,
    /// Weight-independent input conversion `A_n <-> B`.
    pub k_ab: f64,
    pub k_ba: f64,
    /// Chain binding `B + E_i -> E_{i+1}`.
    pub k_plus: f64,
    /// Chain unbinding below the top state.
    pub k_minus: f64,
    /// Unbinding from the active form.
    pub k_minus_last: f64,
    pub k_ae: f64,
    pub k_ea: f64,
    pub k_eh: f64,
    pub k_he: f64,
    pub k_ah: f64,
    pub k_ha: f64,
    pub k_hb: f64,
    pub k_bh: f64,
    pub k_h_decay: f64,
    pub k_b_decay: f64,
}

impl Default for BasicRates {
    fn default() -> Self {
        Self {
            k_ia: 10.0,
            k_ai: 1e-6,
            k_ab: 0.1,
            k_ba: 1e-6,
            k_plus: 1.0,
            k_minus: 5.0,
            k_minus_last: 0.5,
            k_ae: 0.05,
            k_ea: 1e-6,
            k_eh: 100.0,
            k_he: 1e-6,
            k_ah: 0.001,
            k_ha: 1e-6,
            k_hb: 100.0,
            k_bh: 1e-6,
            k_h_decay: 0.0003,
            k_b_decay: 0.1,
        }
    }
}

impl BasicRates {
    pub fn chain(&self) -> ChainRates {
        ChainRates {
            k_plus: self.k_plus,
            k_minus: self.k_minus,
            k_minus_last: self.k_minus_last,
        }
    }

    fn named(&self) -> [(&'static str, f64); 17] {
        [
            ("k_ia", self.k_ia),
            ("k_ai", self.k_ai),
            ("k_ab", self.k_ab),
            ("k_ba", self.k_ba),
            ("k_plus", self.k_plus),
            ("k_minus", self.k_minus),
            ("k_minus_last", self.k_minus_last),
            ("k_ae", self.k_ae),
            ("k_ea", self.k_ea),
            ("k_eh", self.k_eh),
            ("k_he", self.k_he),
            ("k_ah", self.k_ah),
            ("k_ha", self.k_ha),
            ("k_hb", self.k_hb),
            ("k_bh", self.k_bh),
            ("k_h_decay", self.k_h_decay),
            ("k_b_decay", self.k_b_decay),
        ]
    }
}

/// Rate constants of the compartmental (cell-like) neuron.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BioRates {
    pub k_ia: f64,
    pub k_ai: f64,
    /// Receptor chain; the compartmental parameter set does not list these,
    /// so they default to the basic model's values.
    pub k_plus: f64,
    pub k_minus: f64,
    pub k_minus_last: f64,
    /// `Eact + A -> EactA`.
    pub k_ae: f64,
    pub k_ea: f64,
    /// `EactA -> Eact + Astar`.
    pub k_astar_e: f64,
    pub k_e_astar: f64,
    /// Spontaneous deactivation `Astar -> A`.
    pub k_astar_a: f64,
    pub k_a_astar: f64,
    /// Promoter binding `h0 + Astar -> h`.
    pub k_astar_h: f64,
    pub k_h_astar: f64,
    /// Basal expression `h0 -> h0 + H`.
    pub k_leak: f64,
    /// Activated expression `h -> h + H`.
    pub k_h: f64,
    pub k_ah: f64,
    pub k_ha: f64,
    pub k_hb: f64,
    pub k_bh: f64,
    pub k_h_decay: f64,
    pub k_b_decay: f64,
    /// Exponent of the Hill approximation of the receptor chain.
    pub hill_exponent: f64,
}

impl Default for BioRates {
    fn default() -> Self {
        let basic = BasicRates::default();
        Self {
            k_ia: 10.0,
            k_ai: 1e-6,
            k_plus: basic.k_plus,
            k_minus: basic.k_minus,
            k_minus_last: basic.k_minus_last,
            k_ae: 0.2,
            k_ea: 1e-6,
            k_astar_e: 0.2,
            k_e_astar: 1e-6,
            k_astar_a: 0.05,
            k_a_astar: 1e-6,
            k_astar_h: 1.0,
            k_h_astar: 0.1,
            k_leak: 0.0001,
            k_h: 1.0,
            k_ah: 0.03,
            k_ha: 1e-6,
            k_hb: 100.0,
            k_bh: 1e-6,
            k_h_decay: 0.0003,
            k_b_decay: 0.1,
            hill_exponent: 10.0,
        }
    }
}

impl BioRates {
    pub fn chain(&self) -> ChainRates {
        ChainRates {
            k_plus: self.k_plus,
            k_minus: self.k_minus,
            k_minus_last: self.k_minus_last,
        }
    }

    fn named(&self) -> [(&'static str, f64); 22] {
        [
            ("k_ia", self.k_ia),
            ("k_ai", self.k_ai),
            ("k_plus", self.k_plus),
            ("k_minus", self.k_minus),
            ("k_minus_last", self.k_minus_last),
            ("k_ae", self.k_ae),
            ("k_ea", self.k_ea),
            ("k_astar_e", self.k_astar_e),
            ("k_e_astar", self.k_e_astar),
            ("k_astar_a", self.k_astar_a),
            ("k_a_astar", self.k_a_astar),
            ("k_astar_h", self.k_astar_h),
            ("k_h_astar", self.k_h_astar),
            ("k_leak", self.k_leak),
            ("k_h", self.k_h),
            ("k_ah", self.k_ah),
            ("k_ha", self.k_ha),
            ("k_hb", self.k_hb),
            ("k_bh", self.k_bh),
            ("k_h_decay", self.k_h_decay),
            ("k_b_decay", self.k_b_decay),
            ("hill_exponent", self.hill_exponent),
        ]
    }
}

/// Binding ladder rates: `B + E_i <-> E_{i+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainRates {
    pub k_plus: f64,
    pub k_minus: f64,
    pub k_minus_last: f64,
}

impl Default for ChainRates {
    fn default() -> Self {
        BasicRates::default().chain()
    }
}

/// Shape and rates of one chemical neuron.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CnConfig<R> {
    /// Number of input channels `N`.
    pub channels: usize,
    /// Length of the binding chain `m`.
    pub nonlinearity: usize,
    /// Precursor copies per bolus.
    pub bolus_size: u64,
    /// Initial unbound receptors (per compartment in the compartmental model).
    pub e_total: u64,
    /// Initial weights `H_n(0)`; empty means all zero.
    pub initial_weights: Vec<u64>,
    /// Copies of the weight gene per compartment (compartmental model only).
    pub gene_copies: u64,
    /// Adds the (negligible) reverse of the precursor decay in the basic model.
    pub reversible_precursor: bool,
    pub rates: R,
}

pub type BasicConfig = CnConfig<BasicRates>;
pub type BioConfig = CnConfig<BioRates>;

/// Default receptor count used by the training tasks.
pub const DEFAULT_E_TOTAL: u64 = 40;

impl<R: Default> CnConfig<R> {
    pub fn new(channels: usize, nonlinearity: usize) -> Self {
        Self {
            channels,
            nonlinearity,
            bolus_size: 1,
            e_total: DEFAULT_E_TOTAL,
            initial_weights: Vec::new(),
            gene_copies: 1,
            reversible_precursor: false,
            rates: R::default(),
        }
    }
}

impl<R> CnConfig<R> {
    pub fn with_bolus_size(mut self, beta: u64) -> Self {
        self.bolus_size = beta;
        self
    }

    pub fn with_e_total(mut self, e: u64) -> Self {
        self.e_total = e;
        self
    }

    pub fn with_weights(mut self, weights: Vec<u64>) -> Self {
        self.initial_weights = weights;
        self
    }

    pub fn with_rates(mut self, rates: R) -> Self {
        self.rates = rates;
        self
    }

    /// Initial weight of channel `n` (0-based).
    pub fn initial_weight(&self, n: usize) -> u64 {
        self.initial_weights.get(n).copied().unwrap_or(0)
    }

    fn validate_shape(&self) -> Result<(), ModelError> {
        let bad = |field: &'static str, message: String| Err(ModelError::InvalidConfig { field, message });
        if self.channels == 0 {
            return bad("channels", "need at least one input channel".into());
        }
        if self.nonlinearity == 0 {
            return bad("nonlinearity", "chain length must be at least 1".into());
        }
        if self.bolus_size == 0 {
            return bad("bolus_size", "bolus must contain at least one molecule".into());
        }
        if self.e_total == 0 {
            return bad("e_total", "need at least one receptor molecule".into());
        }
        if !self.initial_weights.is_empty() && self.initial_weights.len() != self.channels {
            return bad(
                "initial_weights",
                format!(
                    "expected {} entries, found {}",
                    self.channels,
                    self.initial_weights.len()
                ),
            );
        }
        Ok(())
    }
}

fn check_rates(named: &[(&'static str, f64)]) -> Result<(), ModelError> {
    for &(field, v) in named {
        if !(v.is_finite() && v >= 0.0) {
            return Err(ModelError::InvalidConfig {
                field,
                message: format!("rate must be finite and nonnegative, got {v}"),
            });
        }
    }
    Ok(())
}

impl BasicConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        self.validate_shape()?;
        check_rates(&self.rates.named())
    }
}

impl BioConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        self.validate_shape()?;
        if self.gene_copies == 0 {
            return Err(ModelError::InvalidConfig {
                field: "gene_copies",
                message: "each compartment needs at least one gene copy".into(),
            });
        }
        check_rates(&self.rates.named())
    }
}
