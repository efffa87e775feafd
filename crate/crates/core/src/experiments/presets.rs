//! Parameter sets used by the experiment runners.

use crate::model::{BasicConfig, BasicRates, BioConfig, BioRates};

/// Factor applied to every rate of the default set, except weight decay,
/// to obtain [`fast_rates`].
pub const FAST_TIME_SCALE: f64 = 1000.0;

/// Default rates with the input, binding-chain, learning and `B`-removal
/// reactions sped up by [`FAST_TIME_SCALE`]. Weight decay keeps its
/// default value.
///
/// With the default rates an input pulse and the `B` it produces persist
/// for about ten time units, so at 2 Hz per channel the pulses of different
/// channels always overlap and the learning signal never switches off. The
/// fast set shortens each pulse to a few hundredths of a time unit, which
/// makes individual coincidences resolvable at the task frequencies.
pub fn fast_rates() -> BasicRates {
    let p = BasicRates::default();
    let s = FAST_TIME_SCALE;
    BasicRates {
        k_ia: p.k_ia * s,
        k_ai: p.k_ai * s,
        k_ab: p.k_ab * s,
        k_ba: p.k_ba * s,
        k_plus: p.k_plus * s,
        k_minus: p.k_minus * s,
        k_minus_last: p.k_minus_last * s,
        k_ae: p.k_ae * s,
        k_ea: p.k_ea * s,
        k_eh: p.k_eh * s,
        k_he: p.k_he * s,
        k_ah: p.k_ah * s,
        k_ha: p.k_ha * s,
        k_hb: p.k_hb * s,
        k_bh: p.k_bh * s,
        k_h_decay: p.k_h_decay,
        k_b_decay: p.k_b_decay * s,
    }
}

/// Five-channel neuron on the fast rates, as used by the frequency and
/// correlation tasks.
pub fn task_config(nonlinearity: usize, bolus_size: u64) -> BasicConfig {
    BasicConfig::new(5, nonlinearity)
        .with_bolus_size(bolus_size)
        .with_rates(fast_rates())
}

/// Bolus size of the frequency-bias tasks.
pub const FB_BOLUS: u64 = 4;
/// Bolus size of the correlation tasks.
pub const TC_BOLUS: u64 = 8;

/// Bolus size of the two-bolus delay protocol.
pub const DELAY_BOLUS: u64 = 1500;

/// Two channels with zero initial weights on the default rates, for the
/// delay protocol.
pub fn delay_config(nonlinearity: usize) -> BasicConfig {
    BasicConfig::new(2, nonlinearity)
        .with_weights(vec![0, 0])
        .with_bolus_size(DELAY_BOLUS)
}

/// Factor applied to the compartmental rates by [`bio_rates`].
pub const BIO_TIME_SCALE: f64 = 30.0;

/// Compartmental rates sped up by [`BIO_TIME_SCALE`], with receptor
/// activation slowed twentyfold relative to the rest and weight decay
/// raised to `0.03`.
///
/// Slow activation lets a strongly weighted input pass into `B` before it
/// is activated, so that mainly the weakly weighted coincident input is
/// reinforced. The faster decay lets the weights settle within the
/// training run.
pub fn bio_rates() -> BioRates {
    let p = BioRates::default();
    let s = BIO_TIME_SCALE;
    BioRates {
        k_ia: p.k_ia * s,
        k_ai: p.k_ai * s,
        k_plus: p.k_plus * s,
        k_minus: p.k_minus * s,
        k_minus_last: p.k_minus_last * s,
        k_ae: p.k_ae * s * 0.05,
        k_ea: p.k_ea * s,
        k_astar_e: p.k_astar_e * s,
        k_e_astar: p.k_e_astar * s,
        k_astar_a: p.k_astar_a * s,
        k_a_astar: p.k_a_astar * s,
        k_astar_h: p.k_astar_h * s,
        k_h_astar: p.k_h_astar * s,
        k_leak: p.k_leak * s,
        k_h: p.k_h * s,
        k_ah: p.k_ah * s,
        k_ha: p.k_ha * s,
        k_hb: p.k_hb * s,
        k_bh: p.k_bh * s,
        k_h_decay: 0.03,
        k_b_decay: p.k_b_decay * s,
        hill_exponent: 10.0,
    }
}

/// Receptor chain length whose threshold the Hill step uses.
pub const BIO_NONLINEARITY: usize = 3;
/// Bolus size for the compartmental neuron.
pub const BIO_BOLUS: u64 = 3;

/// Five compartments on [`bio_rates`], all weights starting at zero.
pub fn bio_task_config() -> BioConfig {
    BioConfig::new(5, BIO_NONLINEARITY)
        .with_bolus_size(BIO_BOLUS)
        .with_rates(bio_rates())
}

/// Two compartments on [`bio_rates`] with `H1 = 100`, `H2 = 0`.
pub fn bio_associative_config() -> BioConfig {
    BioConfig::new(2, BIO_NONLINEARITY)
        .with_weights(vec![100, 0])
        .with_bolus_size(BIO_BOLUS)
        .with_rates(bio_rates())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::estimate_threshold;
    use crate::model::DEFAULT_THRESHOLD_CAP;

    #[test]
    fn scaling_keeps_weight_decay_and_threshold() {
        let f = fast_rates();
        let p = BasicRates::default();
        assert_eq!(f.k_h_decay, p.k_h_decay);
        assert_eq!(f.k_b_decay, p.k_b_decay * FAST_TIME_SCALE);
        // Only ratios enter the binding equilibrium.
        for m in [1, 3, 5] {
            let a = estimate_threshold(m, &f.chain(), DEFAULT_THRESHOLD_CAP).unwrap().theta;
            let b = estimate_threshold(m, &p.chain(), DEFAULT_THRESHOLD_CAP).unwrap().theta;
            assert!((a - b).abs() < 1e-5);
        }
    }
}
