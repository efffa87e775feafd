use crate::crn::{NetworkBuilder, NetworkSpec, SpeciesId};

use super::{BasicConfig, ChainRates, ChannelSpecies, CnNetwork, ModelError, Signal, Variant};

/// Declares a receptor ladder `[E_0, .., E_{m-1}, active]` with all
/// `receptors` in the unbound state.
pub(super) fn chain_species(
    b: &mut NetworkBuilder,
    m: usize,
    receptors: u64,
    name: impl Fn(usize) -> String,
    active_name: &str,
) -> Result<Vec<SpeciesId>, ModelError> {
    let mut ladder = Vec::with_capacity(m + 1);
    for i in 0..m {
        ladder.push(b.add_species(&name(i), if i == 0 { receptors } else { 0 })?);
    }
    ladder.push(b.add_species(active_name, 0)?);
    Ok(ladder)
}

/// Adds `B + ladder[i] <-> ladder[i+1]` for every rung.
pub(super) fn chain_reactions(
    b: &mut NetworkBuilder,
    internal: SpeciesId,
    ladder: &[SpeciesId],
    rates: ChainRates,
) -> Result<(), ModelError> {
    let m = ladder.len() - 1;
    for i in 0..m {
        let reverse = if i + 1 == m { rates.k_minus_last } else { rates.k_minus };
        b.add_reversible(&[internal, ladder[i]], &[ladder[i + 1]], rates.k_plus, reverse)?;
    }
    Ok(())
}

/// Builds the mass-action neuron for `config.channels` inputs and chain
/// length `config.nonlinearity`.
///
/// Species (`5N + m + 2`): `B`, `E0..E{m-1}`, `Eact`, and per channel `n`
/// (1-based) `I{n}`, `A{n}`, `AEact{n}`, `AH{n}`, `H{n}`. Reactions
/// (`12N + 2m + 1`, plus `N` with `reversible_precursor`) are listed per
/// channel input, then the ladder, learning, and leaks.
pub fn build_basic_cn(config: &BasicConfig) -> Result<CnNetwork, ModelError> {
    config.validate()?;
    let r = &config.rates;
    let n_ch = config.channels;
    let m = config.nonlinearity;
    let mut b = NetworkSpec::builder();

    let internal = b.add_species("B", 0)?;
    let mut channels = Vec::with_capacity(n_ch);
    let mut complexes = Vec::with_capacity(n_ch);
    let ladder = chain_species(&mut b, m, config.e_total, |i| format!("E{i}"), "Eact")?;
    let active = ladder[m];

    for n in 1..=n_ch {
        let precursor = b.add_species(&format!("I{n}"), 0)?;
        let input = b.add_species(&format!("A{n}"), 0)?;
        let complex_e = b.add_species(&format!("AEact{n}"), 0)?;
        let complex_h = b.add_species(&format!("AH{n}"), 0)?;
        let weight = b.add_species(&format!("H{n}"), config.initial_weight(n - 1))?;
        channels.push(ChannelSpecies {
            precursor,
            input,
            weight,
        });
        complexes.push((complex_e, complex_h));
    }

    // Input.
    for c in &channels {
        if config.reversible_precursor {
            b.add_reversible(&[c.precursor], &[c.input], r.k_ia, r.k_ai)?;
        } else {
            b.add_reaction(&[c.precursor], &[c.input], r.k_ia)?;
        }
        b.add_reversible(&[c.input], &[internal], r.k_ab, r.k_ba)?;
    }

    // Activation ladder.
    chain_reactions(&mut b, internal, &ladder, r.chain())?;

    // Learning.
    for (c, &(complex_e, complex_h)) in channels.iter().zip(&complexes) {
        b.add_reversible(&[c.input, active], &[complex_e], r.k_ae, r.k_ea)?;
        b.add_reversible(&[complex_e], &[c.weight, active], r.k_eh, r.k_he)?;
        b.add_reversible(&[c.input, c.weight], &[complex_h], r.k_ah, r.k_ha)?;
        b.add_reversible(&[complex_h], &[internal, c.weight], r.k_hb, r.k_bh)?;
    }

    // Leaks.
    for c in &channels {
        b.add_reaction(&[c.weight], &[], r.k_h_decay)?;
    }
    b.add_reaction(&[internal], &[], r.k_b_decay)?;

    Ok(CnNetwork {
        spec: b.build(),
        variant: Variant::Basic,
        channels,
        internal,
        signal: Signal::Species(vec![active]),
        bolus_size: config.bolus_size,
    })
}
