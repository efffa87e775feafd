use crate::crn::{NetworkBuilder, NetworkSpec, RateModulator, SpeciesId};

use super::basic::{chain_species, chain_reactions};
use super::{
    estimate_threshold, BioConfig, ChannelSpecies, CnNetwork, ModelError, Signal, Variant,
    DEFAULT_THRESHOLD_CAP,
};

struct Compartment {
    channel: ChannelSpecies,
    active_input: SpeciesId,
    gene_free: SpeciesId,
    gene_bound: SpeciesId,
    transport_complex: SpeciesId,
}

fn add_compartment(b: &mut NetworkBuilder, n: usize, config: &BioConfig) -> Result<Compartment, ModelError> {
    let precursor = b.add_species(&format!("I{n}"), 0)?;
    let input = b.add_species(&format!("A{n}"), 0)?;
    let active_input = b.add_species(&format!("Astar{n}"), 0)?;
    let gene_free = b.add_species(&format!("h0_{n}"), config.gene_copies)?;
    let gene_bound = b.add_species(&format!("h_{n}"), 0)?;
    let weight = b.add_species(&format!("H{n}"), config.initial_weight(n - 1))?;
    let transport_complex = b.add_species(&format!("AH{n}"), 0)?;
    Ok(Compartment {
        channel: ChannelSpecies {
            precursor,
            input,
            weight,
        },
        active_input,
        gene_free,
        gene_bound,
        transport_complex,
    })
}

/// Reactions shared by the explicit-ladder and Hill forms: input, gene
/// regulation, expression, transport and weight decay.
fn add_compartment_reactions(
    b: &mut NetworkBuilder,
    c: &Compartment,
    internal: SpeciesId,
    config: &BioConfig,
) -> Result<(), ModelError> {
    let r = &config.rates;
    let ch = &c.channel;
    b.add_reversible(&[ch.precursor], &[ch.input], r.k_ia, r.k_ai)?;
    b.add_reversible(&[c.active_input], &[ch.input], r.k_astar_a, r.k_a_astar)?;
    b.add_reversible(&[c.gene_free, c.active_input], &[c.gene_bound], r.k_astar_h, r.k_h_astar)?;
    b.add_reaction(&[c.gene_free], &[ch.weight, c.gene_free], r.k_leak)?;
    b.add_reaction(&[c.gene_bound], &[ch.weight, c.gene_bound], r.k_h)?;
    b.add_reversible(&[ch.input, ch.weight], &[c.transport_complex], r.k_ah, r.k_ha)?;
    b.add_reversible(&[c.transport_complex], &[internal, ch.weight], r.k_hb, r.k_bh)?;
    b.add_reaction(&[ch.weight], &[], r.k_h_decay)?;
    Ok(())
}

/// Builds the compartmental neuron. Each channel is a compartment holding
/// `A`, `Astar`, a gene (`h0` free, `h` bound) expressing the transporter `H`,
/// and its own receptor ladder whose active form catalyses `A -> Astar`. The
/// outer species `B` is shared.
pub fn build_bio_cn(config: &BioConfig) -> Result<CnNetwork, ModelError> {
    config.validate()?;
    let r = &config.rates;
    let m = config.nonlinearity;
    let mut b = NetworkSpec::builder();
    let internal = b.add_species("B", 0)?;

    let mut compartments = Vec::with_capacity(config.channels);
    let mut ladders = Vec::with_capacity(config.channels);
    let mut catalysts = Vec::with_capacity(config.channels);
    for n in 1..=config.channels {
        let c = add_compartment(&mut b, n, config)?;
        let ladder = chain_species(&mut b, m, config.e_total, |i| format!("E{i}_{n}"), &format!("Eact_{n}"))?;
        catalysts.push(b.add_species(&format!("EactA{n}"), 0)?);
        compartments.push(c);
        ladders.push(ladder);
    }

    for ((c, ladder), &complex) in compartments.iter().zip(&ladders).zip(&catalysts) {
        let active = ladder[m];
        add_compartment_reactions(&mut b, c, internal, config)?;
        chain_reactions(&mut b, internal, ladder, r.chain())?;
        b.add_reversible(&[active, c.channel.input], &[complex], r.k_ae, r.k_ea)?;
        b.add_reversible(&[complex], &[active, c.active_input], r.k_astar_e, r.k_e_astar)?;
    }
    b.add_reaction(&[internal], &[], r.k_b_decay)?;

    Ok(CnNetwork {
        spec: b.build(),
        variant: Variant::Bio,
        channels: compartments.iter().map(|c| c.channel).collect(),
        internal,
        signal: Signal::Species(ladders.iter().map(|l| l[m]).collect()),
        bolus_size: config.bolus_size,
    })
}

/// Threshold of the ladder that the Hill form replaces.
pub fn default_hill_theta(config: &BioConfig) -> Result<f64, ModelError> {
    Ok(estimate_threshold(config.nonlinearity, &config.rates.chain(), DEFAULT_THRESHOLD_CAP)?.theta)
}

/// Compartmental neuron with each receptor ladder collapsed into a single
/// step `A -> Astar` whose propensity is
/// `e_total * k_ae * n_A * Hill(n_B; theta, hill_exponent)`.
pub fn build_hill_cn(config: &BioConfig, hill_exponent: f64, theta: f64) -> Result<CnNetwork, ModelError> {
    config.validate()?;
    for (field, v) in [("hill_exponent", hill_exponent), ("theta", theta)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(ModelError::InvalidConfig {
                field,
                message: format!("must be finite and positive, got {v}"),
            });
        }
    }
    let r = &config.rates;
    let mut b = NetworkSpec::builder();
    let internal = b.add_species("B", 0)?;
    let compartments = (1..=config.channels)
        .map(|n| add_compartment(&mut b, n, config))
        .collect::<Result<Vec<_>, _>>()?;
    for c in &compartments {
        add_compartment_reactions(&mut b, c, internal, config)?;
        let k = b.add_reaction(&[c.channel.input], &[c.active_input], r.k_ae)?;
        b.modulate(
            k,
            RateModulator::Hill {
                ligand: internal,
                theta,
                exponent: hill_exponent,
                gain: config.e_total as f64,
            },
        )?;
    }
    b.add_reaction(&[internal], &[], r.k_b_decay)?;

    Ok(CnNetwork {
        spec: b.build(),
        variant: Variant::Hill,
        channels: compartments.iter().map(|c| c.channel).collect(),
        internal,
        signal: Signal::Hill {
            ligand: internal,
            theta,
            exponent: hill_exponent,
            receptors: (config.e_total * config.channels as u64) as f64,
        },
        bolus_size: config.bolus_size,
    })
}
