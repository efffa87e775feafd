//! Species, mass-action reactions and the immutable [`NetworkSpec`].

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::CrnError;

/// Dense index of a species inside one [`NetworkSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpeciesId(pub usize);

impl SpeciesId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for SpeciesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Species {
    pub id: SpeciesId,
    pub name: String,
}

/// State-dependent multiplier applied on top of the mass-action propensity
/// of a single reaction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RateModulator {
    /// `gain * n^h / (theta^h + n^h)` where `n` is the count of `ligand`.
    Hill {
        ligand: SpeciesId,
        theta: f64,
        exponent: f64,
        gain: f64,
    },
}

impl RateModulator {
    pub fn factor(&self, ligand_amount: f64) -> f64 {
        match *self {
            RateModulator::Hill {
                theta,
                exponent,
                gain,
                ..
            } => gain * hill(ligand_amount, theta, exponent),
        }
    }

    pub fn ligand(&self) -> SpeciesId {
        match *self {
            RateModulator::Hill { ligand, .. } => ligand,
        }
    }
}

/// Hill activation `n^h / (theta^h + n^h)`, 0 at `n = 0`.
pub fn hill(n: f64, theta: f64, exponent: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    // Ratio form stays finite for large exponents.
    let r = (theta / n).powf(exponent);
    1.0 / (1.0 + r)
}

/// An elementary reaction with at most two reactants and two products.
#[derive(Clone, Debug, PartialEq)]
pub struct Reaction {
    reactants: Vec<SpeciesId>,
    products: Vec<SpeciesId>,
    rate: f64,
    modulator: Option<RateModulator>,
}

impl Reaction {
    pub const MAX_ORDER: usize = 2;

    pub fn new(reactants: &[SpeciesId], products: &[SpeciesId], rate: f64) -> Result<Self, CrnError> {
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(CrnError::InvalidRate(rate));
        }
        if reactants.len() > Self::MAX_ORDER {
            return Err(CrnError::TooManyReactants(reactants.len()));
        }
        if products.len() > Self::MAX_ORDER {
            return Err(CrnError::TooManyProducts(products.len()));
        }
        let mut reactants = reactants.to_vec();
        let mut products = products.to_vec();
        reactants.sort_unstable();
        products.sort_unstable();
        Ok(Self {
            reactants,
            products,
            rate,
            modulator: None,
        })
    }

    /// Reactant multiset, sorted by species id.
    pub fn reactants(&self) -> &[SpeciesId] {
        &self.reactants
    }

    /// Product multiset, sorted by species id.
    pub fn products(&self) -> &[SpeciesId] {
        &self.products
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn modulator(&self) -> Option<&RateModulator> {
        self.modulator.as_ref()
    }

    /// Net stoichiometric change, one entry per species whose count changes.
    pub fn net_change(&self) -> Vec<(SpeciesId, i64)> {
        let mut delta: Vec<(SpeciesId, i64)> = Vec::with_capacity(4);
        let mut bump = |s: SpeciesId, d: i64| match delta.iter_mut().find(|(id, _)| *id == s) {
            Some(entry) => entry.1 += d,
            None => delta.push((s, d)),
        };
        for &s in &self.reactants {
            bump(s, -1);
        }
        for &s in &self.products {
            bump(s, 1);
        }
        delta.retain(|&(_, d)| d != 0);
        delta.sort_unstable_by_key(|&(s, _)| s);
        delta
    }

    /// Species the propensity reads: reactants plus the modulating ligand.
    pub fn inputs(&self) -> Vec<SpeciesId> {
        let mut v = self.reactants.clone();
        if let Some(m) = &self.modulator {
            v.push(m.ligand());
        }
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Mass-action propensity of `reaction` given integer `counts`.
///
/// `k` for zero reactants, `k n_A` for one, `k n_A n_B` for two distinct and
/// `k n_A (n_A - 1)` for a homodimer.
pub fn propensity(reaction: &Reaction, counts: &[u64]) -> f64 {
    let k = reaction.rate;
    let base = match reaction.reactants.as_slice() {
        [] => k,
        [a] => k * counts[a.0] as f64,
        [a, b] if a == b => {
            let n = counts[a.0];
            if n < 2 {
                0.0
            } else {
                k * n as f64 * (n - 1) as f64
            }
        }
        [a, b] => k * counts[a.0] as f64 * counts[b.0] as f64,
        _ => unreachable!("reaction order is bounded at construction"),
    };
    match &reaction.modulator {
        Some(m) if base > 0.0 => base * m.factor(counts[m.ligand().0] as f64),
        _ => base,
    }
}

/// Deterministic rate-equation flux of `reaction` at real-valued `amounts`.
pub fn mean_field_flux(reaction: &Reaction, amounts: &[f64]) -> f64 {
    let k = reaction.rate;
    let base = match reaction.reactants.as_slice() {
        [] => k,
        [a] => k * amounts[a.0],
        [a, b] => k * amounts[a.0] * amounts[b.0],
        _ => unreachable!("reaction order is bounded at construction"),
    };
    match &reaction.modulator {
        Some(m) => base * m.factor(amounts[m.ligand().0]),
        None => base,
    }
}

/// Immutable reaction network: species, reactions and initial counts.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSpec {
    species: Vec<Species>,
    reactions: Vec<Reaction>,
    initial_counts: Vec<u64>,
    clamped: Vec<bool>,
    by_name: HashMap<String, SpeciesId>,
}

impl NetworkSpec {
    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::default()
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn initial_counts(&self) -> &[u64] {
        &self.initial_counts
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn lookup(&self, name: &str) -> Option<SpeciesId> {
        self.by_name.get(name).copied()
    }

    /// Like [`lookup`](Self::lookup) but returns an error naming the species.
    pub fn require(&self, name: &str) -> Result<SpeciesId, CrnError> {
        self.lookup(name)
            .ok_or_else(|| CrnError::UnknownSpecies(name.to_string()))
    }

    pub fn name(&self, id: SpeciesId) -> &str {
        &self.species[id.0].name
    }

    /// Clamped species are held at their count: reactions never change them.
    pub fn is_clamped(&self, id: SpeciesId) -> bool {
        self.clamped[id.0]
    }

    pub fn clamped(&self) -> &[bool] {
        &self.clamped
    }

    /// Copy of this network with different initial counts.
    pub fn with_initial_counts(&self, counts: Vec<u64>) -> Result<Self, CrnError> {
        if counts.len() != self.species.len() {
            return Err(CrnError::DimensionMismatch {
                expected: self.species.len(),
                found: counts.len(),
            });
        }
        let mut out = self.clone();
        out.initial_counts = counts;
        Ok(out)
    }
}

/// Incremental constructor for [`NetworkSpec`].
#[derive(Clone, Debug, Default)]
pub struct NetworkBuilder {
    species: Vec<Species>,
    reactions: Vec<Reaction>,
    initial_counts: Vec<u64>,
    clamped: Vec<bool>,
    by_name: HashMap<String, SpeciesId>,
}

impl NetworkBuilder {
    /// Declares a new species. Fails if the name is already taken.
    pub fn add_species(&mut self, name: &str, initial: u64) -> Result<SpeciesId, CrnError> {
        if name.is_empty() {
            return Err(CrnError::EmptyName);
        }
        if self.by_name.contains_key(name) {
            return Err(CrnError::DuplicateSpecies(name.to_string()));
        }
        let id = SpeciesId(self.species.len());
        self.species.push(Species {
            id,
            name: name.to_string(),
        });
        self.initial_counts.push(initial);
        self.clamped.push(false);
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    /// Returns the existing species or declares it with a zero count.
    pub fn species_or_insert(&mut self, name: &str) -> Result<SpeciesId, CrnError> {
        match self.by_name.get(name) {
            Some(&id) => Ok(id),
            None => self.add_species(name, 0),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<SpeciesId> {
        self.by_name.get(name).copied()
    }

    pub fn set_initial(&mut self, id: SpeciesId, count: u64) {
        self.initial_counts[id.0] = count;
    }

    pub fn clamp(&mut self, id: SpeciesId) {
        self.clamped[id.0] = true;
    }

    fn check_ids(&self, ids: &[SpeciesId]) -> Result<(), CrnError> {
        match ids.iter().find(|s| s.0 >= self.species.len()) {
            Some(s) => Err(CrnError::UndeclaredSpecies(*s)),
            None => Ok(()),
        }
    }

    /// Adds a unidirectional reaction and returns its index.
    pub fn add_reaction(
        &mut self,
        reactants: &[SpeciesId],
        products: &[SpeciesId],
        rate: f64,
    ) -> Result<usize, CrnError> {
        self.check_ids(reactants)?;
        self.check_ids(products)?;
        self.reactions.push(Reaction::new(reactants, products, rate)?);
        Ok(self.reactions.len() - 1)
    }

    /// Adds `lhs -> rhs @ forward` followed by `rhs -> lhs @ reverse`.
    pub fn add_reversible(
        &mut self,
        lhs: &[SpeciesId],
        rhs: &[SpeciesId],
        forward: f64,
        reverse: f64,
    ) -> Result<(usize, usize), CrnError> {
        let f = self.add_reaction(lhs, rhs, forward)?;
        let r = self.add_reaction(rhs, lhs, reverse)?;
        Ok((f, r))
    }

    pub fn modulate(&mut self, reaction: usize, modulator: RateModulator) -> Result<(), CrnError> {
        self.check_ids(&[modulator.ligand()])?;
        let RateModulator::Hill {
            theta,
            exponent,
            gain,
            ..
        } = modulator;
        for v in [theta, exponent, gain] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CrnError::InvalidModulator(v));
            }
        }
        let r = self
            .reactions
            .get_mut(reaction)
            .ok_or(CrnError::UnknownReaction(reaction))?;
        r.modulator = Some(modulator);
        Ok(())
    }

    pub fn build(self) -> NetworkSpec {
        NetworkSpec {
            species: self.species,
            reactions: self.reactions,
            initial_counts: self.initial_counts,
            clamped: self.clamped,
            by_name: self.by_name,
        }
    }
}
