#![allow(dead_code)]

use chemneuron::crn::{NetworkSpec, SpeciesId};
use proptest::prelude::*;

fn rate() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(0.0),
        prop::sample::select(vec![1.0, 0.1, 1e-6, 0.0003, 100.0, 0.5]),
        0.0..1e6f64,
        (1e-12..1.0f64),
    ]
}

type ReactionDraw = (Vec<usize>, Vec<usize>, f64);

/// Networks without rate modulators: up to 8 species, 16 reactions of order
/// at most two, some clamped species.
pub fn network() -> impl Strategy<Value = NetworkSpec> {
    (1usize..=8)
        .prop_flat_map(|n| {
            let species = prop::collection::vec(("[A-Z][a-z_]{0,3}", 0u64..10_000, prop::bool::weighted(0.2)), n);
            let side = prop::collection::vec(0..n, 0..=2);
            let reactions = prop::collection::vec((side.clone(), side, rate()), 0..16);
            (species, reactions)
        })
        .prop_map(|(species, reactions): (Vec<(String, u64, bool)>, Vec<ReactionDraw>)| {
            let mut b = NetworkSpec::builder();
            for (i, (prefix, count, clamp)) in species.iter().enumerate() {
                let id = b.add_species(&format!("{prefix}{i}"), *count).unwrap();
                if *clamp {
                    b.clamp(id);
                }
            }
            for (lhs, rhs, k) in reactions {
                let ids = |v: &[usize]| v.iter().map(|&i| SpeciesId(i)).collect::<Vec<_>>();
                b.add_reaction(&ids(&lhs), &ids(&rhs), k).unwrap();
            }
            b.build()
        })
}
