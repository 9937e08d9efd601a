//! Random explicit diagrams, used by the consistency property harness.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{DiagramSpec, Product, ReactionDecl, ReactionKind, SpeciesDecl, SpeciesKind};
use crate::terms::Name;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthLimits {
    pub max_species: usize,
    pub max_caps: usize,
    pub max_count: u32,
}

impl Default for SynthLimits {
    fn default() -> Self {
        SynthLimits {
            max_species: 5,
            max_caps: 3,
            max_count: 3,
        }
    }
}

const IDS: [&str; 8] = ["A", "B", "C", "D", "E", "F", "G", "H"];

/// A random diagram over elementary species. No name ever carries more than
/// `max_caps` summands once compiled.
pub fn random_diagram<R: Rng>(rng: &mut R, limits: SynthLimits) -> DiagramSpec {
    let n = rng.gen_range(1..=limits.max_species.clamp(1, IDS.len()));
    let ids: Vec<String> = IDS[..n].iter().map(|s| s.to_string()).collect();
    let species = ids
        .iter()
        .map(|id| SpeciesDecl {
            id: id.clone(),
            kind: SpeciesKind::Elementary,
            count: rng.gen_range(0..=limits.max_count),
        })
        .collect();

    let mut load: std::collections::HashMap<Name, usize> = Default::default();
    let mut names: Vec<Name> = ids.iter().map(Name::elementary).collect();
    let mut bonds: Vec<Name> = Vec::new();
    let mut reactions = Vec::new();
    let attempts = n * limits.max_caps;
    for _ in 0..attempts {
        let holder = names.choose(rng).expect("at least one name").clone();
        let partner = names.choose(rng).expect("at least one name").clone();
        let kind = match rng.gen_range(0..7) {
            0 | 1 => ReactionKind::Ncb,
            2 => ReactionKind::Cb,
            3 => ReactionKind::Mod,
            4 => ReactionKind::Cleave,
            5 => ReactionKind::Conv,
            _ => ReactionKind::Prod,
        };
        let kind = if kind == ReactionKind::Cleave && bonds.is_empty() {
            ReactionKind::Degrade
        } else {
            kind
        };
        let participants = match kind {
            ReactionKind::Ncb | ReactionKind::Cb => vec![holder.clone(), partner.clone()],
            ReactionKind::Cleave => vec![
                holder.clone(),
                bonds.choose(rng).expect("non-empty").clone(),
            ],
            _ => vec![holder.clone()],
        };
        let holders: Vec<&Name> = match kind {
            ReactionKind::Ncb | ReactionKind::Cb if holder != partner => vec![&holder, &partner],
            _ => vec![&holder],
        };
        if holders
            .iter()
            .any(|h| load.get(*h).copied().unwrap_or(0) >= limits.max_caps)
        {
            continue;
        }
        for h in holders {
            *load.entry(h.clone()).or_insert(0) += 1;
        }
        let modtype =
            (kind == ReactionKind::Mod).then(|| ["p", "u"][rng.gen_range(0..2)].to_string());
        let formed = match kind {
            ReactionKind::Ncb => Some(Name::non_covalent(holder.clone(), partner.clone())),
            ReactionKind::Cb => Some(Name::covalent_bond(holder.clone(), partner.clone())),
            ReactionKind::Mod => Some(Name::covalent_mod(
                modtype.clone().unwrap_or_default(),
                holder.clone(),
            )),
            _ => None,
        };
        let products = match kind {
            ReactionKind::Conv | ReactionKind::Prod => {
                let k = rng.gen_range(0..=2);
                (0..k)
                    .map(|_| Product::Name(ids.choose(rng).expect("non-empty").clone()))
                    .collect()
            }
            _ => Vec::new(),
        };
        let mut contingency = |p: f64| -> Vec<String> {
            if rng.gen_bool(p) {
                vec![names.choose(rng).expect("non-empty").to_string()]
            } else {
                Vec::new()
            }
        };
        let promoters = contingency(0.2);
        let inhibitors = contingency(0.2);
        if let Some(f) = formed {
            if kind == ReactionKind::Cb {
                bonds.push(f.clone());
            }
            if !names.contains(&f) && names.len() < 2 * limits.max_species {
                names.push(f);
            }
        }
        reactions.push(ReactionDecl {
            kind,
            participants: participants.iter().map(Name::to_string).collect(),
            modtype,
            product_caps_ref: None,
            promoters,
            inhibitors,
            stimulators: Vec::new(),
            catalysts: Vec::new(),
            products,
        });
    }
    DiagramSpec {
        interpretation: None,
        species,
        reactions,
    }
}
