use serde::{Deserialize, Serialize};

use super::{Element, Structure};
use crate::bits::MAX_SET_DOMAIN;
use crate::error::{Error, Result};
use crate::search::{nonempty_subsets, singletons, HyperProblem};
use crate::shops::HyperMap;

/// Largest target for hyper-map searches, which range over all subsets.
pub const MAX_HYPER_TARGET: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MorphismKind {
    Homomorphism,
    /// Injective homomorphism.
    Injective,
    /// `R(a)` holds in the source iff `R(h(a))` holds in the target.
    Full,
    /// Full and surjective.
    FullSurjective,
    /// Total, surjective hyper-map with every image product inside the target.
    SurjectiveHyper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MorphismWitness {
    Function(Vec<Element>),
    Hyper(HyperMap),
}

pub fn find_morphism(
    a: &Structure,
    b: &Structure,
    kind: MorphismKind,
) -> Result<Option<MorphismWitness>> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(
            "morphisms need equal signatures".into(),
        ));
    }
    let bound = if kind == MorphismKind::SurjectiveHyper {
        MAX_HYPER_TARGET
    } else {
        MAX_SET_DOMAIN
    };
    if b.size() > bound {
        return Err(Error::DomainTooLarge {
            size: b.size(),
            bound,
        });
    }
    let (ac, bc);
    let mut constraints: Vec<_> = a.relations().iter().zip(b.relations()).collect();
    if matches!(kind, MorphismKind::Full | MorphismKind::FullSurjective) {
        ac = a.complement();
        bc = b.complement();
        constraints.extend(ac.relations().iter().zip(bc.relations()));
    }
    let values = if kind == MorphismKind::SurjectiveHyper {
        nonempty_subsets(b.size())
    } else {
        singletons(b.size())
    };
    let cover = match kind {
        MorphismKind::FullSurjective | MorphismKind::SurjectiveHyper => full_mask(a.size()),
        _ => 0,
    };
    if cover != 0 && kind == MorphismKind::FullSurjective && a.size() < b.size() {
        return Ok(None);
    }
    if kind == MorphismKind::Injective && a.size() > b.size() {
        return Ok(None);
    }
    if a.size() > MAX_SET_DOMAIN {
        return Err(Error::DomainTooLarge {
            size: a.size(),
            bound: MAX_SET_DOMAIN,
        });
    }
    let problem = HyperProblem {
        source_size: a.size(),
        target_size: b.size(),
        candidates: vec![values; a.size()],
        constraints,
        cover,
        injective: kind == MorphismKind::Injective,
    };
    Ok(problem.first().map(|images| {
        if kind == MorphismKind::SurjectiveHyper {
            MorphismWitness::Hyper(HyperMap::from_masks(b.size(), images))
        } else {
            MorphismWitness::Function(
                images.iter().map(|m| m.trailing_zeros() as usize).collect(),
            )
        }
    }))
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Isomorphism test with cheap invariants checked first.
pub fn are_isomorphic(a: &Structure, b: &Structure) -> Result<bool> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(
            "isomorphism needs equal signatures".into(),
        ));
    }
    if a.size() != b.size()
        || a
            .relations()
            .iter()
            .zip(b.relations())
            .any(|(x, y)| x.len() != y.len())
    {
        return Ok(false);
    }
    let mut da = degree_profile(a);
    let mut db = degree_profile(b);
    da.sort();
    db.sort();
    if da != db {
        return Ok(false);
    }
    if a.size() > MAX_SET_DOMAIN {
        return Err(Error::DomainTooLarge {
            size: a.size(),
            bound: MAX_SET_DOMAIN,
        });
    }
    let ac = a.complement();
    let bc = b.complement();
    let pa = degree_profile(a);
    let pb = degree_profile(b);
    let candidates = (0..a.size())
        .map(|x| {
            (0..b.size())
                .filter(|&y| pa[x] == pb[y])
                .map(|y| 1u64 << y)
                .collect()
        })
        .collect();
    let mut constraints: Vec<_> = a.relations().iter().zip(b.relations()).collect();
    constraints.extend(ac.relations().iter().zip(bc.relations()));
    let problem = HyperProblem {
        source_size: a.size(),
        target_size: b.size(),
        candidates,
        constraints,
        cover: 0,
        injective: true,
    };
    Ok(problem.first().is_some())
}

/// Per element, the number of occurrences at each position of each relation.
fn degree_profile(s: &Structure) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); s.size()];
    for r in s.relations() {
        for pos in 0..r.arity() {
            let mut counts = vec![0usize; s.size()];
            for t in r.tuples() {
                counts[t[pos]] += 1;
            }
            for (o, c) in out.iter_mut().zip(counts) {
                o.push(c);
            }
        }
    }
    out
}
