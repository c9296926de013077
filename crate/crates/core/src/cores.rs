//! Classical cores, equality-free cores and U-X-cores.

use serde::{Deserialize, Serialize};

use crate::bits::ElemSet;
use crate::error::{Error, Result};
use crate::shops::{canonical_shop, exists_shop, Shop, ShopProfile};
use crate::structures::{find_morphism, Element, MorphismKind, MorphismWitness, Structure};

/// Default bound on the domain for U-X-core computation.
pub const MAX_CORE_DOMAIN: usize = 8;

/// The smallest induced substructure that `s` maps homomorphically onto,
/// with the homomorphism from `s` into it.
pub fn classical_core(s: &Structure) -> Result<(Structure, Vec<Element>)> {
    let n = s.size();
    if n > 64 {
        return Err(Error::DomainTooLarge { size: n, bound: 64 });
    }
    for k in 1..=n {
        for keep in combinations(n, k) {
            let (sub, _) = s.induced_substructure(&keep.to_vec())?;
            if let Some(MorphismWitness::Function(h)) =
                find_morphism(s, &sub, MorphismKind::Homomorphism)?
            {
                return Ok((sub, h));
            }
        }
    }
    unreachable!("the identity is an endomorphism")
}

/// The quotient by `~`, with the class map.
pub fn eqfree_core(s: &Structure) -> (Structure, Vec<Element>) {
    s.quotient_by_sim()
}

/// Subsets of `0..n` of size `k` in lexicographic order of their element lists.
pub fn combinations(n: usize, k: usize) -> Vec<ElemSet> {
    fn rec(start: usize, n: usize, k: usize, cur: ElemSet, out: &mut Vec<ElemSet>) {
        if k == 0 {
            out.push(cur);
            return;
        }
        for e in start..=n - k {
            let mut next = cur;
            next.insert(e);
            rec(e + 1, n, k - 1, next, out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, ElemSet::EMPTY, &mut out);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Side {
    /// Sets `U` admitting a `U`-surjective shop.
    U,
    /// Sets `X` admitting an `X`-total shop.
    X,
}

fn admits(s: &Structure, side: Side, set: ElemSet) -> Result<bool> {
    let profile = match side {
        Side::U => ShopProfile::USurjective(set),
        Side::X => ShopProfile::XTotal(set),
    };
    Ok(exists_shop(s, profile)?.is_some())
}

/// Minimum size by trying all subsets in order of size.
pub fn minimum_size_by_sweep(s: &Structure, side: Side) -> Result<usize> {
    let n = s.size();
    for k in 1..=n {
        for set in combinations(n, k) {
            if admits(s, side, set)? {
                return Ok(k);
            }
        }
    }
    unreachable!("the identity is surjective and total on the whole domain")
}

/// Drops elements one at a time while a shop remains. Inclusion-minimal
/// sets found this way have minimum size.
pub fn greedy_minimal_set(s: &Structure, side: Side) -> Result<ElemSet> {
    let n = s.size();
    let mut set = ElemSet::full(n);
    for e in 0..n {
        if set.len() == 1 {
            break;
        }
        let mut smaller = set;
        smaller.remove(e);
        if admits(s, side, smaller)? {
            set = smaller;
        }
    }
    Ok(set)
}

/// Every set of minimum size admitting a shop of the given kind.
pub fn minimum_sets(s: &Structure, side: Side) -> Result<Vec<ElemSet>> {
    let k = greedy_minimal_set(s, side)?.len();
    let mut out = Vec::new();
    for set in combinations(s.size(), k) {
        if admits(s, side, set)? {
            out.push(set);
        }
    }
    Ok(out)
}

/// How a minimal pair `U`, `X` can sit relative to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum UxShape {
    Equal,
    Disjoint,
    Overlapping,
}

pub fn ux_shape(u: ElemSet, x: ElemSet) -> Option<UxShape> {
    let both = u.intersection(x);
    if u == x {
        Some(UxShape::Equal)
    } else if both.is_empty() {
        Some(UxShape::Disjoint)
    } else if !u.difference(x).is_empty() && !x.difference(u).is_empty() {
        Some(UxShape::Overlapping)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UxCore {
    /// The substructure induced on `U ∪ X`.
    pub core: Structure,
    /// `U` and `X` in the original domain.
    pub u: ElemSet,
    pub x: ElemSet,
    /// `elements[i]` is the original element behind core element `i`.
    pub elements: Vec<Element>,
    /// `U` and `X` renumbered into the core.
    pub core_u: ElemSet,
    pub core_x: ElemSet,
    /// The maximal identity-form U-X-shop of the core.
    pub canonical: Shop,
}

impl UxCore {
    pub fn to_core(&self, e: Element) -> Option<Element> {
        self.elements.iter().position(|&x| x == e)
    }

    pub fn shape(&self) -> Option<UxShape> {
        ux_shape(self.u, self.x)
    }
}

fn lex_key(set: ElemSet) -> Vec<Element> {
    set.to_vec()
}

/// Minimum-size `U` and `X`, chosen to maximise `|U ∩ X|` with ties broken
/// lexicographically, the substructure they induce, and its canonical shop.
pub fn ux_core(s: &Structure) -> Result<UxCore> {
    ux_core_bounded(s, MAX_CORE_DOMAIN)
}

pub fn ux_core_bounded(s: &Structure, bound: usize) -> Result<UxCore> {
    if s.size() > bound {
        return Err(Error::DomainTooLarge {
            size: s.size(),
            bound,
        });
    }
    let us = minimum_sets(s, Side::U)?;
    let xs = minimum_sets(s, Side::X)?;
    let mut best: Option<(ElemSet, ElemSet)> = None;
    for &u in &us {
        for &x in &xs {
            let better = match best {
                None => true,
                Some((bu, bx)) => {
                    let (a, b) = (u.intersection(x).len(), bu.intersection(bx).len());
                    a > b || (a == b && (lex_key(u), lex_key(x)) < (lex_key(bu), lex_key(bx)))
                }
            };
            if better {
                best = Some((u, x));
            }
        }
    }
    let (u, x) = best.expect("the whole domain always qualifies");
    let keep = u.union(x);
    let (core, map) = s.induced_substructure(&keep.to_vec())?;
    let relabel = |set: ElemSet| set.iter().filter_map(|e| map[e]).collect::<ElemSet>();
    let core_u = relabel(u);
    let core_x = relabel(x);
    let canonical = canonical_shop(&core, core_u, core_x)?;
    Ok(UxCore {
        core,
        u,
        x,
        elements: keep.to_vec(),
        core_u,
        core_x,
        canonical,
    })
}
