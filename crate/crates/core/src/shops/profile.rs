use serde::{Deserialize, Serialize};

use super::Shop;
use crate::bits::ElemSet;
use crate::error::{Error, Result};
use crate::search::{nonempty_subsets, singletons, HyperProblem};
use crate::structures::{Element, Structure};

/// Largest domain for profiles whose search ranges over subset images.
pub const MAX_SUBSET_SEARCH_DOMAIN: usize = 16;
/// Largest domain for profiles with singleton images only.
pub const MAX_FUNCTION_SEARCH_DOMAIN: usize = 64;

/// The kind of shop sought by [`exists_shop`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ShopProfile {
    /// `f(u) = D`.
    AShop(Element),
    /// `x` lies in every image.
    EShop(Element),
    /// `f(u) = D` and `f(z) = {x}` for `z != u`.
    SingletonUx { u: Element, x: Element },
    /// `f(U) = D`.
    USurjective(ElemSet),
    /// Every image meets `X`.
    XTotal(ElemSet),
    /// Both `f(U) = D` and every image meets `X`.
    Ux { u: ElemSet, x: ElemSet },
}

/// Finds a shop preserving `s` with the given profile, if one exists.
pub fn exists_shop(s: &Structure, profile: ShopProfile) -> Result<Option<Shop>> {
    let n = s.size();
    let subset_search = matches!(
        profile,
        ShopProfile::USurjective(_) | ShopProfile::XTotal(_) | ShopProfile::Ux { .. }
    );
    let bound = if subset_search {
        MAX_SUBSET_SEARCH_DOMAIN
    } else {
        MAX_FUNCTION_SEARCH_DOMAIN
    };
    if n > bound {
        return Err(Error::DomainTooLarge { size: n, bound });
    }
    let check_elem = |e: Element| {
        if e >= n {
            Err(Error::OutOfRange { element: e, size: n })
        } else {
            Ok(())
        }
    };
    let check_set = |set: ElemSet| {
        if set.is_empty() {
            Err(Error::InvalidArgument("profile sets must be nonempty".into()))
        } else if !set.is_subset(ElemSet::full(n)) {
            check_elem(set.difference(ElemSet::full(n)).min().unwrap())
        } else {
            Ok(())
        }
    };
    let found = match profile {
        ShopProfile::AShop(u) => {
            check_elem(u)?;
            a_shop(s, u)
        }
        ShopProfile::EShop(x) => {
            check_elem(x)?;
            a_shop(&s.complement(), x).map(|f| f.inverse())
        }
        ShopProfile::SingletonUx { u, x } => {
            check_elem(u)?;
            check_elem(x)?;
            let full = ElemSet::full(n).bits();
            let images = (0..n)
                .map(|z| if z == u { full } else { 1u64 << x })
                .collect();
            let f = Shop::from_masks(images);
            f.preserves(s).then_some(f)
        }
        ShopProfile::USurjective(u) => {
            check_set(u)?;
            u_surjective(s, u)
        }
        ShopProfile::XTotal(x) => {
            check_set(x)?;
            u_surjective(&s.complement(), x).map(|f| f.inverse())
        }
        ShopProfile::Ux { u, x } => {
            check_set(u)?;
            check_set(x)?;
            match (u_surjective(s, u), u_surjective(&s.complement(), x)) {
                (Some(f), Some(g)) => Some(g.inverse().compose_unchecked(&f)),
                _ => None,
            }
        }
    };
    debug_assert!(found.as_ref().is_none_or(|f| f.preserves(s)));
    Ok(found)
}

/// Any A-shop at `u` has a sub-shop with singleton images off `u`.
fn a_shop(s: &Structure, u: Element) -> Option<Shop> {
    let n = s.size();
    let mut candidates = vec![singletons(n); n];
    candidates[u] = vec![ElemSet::full(n).bits()];
    search(s, candidates, 0)
}

/// Any `U`-surjective shop has a sub-shop with singleton images off `U`.
fn u_surjective(s: &Structure, u: ElemSet) -> Option<Shop> {
    let n = s.size();
    let subsets = nonempty_subsets(n);
    let candidates = (0..n)
        .map(|e| {
            if u.contains(e) {
                subsets.clone()
            } else {
                singletons(n)
            }
        })
        .collect();
    search(s, candidates, u.bits())
}

fn search(s: &Structure, candidates: Vec<Vec<u64>>, cover: u64) -> Option<Shop> {
    let n = s.size();
    let problem = HyperProblem {
        source_size: n,
        target_size: n,
        candidates,
        constraints: s.relations().iter().map(|r| (r, r)).collect(),
        cover,
        injective: false,
    };
    problem.first().map(Shop::from_masks)
}
