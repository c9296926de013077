use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::Shop;
use crate::bits::ElemSet;
use crate::error::{Error, Result};
use crate::search::{nonempty_subsets, HyperProblem};
use crate::structures::Structure;

/// Default bound on the domain for full shop enumeration.
pub const MAX_ENUMERATION_DOMAIN: usize = 6;
/// Hard bound even when forced.
const MAX_FORCED_DOMAIN: usize = 12;

/// A down-shop-monoid: contains the identity, closed under composition and
/// under taking sub-shops. Shops are kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dsm {
    n: usize,
    shops: Vec<Shop>,
}

impl Dsm {
    pub(crate) fn from_sorted(n: usize, shops: Vec<Shop>) -> Dsm {
        Dsm { n, shops }
    }

    pub fn domain_size(&self) -> usize {
        self.n
    }

    pub fn shops(&self) -> &[Shop] {
        &self.shops
    }

    pub fn len(&self) -> usize {
        self.shops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shops.is_empty()
    }

    pub fn contains(&self, f: &Shop) -> bool {
        self.shops.binary_search(f).is_ok()
    }

    pub fn has_a_shop(&self) -> bool {
        self.shops.iter().any(Shop::is_a_shop)
    }

    pub fn has_e_shop(&self) -> bool {
        self.shops.iter().any(Shop::is_e_shop)
    }

    /// Elements not strictly below another element.
    pub fn maximal_elements(&self) -> Vec<Shop> {
        self.shops
            .iter()
            .filter(|f| {
                !self
                    .shops
                    .iter()
                    .any(|g| g != *f && f.is_sub_shop_of(g))
            })
            .cloned()
            .collect()
    }

    /// Checks the three closure conditions directly.
    pub fn is_closed(&self) -> bool {
        if !self.contains(&Shop::identity(self.n)) {
            return false;
        }
        for f in &self.shops {
            for g in &self.shops {
                if !self.contains(&g.compose_unchecked(f)) {
                    return false;
                }
            }
            if sub_shops(f).iter().any(|s| !self.contains(s)) {
                return false;
            }
        }
        true
    }
}

/// All shops preserving `s`. Refuses domains above the default bound unless
/// `force` is set.
pub fn enumerate_she(s: &Structure, force: bool) -> Result<Dsm> {
    let n = s.size();
    let bound = if force {
        MAX_FORCED_DOMAIN
    } else {
        MAX_ENUMERATION_DOMAIN
    };
    if n > bound {
        return Err(Error::DomainTooLarge { size: n, bound });
    }
    let constraints = s.relations().iter().map(|r| (r, r)).collect();
    let problem = HyperProblem {
        source_size: n,
        target_size: n,
        candidates: vec![nonempty_subsets(n); n],
        constraints,
        cover: ElemSet::full(n).bits(),
        injective: false,
    };
    let mut shops: Vec<Shop> = problem.all().into_iter().map(Shop::from_masks).collect();
    shops.sort();
    Ok(Dsm::from_sorted(n, shops))
}

/// Smallest DSM on `0..n` containing `generators`.
///
/// Composition is monotone in both arguments, so the down-closure of the
/// monoid generated by the generators is already closed under composition.
pub fn generate_dsm(generators: &[Shop], n: usize) -> Result<Dsm> {
    if let Some(g) = generators.iter().find(|g| g.size() != n) {
        return Err(Error::SizeMismatch(format!(
            "generator `{g}` is not on a domain of size {n}"
        )));
    }
    let monoid = generate_monoid(generators, n);
    let mut maximal: Vec<&Shop> = Vec::new();
    for f in &monoid {
        if !monoid.iter().any(|g| g != f && f.is_sub_shop_of(g)) {
            maximal.push(f);
        }
    }
    let mut all: BTreeSet<Shop> = BTreeSet::new();
    for m in maximal {
        all.extend(sub_shops(m));
    }
    Ok(Dsm::from_sorted(n, all.into_iter().collect()))
}

pub(crate) fn generate_monoid(generators: &[Shop], n: usize) -> BTreeSet<Shop> {
    let id = Shop::identity(n);
    let mut seen: BTreeSet<Shop> = BTreeSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(f) = queue.pop_front() {
        for g in generators {
            let h = g.compose_unchecked(&f);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen
}

/// Every shop pointwise below `f`, including `f`.
pub(crate) fn sub_shops(f: &Shop) -> Vec<Shop> {
    let n = f.size();
    let full = ElemSet::full(n).bits();
    let masks = f.masks();
    let options: Vec<Vec<u64>> = masks
        .iter()
        .map(|&m| ElemSet(m).subsets().skip(1).map(ElemSet::bits).collect())
        .collect();
    // reach[i]: union of images available from position i on
    let mut reach = vec![0u64; n + 1];
    for i in (0..n).rev() {
        reach[i] = reach[i + 1] | masks[i];
    }
    let mut out = Vec::new();
    let mut cur = vec![0u64; n];
    fn rec(
        i: usize,
        covered: u64,
        options: &[Vec<u64>],
        reach: &[u64],
        full: u64,
        cur: &mut Vec<u64>,
        out: &mut Vec<Shop>,
    ) {
        if i == options.len() {
            if covered == full {
                out.push(Shop::from_masks(cur.clone()));
            }
            return;
        }
        for &o in &options[i] {
            if (covered | o | reach[i + 1]) != full {
                continue;
            }
            cur[i] = o;
            rec(i + 1, covered | o, options, reach, full, cur, out);
        }
    }
    rec(0, 0, &options, &reach, full, &mut cur, &mut out);
    out
}
