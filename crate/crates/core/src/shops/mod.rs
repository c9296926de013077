//! Hyper-maps and surjective hyper-endomorphisms (shops).

mod canonical;
mod dsm;
mod profile;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::{ElemSet, MAX_SET_DOMAIN};
use crate::error::{Error, Result};
use crate::search::product_in;
use crate::structures::{Element, Structure};

pub use canonical::{
    canonical_shop, check_3_permuted, completion_contains, completion_generators,
    PermutedFormWitness,
};
pub use dsm::{enumerate_she, generate_dsm, Dsm, MAX_ENUMERATION_DOMAIN};
pub(crate) use dsm::sub_shops;
pub use profile::{exists_shop, ShopProfile};

/// A map from `0..source` to subsets of `0..target`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct HyperMap {
    target: usize,
    images: Vec<u64>,
}

impl HyperMap {
    pub fn new(target: usize, images: Vec<ElemSet>) -> Result<HyperMap> {
        if target > MAX_SET_DOMAIN || images.len() > MAX_SET_DOMAIN {
            return Err(Error::DomainTooLarge {
                size: target.max(images.len()),
                bound: MAX_SET_DOMAIN,
            });
        }
        let full = ElemSet::full(target);
        if let Some(bad) = images.iter().find(|s| !s.is_subset(full)) {
            return Err(Error::OutOfRange {
                element: bad.difference(full).min().unwrap(),
                size: target,
            });
        }
        Ok(HyperMap {
            target,
            images: images.into_iter().map(ElemSet::bits).collect(),
        })
    }

    pub(crate) fn from_masks(target: usize, images: Vec<u64>) -> HyperMap {
        HyperMap { target, images }
    }

    pub fn source_size(&self) -> usize {
        self.images.len()
    }

    pub fn target_size(&self) -> usize {
        self.target
    }

    pub fn image(&self, e: Element) -> ElemSet {
        ElemSet(self.images[e])
    }

    pub fn images(&self) -> impl Iterator<Item = ElemSet> + '_ {
        self.images.iter().map(|&m| ElemSet(m))
    }

    pub(crate) fn masks(&self) -> &[u64] {
        &self.images
    }

    /// Union of the images of `set`.
    pub fn image_of_set(&self, set: ElemSet) -> ElemSet {
        set.iter()
            .fold(ElemSet::EMPTY, |acc, e| acc.union(self.image(e)))
    }

    pub fn is_total(&self) -> bool {
        self.images.iter().all(|&m| m != 0)
    }

    pub fn is_surjective(&self) -> bool {
        self.images.iter().fold(0, |a, &m| a | m) == ElemSet::full(self.target).bits()
    }

    /// Whether the product of images of every tuple of `a` lies in `b`.
    pub fn preserves(&self, a: &Structure, b: &Structure) -> bool {
        if a.signature() != b.signature() || a.size() != self.source_size() || b.size() != self.target {
            return false;
        }
        let mut scratch = Vec::new();
        a.relations().iter().zip(b.relations()).all(|(ra, rb)| {
            ra.tuples().iter().all(|t| {
                scratch.clear();
                scratch.extend(t.iter().map(|&e| self.images[e]));
                product_in(&scratch, rb, self.target)
            })
        })
    }
}

impl fmt::Display for HyperMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.images().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{i}->{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HyperMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<HyperMap> for String {
    fn from(h: HyperMap) -> String {
        h.to_string()
    }
}

impl TryFrom<String> for HyperMap {
    type Error = Error;
    fn try_from(s: String) -> Result<HyperMap> {
        parse_hyper_map(&s, None)
    }
}

/// Parses `0->{0,1};1->{1}`. Entries may come in any order but must cover
/// `0..k` exactly once. The target size defaults to the number of entries.
pub fn parse_hyper_map(text: &str, target: Option<usize>) -> Result<HyperMap> {
    let mut entries: Vec<Option<u64>> = Vec::new();
    let mut offset = 0;
    for part in text.split(';') {
        let col = offset + 1 + (part.len() - part.trim_start().len());
        offset += part.len() + 1;
        let p = part.trim();
        if p.is_empty() {
            return Err(Error::parse(1, col, "empty entry"));
        }
        let (lhs, rhs) = p
            .split_once("->")
            .ok_or_else(|| Error::parse(1, col, "expected `element->{...}`"))?;
        let e: usize = lhs
            .trim()
            .parse()
            .map_err(|_| Error::parse(1, col, format!("invalid element `{}`", lhs.trim())))?;
        let rhs = rhs.trim();
        let inner = rhs
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::parse(1, col, "image must be written `{...}`"))?;
        let mut mask = 0u64;
        for tok in inner.split(',') {
            let t = tok.trim();
            if t.is_empty() {
                if inner.trim().is_empty() {
                    break;
                }
                return Err(Error::parse(1, col, "empty image element"));
            }
            let x: usize = t
                .parse()
                .ok()
                .filter(|&x| x < MAX_SET_DOMAIN)
                .ok_or_else(|| Error::parse(1, col, format!("invalid image element `{t}`")))?;
            mask |= 1u64 << x;
        }
        if e >= MAX_SET_DOMAIN {
            return Err(Error::parse(1, col, format!("element {e} too large")));
        }
        if entries.len() <= e {
            entries.resize(e + 1, None);
        }
        if entries[e].replace(mask).is_some() {
            return Err(Error::parse(1, col, format!("element {e} listed twice")));
        }
    }
    let images: Vec<u64> = entries
        .iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| Error::parse(1, 1, format!("element {i} has no entry"))))
        .collect::<Result<_>>()?;
    let target = target.unwrap_or(images.len());
    HyperMap::new(target, images.into_iter().map(ElemSet).collect())
}

/// A total, surjective hyper-map from a domain to itself.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Shop(HyperMap);

impl Shop {
    pub fn new(images: Vec<ElemSet>) -> Result<Shop> {
        let n = images.len();
        Shop::from_hyper_map(HyperMap::new(n, images)?)
    }

    pub fn from_hyper_map(h: HyperMap) -> Result<Shop> {
        if h.source_size() != h.target_size() {
            return Err(Error::SizeMismatch(format!(
                "a shop maps a domain to itself, found {} -> {}",
                h.source_size(),
                h.target_size()
            )));
        }
        if h.source_size() == 0 {
            return Err(Error::InvalidArgument("empty domain".into()));
        }
        if !h.is_total() {
            return Err(Error::InvalidArgument(format!("`{h}` is not total")));
        }
        if !h.is_surjective() {
            return Err(Error::InvalidArgument(format!("`{h}` is not surjective")));
        }
        Ok(Shop(h))
    }

    /// Convenience constructor from explicit image lists.
    pub fn from_lists(images: &[&[Element]]) -> Result<Shop> {
        Shop::new(images.iter().map(|l| ElemSet::from_elems(l.iter().copied())).collect())
    }

    pub(crate) fn from_masks(images: Vec<u64>) -> Shop {
        debug_assert!({
            let h = HyperMap::from_masks(images.len(), images.clone());
            h.is_total() && h.is_surjective()
        });
        Shop(HyperMap::from_masks(images.len(), images))
    }

    pub fn identity(n: usize) -> Shop {
        Shop::from_masks((0..n).map(|e| 1u64 << e).collect())
    }

    pub fn size(&self) -> usize {
        self.0.source_size()
    }

    pub fn as_hyper_map(&self) -> &HyperMap {
        &self.0
    }

    pub fn image(&self, e: Element) -> ElemSet {
        self.0.image(e)
    }

    pub fn images(&self) -> impl Iterator<Item = ElemSet> + '_ {
        self.0.images()
    }

    pub(crate) fn masks(&self) -> &[u64] {
        self.0.masks()
    }

    pub fn image_of_set(&self, set: ElemSet) -> ElemSet {
        self.0.image_of_set(set)
    }

    /// `self` after `f`: `x -> union of self(y) for y in f(x)`.
    pub fn compose(&self, f: &Shop) -> Result<Shop> {
        if self.size() != f.size() {
            return Err(Error::SizeMismatch("composing shops of different sizes".into()));
        }
        Ok(self.compose_unchecked(f))
    }

    pub(crate) fn compose_unchecked(&self, f: &Shop) -> Shop {
        Shop::from_masks(
            f.masks()
                .iter()
                .map(|&m| self.image_of_set(ElemSet(m)).bits())
                .collect(),
        )
    }

    /// `b -> {a : b in self(a)}`.
    pub fn inverse(&self) -> Shop {
        let n = self.size();
        let mut inv = vec![0u64; n];
        for (a, &m) in self.masks().iter().enumerate() {
            for b in ElemSet(m).iter() {
                inv[b] |= 1u64 << a;
            }
        }
        Shop::from_masks(inv)
    }

    /// Pointwise inclusion.
    pub fn is_sub_shop_of(&self, g: &Shop) -> bool {
        self.size() == g.size()
            && self
                .masks()
                .iter()
                .zip(g.masks())
                .all(|(a, b)| a & !b == 0)
    }

    pub fn preserves(&self, s: &Structure) -> bool {
        self.0.preserves(s, s)
    }

    /// Some `u` with `f(u) = D`.
    pub fn a_shop_witness(&self) -> Option<Element> {
        let full = ElemSet::full(self.size());
        self.images().position(|m| m == full)
    }

    /// Some `x` lying in every image.
    pub fn e_shop_witness(&self) -> Option<Element> {
        let common = self.masks().iter().fold(u64::MAX, |a, &m| a & m);
        ElemSet(common).min()
    }

    pub fn is_a_shop(&self) -> bool {
        self.a_shop_witness().is_some()
    }

    pub fn is_e_shop(&self) -> bool {
        self.e_shop_witness().is_some()
    }

    /// `f(U) = D`.
    pub fn is_u_surjective(&self, u: ElemSet) -> bool {
        self.image_of_set(u) == ElemSet::full(self.size())
    }

    /// Every image meets `X`.
    pub fn is_x_total(&self, x: ElemSet) -> bool {
        self.images().all(|m| !m.intersection(x).is_empty())
    }

    pub fn is_permutation(&self) -> bool {
        self.images().all(|m| m.len() == 1)
    }
}

impl fmt::Display for Shop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Shop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Shop {
    type Err = Error;
    fn from_str(s: &str) -> Result<Shop> {
        parse_shop(s)
    }
}

impl From<Shop> for String {
    fn from(s: Shop) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for Shop {
    type Error = Error;
    fn try_from(s: String) -> Result<Shop> {
        parse_shop(&s)
    }
}

pub fn parse_shop(text: &str) -> Result<Shop> {
    Shop::from_hyper_map(parse_hyper_map(text, None)?)
}
