//! Small sets of domain elements packed into a `u64`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::structures::Element;

/// Largest domain for which element sets, hyper-maps and shops are defined.
pub const MAX_SET_DOMAIN: usize = 64;

#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<Element>", try_from = "Vec<Element>")]
pub struct ElemSet(pub u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn full(n: usize) -> ElemSet {
        debug_assert!(n <= MAX_SET_DOMAIN);
        if n >= 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: Element) -> ElemSet {
        ElemSet(1u64 << e)
    }

    pub fn from_elems<I: IntoIterator<Item = Element>>(elems: I) -> ElemSet {
        let mut s = 0u64;
        for e in elems {
            s |= 1u64 << e;
        }
        ElemSet(s)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, e: Element) -> bool {
        e < 64 && self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: Element) {
        self.0 |= 1u64 << e;
    }

    pub fn remove(&mut self, e: Element) {
        self.0 &= !(1u64 << e);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn difference(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min(self) -> Option<Element> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> ElemIter {
        ElemIter(self.0)
    }

    pub fn to_vec(self) -> Vec<Element> {
        self.iter().collect()
    }

    /// Every subset of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = ElemSet> {
        let mask = self.0;
        let mut cur: Option<u64> = Some(0);
        std::iter::from_fn(move || {
            let s = cur?;
            cur = if s == mask {
                None
            } else {
                Some((s.wrapping_sub(mask)) & mask)
            };
            Some(ElemSet(s))
        })
    }
}

pub struct ElemIter(u64);

impl Iterator for ElemIter {
    type Item = Element;
    fn next(&mut self) -> Option<Element> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }
}

impl From<ElemSet> for Vec<Element> {
    fn from(s: ElemSet) -> Vec<Element> {
        s.to_vec()
    }
}

impl TryFrom<Vec<Element>> for ElemSet {
    type Error = String;
    fn try_from(v: Vec<Element>) -> Result<ElemSet, String> {
        match v.iter().find(|&&e| e >= MAX_SET_DOMAIN) {
            Some(e) => Err(format!("element {e} too large for a set")),
            None => Ok(ElemSet::from_elems(v)),
        }
    }
}

impl FromIterator<Element> for ElemSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        ElemSet::from_elems(iter)
    }
}

impl fmt::Display for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `{0,2}`, `0,2` or `{}`.
pub fn parse_elem_set(text: &str) -> Option<ElemSet> {
    let t = text.trim();
    let t = t.strip_prefix('{').map(|r| r.strip_suffix('}')).unwrap_or(Some(t))?;
    let mut set = ElemSet::EMPTY;
    for part in t.split(',') {
        let p = part.trim();
        if p.is_empty() {
            continue;
        }
        let e: usize = p.parse().ok()?;
        if e >= MAX_SET_DOMAIN {
            return None;
        }
        set.insert(e);
    }
    Some(set)
}
