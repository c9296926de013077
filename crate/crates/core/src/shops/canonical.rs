use serde::{Deserialize, Serialize};

use super::{exists_shop, Shop, ShopProfile};
use crate::bits::ElemSet;
use crate::error::{Error, Result};
use crate::structures::{Element, Structure};

/// The maximal U-X-shop of identity form of `s`, where `U ∪ X` is the whole
/// domain: `h(y) = {y}` on `X`, `h(u) = {u} ∪ X_u` on `U \ X`.
///
/// Adding a single pair `(u, x)` to the identity preserves `s` exactly when
/// `x` lies in `X_u` of the maximal shop, so each pair is tested on its own.
pub fn canonical_shop(s: &Structure, u: ElemSet, x: ElemSet) -> Result<Shop> {
    let n = s.size();
    let full = ElemSet::full(n);
    if u.union(x) != full || !u.is_subset(full) || !x.is_subset(full) {
        return Err(Error::InvalidArgument(format!(
            "U = {u} and X = {x} must cover the domain of size {n}"
        )));
    }
    if n > 64 {
        return Err(Error::DomainTooLarge { size: n, bound: 64 });
    }
    let only_u = u.difference(x);
    let only_x = x.difference(u);
    let mut images: Vec<u64> = (0..n).map(|e| 1u64 << e).collect();
    for a in only_u.iter() {
        for b in only_x.iter() {
            let mut t: Vec<u64> = (0..n).map(|e| 1u64 << e).collect();
            t[a] |= 1u64 << b;
            if Shop::from_masks(t).preserves(s) {
                images[a] |= 1u64 << b;
            }
        }
    }
    let h = Shop::from_masks(images);
    if h.preserves(s) && h.is_u_surjective(u) && h.is_x_total(x) {
        Ok(h)
    } else if exists_shop(s, ShopProfile::Ux { u, x })?.is_none() {
        Err(Error::InvalidArgument(format!(
            "the structure has no U-X-shop for U = {u}, X = {x}"
        )))
    } else {
        Err(Error::InvalidArgument(format!(
            "no U-X-shop of identity form for U = {u}, X = {x}; U and X are not minimal"
        )))
    }
}

/// Decomposition of a shop in 3-permuted form: permutations on `U ∩ X`,
/// `X \ U` and `U \ X`, plus the extra images `X_u ⊆ X \ U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutedFormWitness {
    pub zeta: Vec<(Element, Element)>,
    pub chi: Vec<(Element, Element)>,
    pub upsilon: Vec<(Element, Element)>,
    pub spray: Vec<(Element, ElemSet)>,
}

impl PermutedFormWitness {
    pub fn rebuild(&self, n: usize) -> Shop {
        let mut images = vec![0u64; n];
        for &(a, b) in self.zeta.iter().chain(&self.chi).chain(&self.upsilon) {
            images[a] |= 1u64 << b;
        }
        for &(a, set) in &self.spray {
            images[a] |= set.bits();
        }
        Shop::from_masks(images)
    }
}

/// Decomposes `f` relative to `U` and `X` (which must cover the domain), or
/// returns `None` when `f` is not in 3-permuted form.
pub fn check_3_permuted(f: &Shop, u: ElemSet, x: ElemSet) -> Option<PermutedFormWitness> {
    let n = f.size();
    let full = ElemSet::full(n);
    if u.union(x) != full || !u.union(x).is_subset(full) {
        return None;
    }
    let both = u.intersection(x);
    let only_u = u.difference(x);
    let only_x = x.difference(u);

    let single_in = |e: Element, part: ElemSet| -> Option<Element> {
        let img = f.image(e);
        (img.len() == 1 && img.is_subset(part)).then(|| img.min().unwrap())
    };
    let zeta: Vec<_> = both
        .iter()
        .map(|e| single_in(e, both).map(|t| (e, t)))
        .collect::<Option<_>>()?;
    let chi: Vec<_> = only_x
        .iter()
        .map(|e| single_in(e, only_x).map(|t| (e, t)))
        .collect::<Option<_>>()?;
    let mut upsilon = Vec::new();
    let mut spray = Vec::new();
    for e in only_u.iter() {
        let img = f.image(e);
        let in_u = img.intersection(only_u);
        if in_u.len() != 1 || !img.difference(in_u).is_subset(only_x) {
            return None;
        }
        upsilon.push((e, in_u.min().unwrap()));
        spray.push((e, img.difference(in_u)));
    }
    let bijective = |pairs: &[(Element, Element)]| {
        let targets: ElemSet = pairs.iter().map(|p| p.1).collect();
        targets.len() == pairs.len()
    };
    if !bijective(&zeta) || !bijective(&chi) || !bijective(&upsilon) {
        return None;
    }
    let w = PermutedFormWitness {
        zeta,
        chi,
        upsilon,
        spray,
    };
    (w.rebuild(n) == *f).then_some(w)
}

/// Membership in the completion: every shop of 3-permuted form.
pub fn completion_contains(f: &Shop, u: ElemSet, x: ElemSet) -> bool {
    check_3_permuted(f, u, x).is_some()
}

/// Four generators of the completion for disjoint `U`, `X` covering
/// `0..|U|+|X|`: a transposition and a cycle on `U` with `X` added to every
/// image of `U`, then a transposition and a cycle on `X` with the same spray.
pub fn completion_generators(u: ElemSet, x: ElemSet) -> Result<Vec<Shop>> {
    let n = u.len() + x.len();
    if u.is_empty() || x.is_empty() || !u.intersection(x).is_empty() || u.union(x) != ElemSet::full(n) {
        return Err(Error::InvalidArgument(
            "U and X must be nonempty, disjoint and cover the domain".into(),
        ));
    }
    let us = u.to_vec();
    let xs = x.to_vec();
    let transposition = |v: &[Element]| -> Vec<(Element, Element)> {
        let mut p: Vec<_> = v.iter().map(|&e| (e, e)).collect();
        if v.len() >= 2 {
            p[0].1 = v[1];
            p[1].1 = v[0];
        }
        p
    };
    let cycle = |v: &[Element]| -> Vec<(Element, Element)> {
        (0..v.len()).map(|i| (v[i], v[(i + 1) % v.len()])).collect()
    };
    let identity = |v: &[Element]| -> Vec<(Element, Element)> { v.iter().map(|&e| (e, e)).collect() };
    let build = |on_u: Vec<(Element, Element)>, on_x: Vec<(Element, Element)>| {
        let mut images = vec![0u64; n];
        for (a, b) in on_u {
            images[a] = (1u64 << b) | x.bits();
        }
        for (a, b) in on_x {
            images[a] = 1u64 << b;
        }
        Shop::from_masks(images)
    };
    Ok(vec![
        build(transposition(&us), identity(&xs)),
        build(cycle(&us), identity(&xs)),
        build(identity(&us), transposition(&xs)),
        build(identity(&us), cycle(&xs)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shops::generate_dsm;

    fn set(e: &[Element]) -> ElemSet {
        ElemSet::from_elems(e.iter().copied())
    }

    #[test]
    fn canonical_of_k2_plus_k1() {
        let s = Structure::graph(3, &[(0, 1), (1, 0)]).unwrap();
        let h = canonical_shop(&s, set(&[2]), set(&[0, 1])).unwrap();
        assert_eq!(h, Shop::from_lists(&[&[0], &[1], &[0, 1, 2]]).unwrap());
    }

    #[test]
    fn canonical_of_rigid_is_identity() {
        let s = Structure::graph(2, &[(0, 1), (1, 0)]).unwrap();
        let h = canonical_shop(&s, set(&[0, 1]), set(&[0, 1])).unwrap();
        assert_eq!(h, Shop::identity(2));
    }

    #[test]
    fn canonical_requires_cover() {
        let s = Structure::graph(3, &[(0, 1), (1, 0)]).unwrap();
        assert!(canonical_shop(&s, set(&[2]), set(&[0])).is_err());
    }

    #[test]
    fn three_permuted() {
        let f = Shop::from_lists(&[&[0, 1], &[1]]).unwrap();
        let w = check_3_permuted(&f, set(&[0]), set(&[1])).unwrap();
        assert_eq!(w.upsilon, vec![(0, 0)]);
        assert_eq!(w.spray, vec![(0, set(&[1]))]);
        assert_eq!(w.rebuild(2), f);
        // with the roles swapped the X element 0 has a two-element image
        assert!(check_3_permuted(&f, set(&[1]), set(&[0])).is_none());
    }

    #[test]
    fn x_onto_u_is_not_in_completion() {
        let f = Shop::from_lists(&[&[0], &[0, 1]]).unwrap();
        assert!(!completion_contains(&f, set(&[0]), set(&[1])));
    }

    #[test]
    fn generators_span_completion() {
        let u = set(&[0, 1]);
        let x = set(&[2, 3]);
        let gens = completion_generators(u, x).unwrap();
        let m = generate_dsm(&gens, 4).unwrap();
        assert!(m.shops().iter().all(|f| completion_contains(f, u, x)));
        // 2 permutations on U, 2 on X, and any subset of X added to each U image
        assert_eq!(m.len(), 2 * 2 * 4 * 4);
    }
}
