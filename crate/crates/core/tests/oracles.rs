//! Library results against the brute-force oracles in `common`.

mod common;

use std::collections::BTreeSet;

use common::*;
use fomc_core::evaluator::{contained_in, evaluate, ContainmentFragment};
use fomc_core::formulas::{canonical_sentence, CanonicalKind, DEFAULT_FORMULA_BUDGET};
use fomc_core::lattice::{all_shops, enumerate_dsms};
use fomc_core::shops::{enumerate_she, exists_shop, generate_dsm, Shop};
use fomc_core::structures::{find_morphism, MorphismKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn enumerate_she_matches_filter_at_two_and_three() {
    for n in 2..=3 {
        for s in all_binary_structures(n) {
            let want: BTreeSet<Vec<u64>> = brute_shops(&s).into_iter().collect();
            let got: BTreeSet<Vec<u64>> =
                enumerate_she(&s, false).unwrap().shops().iter().map(shop_masks).collect();
            assert_eq!(got, want, "{s:?}");
        }
    }
}

#[test]
fn exists_shop_matches_filter() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cases: Vec<_> = all_binary_structures(2).collect();
    for _ in 0..40 {
        cases.push(random_binary_structure(&mut rng, 3));
    }
    for s in cases {
        let n = s.size();
        let shops = brute_shops(&s);
        for p in profiles(n) {
            let want = shops.iter().any(|f| profile_holds(&p, f, n));
            let got = exists_shop(&s, p).unwrap();
            assert_eq!(got.is_some(), want, "{p:?} on {s:?}");
            if let Some(f) = got {
                assert!(profile_holds(&p, &shop_masks(&f), n));
                assert!(f.as_hyper_map().preserves(&s, &s));
            }
        }
    }
}

#[test]
fn morphisms_match_enumeration() {
    let structs: Vec<_> = all_binary_structures(2).chain((0..6).map(|m| binary_structure(1, m & 1))).collect();
    for a in &structs {
        for b in &structs {
            let hom = find_morphism(a, b, MorphismKind::Homomorphism).unwrap().is_some();
            assert_eq!(hom, brute_hom(a, b, false));
            let inj = find_morphism(a, b, MorphismKind::Injective).unwrap().is_some();
            assert_eq!(inj, brute_hom(a, b, true));
            let hyp = find_morphism(a, b, MorphismKind::SurjectiveHyper).unwrap().is_some();
            assert_eq!(hyp, brute_surjective_hyper(a, b));
        }
    }
}

#[test]
fn canonical_sentences_characterise_containment() {
    let structs: Vec<_> = all_binary_structures(2).collect();
    for a in &structs {
        let pp = canonical_sentence(a, CanonicalKind::Pp, DEFAULT_FORMULA_BUDGET).unwrap();
        let ppn = canonical_sentence(a, CanonicalKind::PpNeq, DEFAULT_FORMULA_BUDGET).unwrap();
        let eqn = canonical_sentence(a, CanonicalKind::EqfreeNeg, DEFAULT_FORMULA_BUDGET).unwrap();
        for b in &structs {
            let theta =
                canonical_sentence(a, CanonicalKind::PosEqfree { width: b.size() }, DEFAULT_FORMULA_BUDGET)
                    .unwrap();
            assert_eq!(brute_eval_sentence(b, &pp), brute_hom(a, b, false));
            assert_eq!(brute_eval_sentence(b, &ppn), brute_hom(a, b, true));
            assert_eq!(brute_eval_sentence(b, &eqn), brute_quotient_iso(a, b), "{a:?} {b:?}");
            assert_eq!(brute_eval_sentence(b, &theta), brute_surjective_hyper(a, b));
            assert_eq!(
                contained_in(a, b, ContainmentFragment::PosEqfree).unwrap(),
                brute_surjective_hyper(a, b)
            );
        }
    }
}

#[test]
fn evaluator_matches_substitution() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = Gen {
        depth: 4,
        negation: true,
        equality: true,
    };
    for _ in 0..400 {
        let n = 1 + (rand::Rng::gen_range(&mut rng, 0..3));
        let s = random_binary_structure(&mut rng, n);
        let f = random_formula(&mut rng, g);
        assert_eq!(evaluate(&s, &f).unwrap(), brute_eval_sentence(&s, &f), "{f}");
    }
}

#[test]
fn census_matches_closure_search() {
    // every DSM is the closure of its own elements, so saturating from the
    // bottom by single-shop extensions reaches all of them
    for n in 1..=3 {
        let shops = all_shops(n).unwrap();
        let bottom = generate_dsm(&[], n).unwrap();
        let mut seen = BTreeSet::from([bottom.shops().to_vec()]);
        let mut frontier = vec![bottom.shops().to_vec()];
        while let Some(m) = frontier.pop() {
            for f in &shops {
                if m.contains(f) {
                    continue;
                }
                let mut gens: Vec<Shop> = m.clone();
                gens.push(f.clone());
                let c = generate_dsm(&gens, n).unwrap().shops().to_vec();
                if seen.insert(c.clone()) {
                    frontier.push(c);
                }
            }
        }
        let nodes: BTreeSet<Vec<Shop>> = enumerate_dsms(n, false)
            .unwrap()
            .into_iter()
            .map(|node| node.dsm.shops().to_vec())
            .collect();
        assert_eq!(nodes, seen, "n = {n}");
    }
}

#[test]
fn all_shops_matches_filter() {
    for n in 1..=3 {
        let want: BTreeSet<Vec<u64>> = all_hyper_maps(n, n).into_iter().filter(|f| covers(f, n)).collect();
        let got: BTreeSet<Vec<u64>> = all_shops(n).unwrap().iter().map(shop_masks).collect();
        assert_eq!(got, want);
    }
}
