//! Acceptance suite: runs each criterion and prints one PASS/FAIL line.
//!
//! Run with `cargo test -p fomc-core --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use fomc_core::classifier::{boolean_schaefer, classify_pos_eqfree, ComplexityClass, SchaeferClass};
use fomc_core::cores::{ux_core, ux_shape};
use fomc_core::evaluator::{check_relativisation, evaluate};
use fomc_core::formulas::{dualize, canonical_sentence, CanonicalKind, Formula, Quantifier, DEFAULT_FORMULA_BUDGET};
use fomc_core::gadgets::{
    boolean_nae, complete_graph, dhat, g_gadget, meta_reduction, reduce_nae_to_k2, reduce_qcsp_nae_to_gadget,
    NaeTarget,
};
use fomc_core::lattice::{all_shops, enumerate_dsms};
use fomc_core::shops::{completion_contains, enumerate_she, exists_shop, Shop};
use fomc_core::structures::are_isomorphic;
use fomc_core::{ElemSet, Structure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn class(s: &Structure) -> ComplexityClass {
    classify_pos_eqfree(s).unwrap().class
}

fn census() -> Check {
    let nodes = enumerate_dsms(2, false).map_err(|e| e.to_string())?;
    ensure(nodes.len() == 5, || format!("{} nodes", nodes.len()))?;
    let shop = |lists: &[&[usize]]| Shop::from_lists(lists).unwrap();
    let expected = [
        (vec![shop(&[&[0], &[1]])], ComplexityClass::PspaceComplete),
        (vec![shop(&[&[1], &[0]])], ComplexityClass::PspaceComplete),
        (vec![shop(&[&[0], &[0, 1]])], ComplexityClass::InL),
        (vec![shop(&[&[0, 1], &[1]])], ComplexityClass::InL),
        (vec![shop(&[&[0, 1], &[0, 1]])], ComplexityClass::InL),
    ];
    for (gens, tag) in expected {
        let node = nodes.iter().find(|n| n.generators == gens);
        ensure(node.map(|n| n.tag) == Some(tag), || format!("no node generated by {} tagged {tag:?}", gens[0]))?;
    }
    Ok(())
}

fn golden() -> Vec<(&'static str, Structure, ComplexityClass)> {
    let k21 = complete_graph(2, false).unwrap().disjoint_union(&complete_graph(1, false).unwrap()).unwrap();
    vec![
        ("K1", complete_graph(1, false).unwrap(), ComplexityClass::InL),
        ("K2", complete_graph(2, false).unwrap(), ComplexityClass::PspaceComplete),
        ("K3", complete_graph(3, false).unwrap(), ComplexityClass::PspaceComplete),
        ("K2+K1", k21.clone(), ComplexityClass::NpComplete),
        ("co(K2+K1)", k21.complement(), ComplexityClass::CoNpComplete),
        ("loop at 0", Structure::graph(2, &[(0, 0)]).unwrap(), ComplexityClass::InL),
        ("G(2,2,1,3)", g_gadget(2, 2, 1, 3).unwrap(), ComplexityClass::PspaceComplete),
        ("Dhat(2,2)", dhat(2, 2).unwrap(), ComplexityClass::PspaceComplete),
    ]
}

fn golden_table() -> Check {
    for (name, s, want) in golden() {
        let got = class(&s);
        ensure(got == want, || format!("{name}: {got:?}, expected {want:?}"))?;
    }
    Ok(())
}

/// 3-permuted form for disjoint `U = {0,1}`, `X = {2,3}`: a permutation of
/// `X` on `X`, and on `U` a permutation of `U` plus any part of `X`.
fn in_completion(f: &[u64]) -> bool {
    let (u, x) = (0b0011u64, 0b1100u64);
    let on_x: Vec<u64> = f[2..].to_vec();
    let on_u: Vec<u64> = f[..2].iter().map(|m| m & u).collect();
    on_x.iter().all(|m| m.count_ones() == 1 && m & u == 0)
        && on_x.iter().fold(0, |a, m| a | m) == x
        && on_u.iter().all(|m| m.count_ones() == 1)
        && on_u.iter().fold(0, |a, m| a | m) == u
}

fn dhat_completion() -> Check {
    let d = dhat(2, 2).map_err(|e| e.to_string())?;
    let she = enumerate_she(&d, false).map_err(|e| e.to_string())?;
    let brute: BTreeSet<Vec<u64>> = brute_shops(&d).into_iter().collect();
    let got: BTreeSet<Vec<u64>> = she.shops().iter().map(shop_masks).collect();
    ensure(got == brute, || "enumeration differs from the filter".into())?;
    let (u, x) = (ElemSet::from_elems([0, 1]), ElemSet::from_elems([2, 3]));
    for f in all_shops(4).unwrap() {
        let m = shop_masks(&f);
        let member = she.contains(&f);
        ensure(member == in_completion(&m), || format!("{f}: shE {member}"))?;
        ensure(member == completion_contains(&f, u, x), || format!("{f}: completion predicate"))?;
    }
    Ok(())
}

fn meta() -> Check {
    for (n, want) in [(3, ComplexityClass::NpComplete), (4, ComplexityClass::PspaceComplete)] {
        let sg = meta_reduction(&complete_graph(n, false).unwrap()).map_err(|e| e.to_string())?;
        let got = class(&sg);
        ensure(got == want, || format!("K{n}: {got:?}"))?;
    }
    Ok(())
}

fn containment_pair(a: &Structure, b: &Structure) -> Check {
    let theta = canonical_sentence(a, CanonicalKind::PosEqfree { width: b.size() }, DEFAULT_FORMULA_BUDGET)
        .map_err(|e| e.to_string())?;
    let cases = [
        (CanonicalKind::Pp, brute_hom(a, b, false)),
        (CanonicalKind::PpNeq, brute_hom(a, b, true)),
        (CanonicalKind::EqfreeNeg, brute_quotient_iso(a, b)),
    ];
    ensure(evaluate(b, &theta).unwrap() == brute_surjective_hyper(a, b), || format!("theta {a:?} {b:?}"))?;
    for (kind, want) in cases {
        let phi = canonical_sentence(a, kind, DEFAULT_FORMULA_BUDGET).map_err(|e| e.to_string())?;
        ensure(evaluate(b, &phi).unwrap() == want, || format!("{kind:?} {a:?} {b:?}"))?;
    }
    Ok(())
}

fn containment() -> Check {
    let small: Vec<Structure> = (1..=2).flat_map(all_binary_structures).collect();
    for a in &small {
        for b in &small {
            containment_pair(a, b)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..500 {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = random_binary_structure(&mut rng, n);
        let b = random_binary_structure(&mut rng, m);
        containment_pair(&a, &b)?;
    }
    Ok(())
}

fn relativisation() -> Check {
    for (i, (name, s, _)) in golden().into_iter().enumerate() {
        let c = ux_core(&s).map_err(|e| e.to_string())?;
        let report = check_relativisation(&s, c.u, c.x, 500, 1000 + i as u64).map_err(|e| e.to_string())?;
        ensure(report.agrees(), || format!("{name}: {:?}", report.counterexamples.first()))?;
    }
    Ok(())
}

fn prenex(vars: &[(Quantifier, String)], matrix: Formula) -> Formula {
    vars.iter().rev().fold(matrix, |body, (q, v)| Formula::quant(*q, v.clone(), body))
}

fn reductions() -> Check {
    let k2 = complete_graph(2, false).unwrap();
    let nae = boolean_nae();
    let mut count = 0;
    for k in 1..=3usize {
        let names: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
        for qs in 0..1u32 << k {
            let prefix: Vec<(Quantifier, String)> = names
                .iter()
                .enumerate()
                .map(|(i, v)| (if qs >> i & 1 == 1 { Quantifier::Forall } else { Quantifier::Exists }, v.clone()))
                .collect();
            for args in 0..k.pow(3) {
                let a = [args % k, args / k % k, args / (k * k)].map(|i| names[i].as_str());
                let phi = prenex(&prefix, Formula::atom("NAE", &a));
                let psi = reduce_nae_to_k2(&phi).map_err(|e| e.to_string())?;
                ensure(evaluate(&nae, &phi).unwrap() == evaluate(&k2, &psi).unwrap(), || format!("{phi}"))?;
                count += 1;
            }
        }
    }
    ensure(count > 0, || "no instances".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let targets = [NaeTarget::G22, NaeTarget::Dhat { j: 2, k: 2 }];
    let structures: Vec<Structure> = targets.iter().map(|t| t.structure().unwrap()).collect();
    for _ in 0..20 {
        let k = rng.gen_range(2..=4);
        let prefix: Vec<(Quantifier, String)> = (0..k)
            .map(|i| {
                let q = if rng.gen_bool(0.5) { Quantifier::Forall } else { Quantifier::Exists };
                (q, format!("x{i}"))
            })
            .collect();
        let clause = |rng: &mut ChaCha8Rng| {
            let a: Vec<String> = (0..3).map(|_| format!("x{}", rng.gen_range(0..k))).collect();
            Formula::atom("NAE", &[&a[0], &a[1], &a[2]])
        };
        let phi = prenex(&prefix, Formula::And(vec![clause(&mut rng), clause(&mut rng)]));
        let want = evaluate(&nae, &phi).unwrap();
        for (t, st) in targets.iter().zip(&structures) {
            let psi = reduce_qcsp_nae_to_gadget(&phi, *t).map_err(|e| e.to_string())?;
            ensure(evaluate(st, &psi).unwrap() == want, || format!("{t:?}: {phi}"))?;
        }
    }
    Ok(())
}

fn core_robustness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let s = random_binary_structure(&mut rng, n);
        let c = ux_core(&s).map_err(|e| e.to_string())?;
        let cc = ux_core(&c.core).map_err(|e| e.to_string())?;
        ensure(are_isomorphic(&c.core, &cc.core).unwrap(), || format!("core of core {s:?}"))?;
        ensure(
            (cc.u.len(), cc.x.len(), cc.u.intersection(cc.x).len())
                == (c.u.len(), c.x.len(), c.u.intersection(c.x).len()),
            || format!("sizes {s:?}"),
        )?;
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if s.holds("E", &[a, b]) {
                    edges.push((perm[a], perm[b]));
                }
            }
        }
        let r = ux_core(&Structure::graph(n, &edges).unwrap()).map_err(|e| e.to_string())?;
        ensure(are_isomorphic(&c.core, &r.core).unwrap(), || format!("relabelling {s:?}"))?;
        ensure(canonical_clauses_hold(&c), || format!("canonical shop {} on {s:?}", c.canonical))?;
        ensure(ux_shape(c.u, c.x).is_some(), || format!("three cases {s:?}"))?;
    }
    Ok(())
}

fn oracle_case(s: &Structure) -> Check {
    let n = s.size();
    let shops = brute_shops_binary(s);
    for p in profiles(n) {
        let want = shops.iter().any(|f| profile_holds(&p, f, n));
        let got = exists_shop(s, p).map_err(|e| e.to_string())?;
        ensure(got.is_some() == want, || format!("{p:?} on {s:?}"))?;
        if let Some(f) = got {
            ensure(f.preserves(s) && profile_holds(&p, &shop_masks(&f), n), || format!("witness {f}"))?;
        }
    }
    Ok(())
}

fn oracle() -> Check {
    for s in all_binary_structures(2) {
        oracle_case(&s)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let n = rng.gen_range(3..=4);
        oracle_case(&random_binary_structure(&mut rng, n))?;
    }
    Ok(())
}

fn duality() -> Check {
    let all = sentences(3);
    for s in all_binary_structures(2) {
        let c = s.complement();
        for f in &all {
            ensure(evaluate(&s, f).unwrap() != evaluate(&c, &dualize(f)).unwrap(), || format!("{f}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let g = Gen {
        depth: 5,
        negation: true,
        equality: true,
    };
    for _ in 0..500 {
        let s = random_binary_structure(&mut rng, 3);
        let f = random_formula(&mut rng, g);
        ensure(evaluate(&s, &f).unwrap() != evaluate(&s.complement(), &dualize(&f)).unwrap(), || format!("{f}"))?;
    }
    Ok(())
}

fn schaefer() -> Check {
    let classes = |s: &Structure| -> BTreeSet<SchaeferClass> {
        boolean_schaefer(s, false).unwrap().0.into_iter().collect()
    };
    let nae = classes(&boolean_nae());
    ensure(nae.is_empty(), || format!("NAE: {nae:?}"))?;
    let neq = classes(&complete_graph(2, false).unwrap());
    ensure(neq == BTreeSet::from([SchaeferClass::Bijunctive, SchaeferClass::Affine]), || format!("neq: {neq:?}"))?;
    let nand = classes(&Structure::graph(2, &[(0, 0), (0, 1), (1, 0)]).unwrap());
    ensure(
        nand.contains(&SchaeferClass::Horn) && nand.contains(&SchaeferClass::ZeroValid),
        || format!("nand: {nand:?}"),
    )
}

fn run(number: usize, name: &str, limit: Duration, f: fn() -> Check) -> bool {
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    });
    let took = start.elapsed();
    let verdict = match (&result, took <= limit) {
        (Ok(()), true) => "PASS".to_string(),
        (Ok(()), false) => format!("FAIL (over the {limit:?} limit)"),
        (Err(e), _) => format!("FAIL ({e})"),
    };
    println!("criterion {number:>2} {name:<24} {:>9.3}s  {verdict}", took.as_secs_f64());
    result.is_ok() && took <= limit
}

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let secs = Duration::from_secs;
    let criteria: [Criterion; 11] = [
        ("boolean census", secs(1), census),
        ("golden table", secs(5), golden_table),
        ("gadget algebra", secs(10), dhat_completion),
        ("meta readout", secs(60), meta),
        ("containment", secs(60), containment),
        ("relativisation", secs(30), relativisation),
        ("reductions", secs(30), reductions),
        ("core robustness", secs(60), core_robustness),
        ("shop oracle", secs(60), oracle),
        ("duality", secs(30), duality),
        ("schaefer gates", secs(1), schaefer),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        if !run(i + 1, name, limit, f) {
            failed += 1;
        }
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
