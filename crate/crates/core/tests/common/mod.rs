//! Brute-force oracles and generators shared by the integration tests.
//!
//! Nothing here calls the library's search, evaluation or closure code; the
//! oracles only use structures as tuple sets.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use fomc_core::formulas::{Formula, Quantifier};
use fomc_core::cores::UxCore;
use fomc_core::shops::{Shop, ShopProfile};
use fomc_core::{ElemSet, Element, Structure};
use rand::Rng;

/// Structure with one binary symbol `E` whose edge set is the bit pattern
/// `mask` over `n * n` cells, row-major.
pub fn binary_structure(n: usize, mask: u64) -> Structure {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if mask >> (a * n + b) & 1 == 1 {
                edges.push((a, b));
            }
        }
    }
    Structure::graph(n, &edges).unwrap()
}

/// All `2^(n*n)` single-binary-relation structures on `n` elements.
pub fn all_binary_structures(n: usize) -> impl Iterator<Item = Structure> {
    (0..1u64 << (n * n)).map(move |m| binary_structure(n, m))
}

pub fn random_binary_structure<R: Rng>(rng: &mut R, n: usize) -> Structure {
    binary_structure(n, rng.gen::<u64>() & ((1u64 << (n * n)) - 1))
}

fn tuples(n: usize, arity: usize) -> Vec<Vec<Element>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for t in &out {
            for e in 0..n {
                let mut t2 = t.clone();
                t2.push(e);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Facts of a structure as `(symbol, tuple)` pairs.
pub fn facts(s: &Structure) -> BTreeSet<(String, Vec<Element>)> {
    let mut out = BTreeSet::new();
    for sym in s.signature().symbols() {
        for t in tuples(s.size(), sym.arity) {
            if s.holds(&sym.name, &t) {
                out.insert((sym.name.clone(), t));
            }
        }
    }
    out
}

/// Every map from `0..n` to nonempty subsets of `0..m`, as image lists.
pub fn all_hyper_maps(n: usize, m: usize) -> Vec<Vec<u64>> {
    let subsets: Vec<u64> = (1..1u64 << m).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &out {
            for &s in &subsets {
                let mut v2 = v.clone();
                v2.push(s);
                next.push(v2);
            }
        }
        out = next;
    }
    out
}

fn members(mask: u64) -> Vec<Element> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// `images` sends every fact of `a` to facts of `b` on all choices.
pub fn hyper_preserves(images: &[u64], a: &Structure, b: &Structure) -> bool {
    let fb = facts(b);
    for (name, t) in facts(a) {
        let mut choices = vec![Vec::new()];
        for &e in &t {
            let mut next = Vec::new();
            for c in &choices {
                for x in members(images[e]) {
                    let mut c2 = c.clone();
                    c2.push(x);
                    next.push(c2);
                }
            }
            choices = next;
        }
        if choices.into_iter().any(|c| !fb.contains(&(name.clone(), c))) {
            return false;
        }
    }
    true
}

pub fn covers(images: &[u64], m: usize) -> bool {
    images.iter().fold(0, |a, &b| a | b) == (1u64 << m) - 1
}

/// Every shop of `s`, by filtering all hyper-maps.
pub fn brute_shops(s: &Structure) -> Vec<Vec<u64>> {
    let n = s.size();
    all_hyper_maps(n, n)
        .into_iter()
        .filter(|f| covers(f, n) && hyper_preserves(f, s, s))
        .collect()
}

pub fn shop_masks(f: &Shop) -> Vec<u64> {
    f.images().map(|s: ElemSet| s.bits()).collect()
}

/// Every function `0..n -> 0..m`.
pub fn all_functions(n: usize, m: usize) -> Vec<Vec<Element>> {
    tuples(m, n)
}

pub fn is_hom(h: &[Element], a: &Structure, b: &Structure) -> bool {
    let fb = facts(b);
    facts(a)
        .into_iter()
        .all(|(name, t)| fb.contains(&(name, t.iter().map(|&e| h[e]).collect())))
}

pub fn brute_hom(a: &Structure, b: &Structure, injective: bool) -> bool {
    all_functions(a.size(), b.size()).into_iter().any(|h| {
        is_hom(&h, a, b) && (!injective || h.iter().collect::<BTreeSet<_>>().len() == h.len())
    })
}

/// A surjective hyper-morphism `a -> b` exists.
pub fn brute_surjective_hyper(a: &Structure, b: &Structure) -> bool {
    all_hyper_maps(a.size(), b.size())
        .into_iter()
        .any(|f| covers(&f, b.size()) && hyper_preserves(&f, a, b))
}

/// `x ~ y` in `s`: swapping `x` and `y` at any one position keeps every fact.
pub fn brute_sim(s: &Structure) -> Vec<Vec<bool>> {
    let n = s.size();
    let fs = facts(s);
    let mut out = vec![vec![true; n]; n];
    for (x, row) in out.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            'sym: for sym in s.signature().symbols() {
                for t in tuples(n, sym.arity) {
                    for i in 0..sym.arity {
                        if t[i] != x {
                            continue;
                        }
                        let mut t2 = t.clone();
                        t2[i] = y;
                        let a = fs.contains(&(sym.name.clone(), t.clone()));
                        let b = fs.contains(&(sym.name.clone(), t2));
                        if a != b {
                            *cell = false;
                            break 'sym;
                        }
                    }
                }
            }
        }
    }
    out
}

/// `a` and `b` have isomorphic quotients by `~`.
pub fn brute_quotient_iso(a: &Structure, b: &Structure) -> bool {
    let qa = brute_quotient(a);
    let qb = brute_quotient(b);
    qa.size() == qb.size()
        && all_functions(qa.size(), qb.size()).into_iter().any(|h| {
            h.iter().collect::<BTreeSet<_>>().len() == h.len()
                && is_hom(&h, &qa, &qb)
                && is_hom(&h, &qa.complement(), &qb.complement())
        })
}

fn brute_quotient(s: &Structure) -> Structure {
    let sim = brute_sim(s);
    let n = s.size();
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if class[x] == usize::MAX {
            for y in x..n {
                if sim[x][y] && sim[y][x] {
                    class[y] = reps.len();
                }
            }
            reps.push(x);
        }
    }
    let mut rels = Vec::new();
    for sym in s.signature().symbols() {
        let mut ts = Vec::new();
        for t in tuples(reps.len(), sym.arity) {
            let orig: Vec<Element> = t.iter().map(|&c| reps[c]).collect();
            if s.holds(&sym.name, &orig) {
                ts.push(t);
            }
        }
        rels.push((sym.name.clone(), sym.arity, ts));
    }
    Structure::from_relations(reps.len(), rels).unwrap()
}

/// Direct Tarskian evaluation by substitution.
pub fn brute_eval(s: &Structure, f: &Formula, env: &mut HashMap<String, Element>) -> bool {
    match f {
        Formula::Const(b) => *b,
        Formula::Atom { symbol, args } => {
            let t: Vec<Element> = args.iter().map(|a| env[a]).collect();
            s.holds(symbol, &t)
        }
        Formula::Eq(a, b) => env[a] == env[b],
        Formula::Not(g) => !brute_eval(s, g, env),
        Formula::And(cs) => cs.iter().all(|c| brute_eval(s, c, env)),
        Formula::Or(cs) => cs.iter().any(|c| brute_eval(s, c, env)),
        Formula::Quant {
            kind,
            var,
            restriction,
            body,
        } => {
            let dom: Vec<Element> = match restriction {
                Some(r) => r.iter().copied().collect(),
                None => (0..s.size()).collect(),
            };
            let old = env.get(var).copied();
            let mut result = *kind == Quantifier::Forall;
            for e in dom {
                env.insert(var.clone(), e);
                let v = brute_eval(s, body, env);
                if v != result {
                    result = v;
                    break;
                }
            }
            match old {
                Some(o) => env.insert(var.clone(), o),
                None => env.remove(var),
            };
            result
        }
    }
}

pub fn brute_eval_sentence(s: &Structure, f: &Formula) -> bool {
    brute_eval(s, f, &mut HashMap::new())
}

/// Options for [`random_formula`].
#[derive(Clone, Copy)]
pub struct Gen {
    pub depth: usize,
    pub negation: bool,
    pub equality: bool,
}

/// A random sentence over the single binary symbol `E`.
pub fn random_formula<R: Rng>(rng: &mut R, g: Gen) -> Formula {
    fn go<R: Rng>(rng: &mut R, g: Gen, depth: usize, bound: &mut Vec<String>) -> Formula {
        let leaf = bound.is_empty() && depth == 0;
        if leaf {
            return Formula::Const(rng.gen_bool(0.5));
        }
        let choice = if depth == 0 { 0 } else if bound.is_empty() { 4 } else { rng.gen_range(0..6) };
        match choice {
            0 | 1 if !bound.is_empty() => {
                let a = bound[rng.gen_range(0..bound.len())].clone();
                let b = bound[rng.gen_range(0..bound.len())].clone();
                let atom = if g.equality && rng.gen_bool(0.25) {
                    Formula::Eq(a, b)
                } else {
                    Formula::Atom {
                        symbol: "E".into(),
                        args: vec![a, b],
                    }
                };
                if g.negation && rng.gen_bool(0.3) {
                    Formula::not(atom)
                } else {
                    atom
                }
            }
            2 => Formula::And(vec![go(rng, g, depth - 1, bound), go(rng, g, depth - 1, bound)]),
            3 => Formula::Or(vec![go(rng, g, depth - 1, bound), go(rng, g, depth - 1, bound)]),
            5 if g.negation => Formula::not(go(rng, g, depth - 1, bound)),
            _ => {
                let v = format!("x{}", bound.len());
                bound.push(v.clone());
                let body = go(rng, g, depth.saturating_sub(1).max(usize::from(bound.len() < 2)), bound);
                bound.pop();
                let kind = if rng.gen_bool(0.5) {
                    Quantifier::Exists
                } else {
                    Quantifier::Forall
                };
                Formula::quant(kind, v, body)
            }
        }
    }
    go(rng, g, g.depth, &mut Vec::new())
}

/// Every sentence over `E` of quantifier depth at most `depth`, built from
/// atoms, `∧`, `∨`, `¬`, with at most one binary connective per level.
pub fn sentences(depth: usize) -> Vec<Formula> {
    fn open(bound: &[String], depth: usize) -> Vec<Formula> {
        let mut atoms = vec![Formula::Const(true), Formula::Const(false)];
        for a in bound {
            for b in bound {
                atoms.push(Formula::atom("E", &[a, b]));
            }
        }
        let mut out = atoms.clone();
        for a in &atoms {
            out.push(Formula::not(a.clone()));
        }
        if depth > 0 {
            let v = format!("x{}", bound.len());
            let mut inner = bound.to_vec();
            inner.push(v.clone());
            for body in open(&inner, depth - 1) {
                for q in [Quantifier::Exists, Quantifier::Forall] {
                    let f = Formula::quant(q, v.clone(), body.clone());
                    out.push(f.clone());
                    for a in &atoms[2..] {
                        out.push(Formula::And(vec![a.clone(), f.clone()]));
                        out.push(Formula::Or(vec![a.clone(), f.clone()]));
                    }
                }
            }
        }
        out
    }
    open(&[], depth)
}

/// Every shop of a structure with one binary symbol `E`, by filtering all
/// hyper-maps against the adjacency rows.
pub fn brute_shops_binary(s: &Structure) -> Vec<Vec<u64>> {
    let n = s.size();
    let adj: Vec<u64> = (0..n)
        .map(|a| (0..n).filter(|&b| s.holds("E", &[a, b])).fold(0, |m, b| m | 1 << b))
        .collect();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| adj[a] >> b & 1 == 1)
        .collect();
    all_hyper_maps(n, n)
        .into_iter()
        .filter(|f| {
            covers(f, n)
                && edges
                    .iter()
                    .all(|&(a, b)| members(f[a]).into_iter().all(|x| f[b] & !adj[x] == 0))
        })
        .collect()
}

/// Every `exists_shop` profile on `n` elements.
pub fn profiles(n: usize) -> Vec<ShopProfile> {
    let mut out = Vec::new();
    for e in 0..n {
        out.push(ShopProfile::AShop(e));
        out.push(ShopProfile::EShop(e));
        for x in 0..n {
            out.push(ShopProfile::SingletonUx { u: e, x });
        }
    }
    for m in 1..1u64 << n {
        out.push(ShopProfile::USurjective(ElemSet(m)));
        out.push(ShopProfile::XTotal(ElemSet(m)));
        for m2 in 1..1u64 << n {
            out.push(ShopProfile::Ux { u: ElemSet(m), x: ElemSet(m2) });
        }
    }
    out
}

/// Direct reading of a profile on image masks.
pub fn profile_holds(p: &ShopProfile, f: &[u64], n: usize) -> bool {
    let full = (1u64 << n) - 1;
    match *p {
        ShopProfile::AShop(u) => f[u] == full,
        ShopProfile::EShop(x) => f.iter().all(|&m| m >> x & 1 == 1),
        ShopProfile::SingletonUx { u, x } => {
            (0..n).all(|z| if z == u { f[z] == full } else { f[z] == 1 << x })
        }
        ShopProfile::USurjective(u) => u.iter().fold(0, |a, e| a | f[e]) == full,
        ShopProfile::XTotal(x) => f.iter().all(|&m| m & x.bits() != 0),
        ShopProfile::Ux { u, x } => {
            u.iter().fold(0, |a, e| a | f[e]) == full && f.iter().all(|&m| m & x.bits() != 0)
        }
    }
}

/// The identity-form clauses of the canonical shop in core coordinates.
pub fn canonical_clauses_hold(c: &UxCore) -> bool {
    let (u, x, h) = (c.core_u, c.core_x, &c.canonical);
    let fixed = u.intersection(x).union(x.difference(u));
    let mut sprayed = ElemSet::EMPTY;
    for z in 0..c.core.size() {
        let img = h.image(z);
        if fixed.contains(z) {
            if img != ElemSet::singleton(z) {
                return false;
            }
        } else {
            let spray = img.difference(ElemSet::singleton(z));
            if !img.contains(z) || !spray.is_subset(x.difference(u)) {
                return false;
            }
            sprayed = sprayed.union(spray);
        }
    }
    sprayed == x.difference(u)
        && h.preserves(&c.core)
        && h.is_u_surjective(u)
        && h.is_x_total(x)
}
