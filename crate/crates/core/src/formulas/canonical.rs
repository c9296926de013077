use serde::{Deserialize, Serialize};

use super::{Formula, Quantifier, Var};
use crate::error::{Error, Result};
use crate::shops::enumerate_she;
use crate::structures::{all_tuples, Element, Signature, Structure};

/// Default limit on the number of AST nodes a canonical construction may
/// produce.
pub const DEFAULT_FORMULA_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CanonicalKind {
    /// `exists v. facts(v)`.
    Pp,
    /// As `Pp`, with all variables pairwise distinct.
    PpNeq,
    /// Positive and negative facts, and every element similar to some `v_i`.
    EqfreeNeg,
    /// The sentence whose models of size at most `width` are exactly the
    /// targets of surjective hyper-morphisms from the structure.
    PosEqfree { width: usize },
}

fn names(prefix: &str, count: usize) -> Vec<Var> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

/// Every atom over `vars` whose element tuple under `elems` holds in `s`.
fn facts_over(s: &Structure, vars: &[Var], elems: &[Element]) -> Vec<Formula> {
    let mut out = Vec::new();
    for (sym, rel) in s.signature().symbols().iter().zip(s.relations()) {
        if rel.is_empty() {
            continue;
        }
        for pos in all_tuples(vars.len(), sym.arity) {
            let tuple: Vec<Element> = pos.iter().map(|&p| elems[p]).collect();
            if rel.contains(&tuple) {
                out.push(Formula::Atom {
                    symbol: sym.name.clone(),
                    args: pos.iter().map(|&p| vars[p].clone()).collect(),
                });
            }
        }
    }
    out
}

fn atom_cells(sig: &Signature, vars: usize) -> f64 {
    sig.symbols()
        .iter()
        .map(|s| (vars as f64).powi(s.arity as i32))
        .sum()
}

fn check_budget(estimate: f64, budget: usize, what: &str) -> Result<()> {
    if estimate > budget as f64 {
        Err(Error::BudgetExceeded(format!(
            "{what} needs up to {estimate:.0} nodes, budget is {budget}"
        )))
    } else {
        Ok(())
    }
}

/// The canonical sentence of `a` for the given fragment.
pub fn canonical_sentence(a: &Structure, kind: CanonicalKind, budget: usize) -> Result<Formula> {
    let n = a.size();
    let v = names("v", n);
    let elems: Vec<Element> = (0..n).collect();
    match kind {
        CanonicalKind::Pp | CanonicalKind::PpNeq => {
            check_budget(n as f64 * n as f64 + a.tuple_count() as f64 + n as f64, budget, "canonical sentence")?;
            let mut parts = facts_over(a, &v, &elems);
            if kind == CanonicalKind::PpNeq {
                for i in 0..n {
                    for j in i + 1..n {
                        parts.push(Formula::neq(v[i].clone(), v[j].clone()));
                    }
                }
            }
            Ok(Formula::quant_block(Quantifier::Exists, v, Formula::conj(parts)))
        }
        CanonicalKind::EqfreeNeg => {
            let cells = atom_cells(a.signature(), n);
            let sim_size = 8.0 * atom_cells(a.signature(), 2) * a.signature().len().max(1) as f64;
            check_budget(2.0 * cells + n as f64 * sim_size, budget, "canonical sentence")?;
            let mut parts = Vec::new();
            for (sym, rel) in a.signature().symbols().iter().zip(a.relations()) {
                for t in all_tuples(n, sym.arity) {
                    let atom = Formula::Atom {
                        symbol: sym.name.clone(),
                        args: t.iter().map(|&e| v[e].clone()).collect(),
                    };
                    parts.push(if rel.contains(&t) { atom } else { Formula::not(atom) });
                }
            }
            let similar = Formula::disj(v.iter().map(|vi| sim_formula(a.signature(), "w", vi)));
            parts.push(Formula::forall("w", similar));
            Ok(Formula::quant_block(Quantifier::Exists, v, Formula::conj(parts)))
        }
        CanonicalKind::PosEqfree { width } => {
            let disjuncts = (n as f64).powi(width as i32);
            let estimate = disjuncts * (1.0 + atom_cells(a.signature(), n + width)) + atom_cells(a.signature(), n);
            check_budget(estimate, budget, "canonical sentence")?;
            let w = names("w", width);
            let mut vars = v.clone();
            vars.extend(w.iter().cloned());
            let mut disj = Vec::new();
            for t in all_tuples(n, width) {
                let mut el = elems.clone();
                el.extend(t);
                disj.push(Formula::conj(facts_over(a, &vars, &el)));
            }
            let mut parts = facts_over(a, &v, &elems);
            parts.push(Formula::quant_block(Quantifier::Forall, w, Formula::disj(disj)));
            Ok(Formula::quant_block(Quantifier::Exists, v, Formula::conj(parts)))
        }
    }
}

/// `x ~ y`: for every symbol, exchanging `x` and `y` in any one argument
/// position never changes truth. Quantified positions use fresh names.
pub fn sim_formula(sig: &Signature, x: &str, y: &str) -> Formula {
    let mut prefix = String::from("z");
    while x.starts_with(&prefix) || y.starts_with(&prefix) {
        prefix.push('z');
    }
    let iff = |p: Formula, q: Formula| {
        Formula::Or(vec![
            Formula::And(vec![p.clone(), q.clone()]),
            Formula::And(vec![Formula::not(p), Formula::not(q)]),
        ])
    };
    let mut blocks = Vec::new();
    for sym in sig.symbols() {
        let zs: Vec<Var> = (1..sym.arity).map(|i| format!("{prefix}{i}")).collect();
        let mut parts = Vec::new();
        for pos in 0..sym.arity {
            let with = |e: &str| {
                let mut args = zs.clone();
                args.insert(pos, e.to_string());
                Formula::Atom {
                    symbol: sym.name.clone(),
                    args,
                }
            };
            parts.push(iff(with(x), with(y)));
        }
        blocks.push(Formula::quant_block(Quantifier::Forall, zs, Formula::conj(parts)));
    }
    Formula::conj(blocks)
}

/// A positive equality-free formula with free variables `u0..u(k-1)`
/// defining `relation` over `b`, present iff every shop of `b` preserves it.
pub fn defining_formula(
    b: &Structure,
    relation: &[Vec<Element>],
    arity: usize,
    budget: usize,
) -> Result<Option<Formula>> {
    let n = b.size();
    let target = Structure::from_relations(n, [("S", arity, relation.to_vec())])?;
    let she = enumerate_she(b, false)?;
    if !she.shops().iter().all(|f| f.preserves(&target)) {
        return Ok(None);
    }
    let tuples = target.relation(0).tuples();
    let estimate = tuples.len() as f64
        * (n as f64).powi(n as i32)
        * (1.0 + atom_cells(b.signature(), arity + 2 * n));
    check_budget(estimate, budget, "defining formula")?;
    let u = names("u", arity);
    let v = names("v", n);
    let w = names("w", n);
    let mut uv = u.clone();
    uv.extend(v.iter().cloned());
    let mut uvw = uv.clone();
    uvw.extend(w.iter().cloned());
    let mut alternatives = Vec::new();
    for r in tuples {
        let mut el: Vec<Element> = r.clone();
        el.extend(0..n);
        let mut disj = Vec::new();
        for t in all_tuples(n, n) {
            let mut full = el.clone();
            full.extend(t);
            disj.push(Formula::conj(facts_over(b, &uvw, &full)));
        }
        let mut parts = facts_over(b, &uv, &el);
        parts.push(Formula::quant_block(Quantifier::Forall, w.clone(), Formula::disj(disj)));
        alternatives.push(Formula::quant_block(
            Quantifier::Exists,
            v.clone(),
            Formula::conj(parts),
        ));
    }
    Ok(Some(Formula::disj(alternatives)))
}
