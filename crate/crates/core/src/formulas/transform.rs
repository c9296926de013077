use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Formula, FragmentKey, Quantifier};
use crate::error::{Error, Result};
use crate::structures::Element;

/// Negation normal form: negation only on atoms and equalities.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, false)
}

fn nnf(f: &Formula, negate: bool) -> Formula {
    match f {
        Formula::Const(b) => Formula::Const(*b != negate),
        Formula::Atom { .. } | Formula::Eq(..) => {
            if negate {
                Formula::Not(Box::new(f.clone()))
            } else {
                f.clone()
            }
        }
        Formula::Not(inner) => nnf(inner, !negate),
        Formula::And(cs) | Formula::Or(cs) => {
            let children = cs.iter().map(|c| nnf(c, negate)).collect();
            if matches!(f, Formula::And(_)) != negate {
                Formula::And(children)
            } else {
                Formula::Or(children)
            }
        }
        Formula::Quant {
            kind,
            var,
            restriction,
            body,
        } => Formula::Quant {
            kind: if negate { kind.dual() } else { *kind },
            var: var.clone(),
            restriction: restriction.clone(),
            body: Box::new(nnf(body, negate)),
        },
    }
}

pub fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::Const(_) | Formula::Atom { .. } | Formula::Eq(..) => true,
        Formula::Not(inner) => matches!(**inner, Formula::Atom { .. } | Formula::Eq(..)),
        Formula::And(cs) | Formula::Or(cs) => cs.iter().all(is_nnf),
        Formula::Quant { body, .. } => is_nnf(body),
    }
}

/// The dual sentence: `S |= f` iff `complement(S)` does not satisfy the
/// result. Built as the NNF of `~f` with every relational literal flipped;
/// equality literals are read identically in both structures and stay.
pub fn dualize(f: &Formula) -> Formula {
    flip(&nnf(f, true))
}

fn flip(f: &Formula) -> Formula {
    match f {
        Formula::Atom { .. } => Formula::Not(Box::new(f.clone())),
        Formula::Not(inner) if matches!(**inner, Formula::Atom { .. }) => (**inner).clone(),
        Formula::Const(_) | Formula::Eq(..) | Formula::Not(_) => f.clone(),
        Formula::And(cs) => Formula::And(cs.iter().map(flip).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(flip).collect()),
        Formula::Quant {
            kind,
            var,
            restriction,
            body,
        } => Formula::Quant {
            kind: *kind,
            var: var.clone(),
            restriction: restriction.clone(),
            body: Box::new(flip(body)),
        },
    }
}

/// The symbols used by the NNF of `f`.
pub fn fragment_of(f: &Formula) -> FragmentKey {
    fn walk(f: &Formula, k: &mut FragmentKey) {
        match f {
            Formula::Const(_) => {}
            Formula::Atom { .. } => {}
            Formula::Eq(..) => k.eq = true,
            Formula::Not(inner) => match **inner {
                Formula::Eq(..) => k.neq = true,
                _ => k.neg = true,
            },
            Formula::And(cs) => {
                k.and = true;
                cs.iter().for_each(|c| walk(c, k));
            }
            Formula::Or(cs) => {
                k.or = true;
                cs.iter().for_each(|c| walk(c, k));
            }
            Formula::Quant { kind, body, .. } => {
                match kind {
                    Quantifier::Exists => k.exists = true,
                    Quantifier::Forall => k.forall = true,
                }
                walk(body, k);
            }
        }
    }
    let mut k = FragmentKey::default();
    walk(&to_nnf(f), &mut k);
    k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RelativisationMode {
    /// Restrict universal quantifiers to `U`.
    UniversalOnly,
    /// Restrict existential quantifiers to `X`.
    ExistentialOnly,
    Both,
}

/// Restricts universal quantifiers to `u` and existential ones to `x`,
/// intersecting with restrictions already present. `f` must be in NNF.
pub fn relativise(
    f: &Formula,
    u: &BTreeSet<Element>,
    x: &BTreeSet<Element>,
    mode: RelativisationMode,
) -> Result<Formula> {
    if !is_nnf(f) {
        return Err(Error::InvalidArgument(
            "relativisation needs a formula in negation normal form".into(),
        ));
    }
    rel(f, u, x, mode)
}

fn rel(
    f: &Formula,
    u: &BTreeSet<Element>,
    x: &BTreeSet<Element>,
    mode: RelativisationMode,
) -> Result<Formula> {
    Ok(match f {
        Formula::And(cs) => Formula::And(cs.iter().map(|c| rel(c, u, x, mode)).collect::<Result<_>>()?),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| rel(c, u, x, mode)).collect::<Result<_>>()?),
        Formula::Quant {
            kind,
            var,
            restriction,
            body,
        } => {
            let applies = match kind {
                Quantifier::Forall => mode != RelativisationMode::ExistentialOnly,
                Quantifier::Exists => mode != RelativisationMode::UniversalOnly,
            };
            let restriction = if applies {
                let set = if *kind == Quantifier::Forall { u } else { x };
                let r: BTreeSet<Element> = match restriction {
                    Some(old) => old.intersection(set).copied().collect(),
                    None => set.clone(),
                };
                if r.is_empty() {
                    return Err(Error::EmptyRestriction(var.clone()));
                }
                Some(r)
            } else {
                restriction.clone()
            };
            Formula::Quant {
                kind: *kind,
                var: var.clone(),
                restriction,
                body: Box::new(rel(body, u, x, mode)?),
            }
        }
        other => other.clone(),
    })
}
