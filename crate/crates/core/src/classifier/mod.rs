//! Complexity of model checking for a fixed structure and fragment.

mod schaefer;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::FragmentKey;
use crate::shops::{exists_shop, Shop, ShopProfile};
use crate::structures::{Element, Structure};

pub use schaefer::{boolean_schaefer, SchaeferClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ComplexityClass {
    #[serde(rename = "L")]
    InL,
    #[serde(rename = "P")]
    InP,
    #[serde(rename = "NP-complete")]
    NpComplete,
    #[serde(rename = "coNP-complete")]
    CoNpComplete,
    #[serde(rename = "Pspace-complete")]
    PspaceComplete,
    #[serde(rename = "open")]
    Open,
}

impl ComplexityClass {
    /// The class of the complementary problem.
    pub fn co(self) -> ComplexityClass {
        match self {
            ComplexityClass::NpComplete => ComplexityClass::CoNpComplete,
            ComplexityClass::CoNpComplete => ComplexityClass::NpComplete,
            other => other,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ComplexityClass::InL => "L",
            ComplexityClass::InP => "P",
            ComplexityClass::NpComplete => "NP-complete",
            ComplexityClass::CoNpComplete => "coNP-complete",
            ComplexityClass::PspaceComplete => "Pspace-complete",
            ComplexityClass::Open => "open",
        }
    }
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum OpenProblem {
    /// Constraint satisfaction beyond two elements.
    CspDichotomyConjecture,
    /// Quantified constraint satisfaction beyond two elements.
    QcspClassification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Evidence {
    /// A-shop and E-shop witnesses, or their absence after a full search.
    #[serde(rename_all = "camelCase")]
    Shops {
        a_shop: Option<(Element, Shop)>,
        e_shop: Option<(Element, Shop)>,
        singleton_ux: Option<(Element, Element, Shop)>,
    },
    /// The fragment cannot express anything hard.
    Trivial { reason: String },
    DomainSize { size: usize },
    /// A constant endomorphism, if any.
    ConstantEndomorphism { constant: Option<Element> },
    /// Whether some relation is neither empty nor full.
    RelationTriviality { nontrivial: bool },
    Schaefer {
        classes: Vec<SchaeferClass>,
        quantified: bool,
    },
    Open { problem: OpenProblem },
    /// Classified through the complement under the dual fragment.
    Dual { key: FragmentKey, inner: Box<Verdict> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub fragment: FragmentKey,
    pub class: ComplexityClass,
    pub evidence: Evidence,
}

/// The tetrachotomy for positive equality-free sentences: L with both an
/// A-shop and an E-shop, NP-complete with only an A-shop, coNP-complete
/// with only an E-shop, Pspace-complete with neither.
pub fn classify_pos_eqfree(s: &Structure) -> Result<Verdict> {
    let n = s.size();
    for u in 0..n {
        for x in 0..n {
            if let Some(f) = exists_shop(s, ShopProfile::SingletonUx { u, x })? {
                return Ok(Verdict {
                    fragment: FragmentKey::POS_EQFREE,
                    class: ComplexityClass::InL,
                    evidence: Evidence::Shops {
                        a_shop: Some((u, f.clone())),
                        e_shop: Some((x, f.clone())),
                        singleton_ux: Some((u, x, f)),
                    },
                });
            }
        }
    }
    let mut a_shop = None;
    for u in 0..n {
        if let Some(f) = exists_shop(s, ShopProfile::AShop(u))? {
            a_shop = Some((u, f));
            break;
        }
    }
    let mut e_shop = None;
    for x in 0..n {
        if let Some(f) = exists_shop(s, ShopProfile::EShop(x))? {
            e_shop = Some((x, f));
            break;
        }
    }
    let class = match (a_shop.is_some(), e_shop.is_some()) {
        (true, true) => ComplexityClass::InL,
        (true, false) => ComplexityClass::NpComplete,
        (false, true) => ComplexityClass::CoNpComplete,
        (false, false) => ComplexityClass::PspaceComplete,
    };
    Ok(Verdict {
        fragment: FragmentKey::POS_EQFREE,
        class,
        evidence: Evidence::Shops {
            a_shop,
            e_shop,
            singleton_ux: None,
        },
    })
}

/// Classifies `s` for any fragment covered by the known results; a fragment
/// whose dual is covered is classified on the complement.
pub fn classify_fragment(s: &Structure, key: FragmentKey) -> Result<Verdict> {
    if let Some(v) = classify_direct(s, key)? {
        return Ok(v);
    }
    let dual = key.dual();
    if let Some(inner) = classify_direct(&s.complement(), dual)? {
        return Ok(Verdict {
            fragment: key,
            class: inner.class.co(),
            evidence: Evidence::Dual {
                key: dual,
                inner: Box::new(inner),
            },
        });
    }
    Err(Error::UnsupportedFragment(format!(
        "no classification is known for {key}"
    )))
}

fn classify_direct(s: &Structure, key: FragmentKey) -> Result<Option<Verdict>> {
    let n = s.size();
    let verdict = |class, evidence| Some(Verdict { fragment: key, class, evidence });
    let by_size = |hard| {
        if n == 1 {
            verdict(ComplexityClass::InL, Evidence::DomainSize { size: n })
        } else {
            verdict(hard, Evidence::DomainSize { size: n })
        }
    };
    use ComplexityClass::*;

    if !(key.and || key.or) || !(key.exists || key.forall) {
        return Ok(verdict(
            InL,
            Evidence::Trivial {
                reason: "no binary connective or no quantifier".into(),
            },
        ));
    }
    if key.neg {
        if !(key.exists && key.forall && key.and && key.or) {
            return Ok(None);
        }
        if key.eq || key.neq {
            return Ok(by_size(PspaceComplete));
        }
        let nontrivial = s.has_nontrivial_relation();
        let class = if nontrivial { PspaceComplete } else { InL };
        return Ok(verdict(class, Evidence::RelationTriviality { nontrivial }));
    }
    match (key.exists, key.forall, key.and, key.or) {
        (true, false, false, true) => Ok(verdict(
            InL,
            Evidence::Trivial {
                reason: "existential disjunctive sentences reduce to single atoms".into(),
            },
        )),
        (true, false, true, true) => {
            if key.neq {
                return Ok(by_size(NpComplete));
            }
            let constant = constant_endomorphism(s);
            let class = if constant.is_some() { InL } else { NpComplete };
            Ok(verdict(class, Evidence::ConstantEndomorphism { constant }))
        }
        (true, false, true, false) => {
            if n == 1 {
                return Ok(by_size(InL));
            }
            if key.neq {
                if n > 2 {
                    return Ok(by_size(NpComplete));
                }
                return Ok(Some(neq_schaefer(s, key, false)?));
            }
            if n > 2 {
                if let Some(c) = constant_endomorphism(s) {
                    return Ok(verdict(
                        InL,
                        Evidence::ConstantEndomorphism { constant: Some(c) },
                    ));
                }
                return Ok(verdict(
                    Open,
                    Evidence::Open {
                        problem: OpenProblem::CspDichotomyConjecture,
                    },
                ));
            }
            let (classes, class) = boolean_schaefer(s, false)?;
            Ok(verdict(class, Evidence::Schaefer { classes, quantified: false }))
        }
        (true, true, true, false) => {
            if n == 1 {
                return Ok(by_size(InL));
            }
            if key.neq {
                if n > 2 {
                    return Ok(by_size(PspaceComplete));
                }
                return Ok(Some(neq_schaefer(s, key, true)?));
            }
            if n > 2 {
                return Ok(verdict(
                    Open,
                    Evidence::Open {
                        problem: OpenProblem::QcspClassification,
                    },
                ));
            }
            let (classes, class) = boolean_schaefer(s, true)?;
            Ok(verdict(class, Evidence::Schaefer { classes, quantified: true }))
        }
        (true, true, true, true) => {
            if key.eq || key.neq {
                return Ok(by_size(PspaceComplete));
            }
            classify_pos_eqfree(s).map(Some)
        }
        _ => Ok(None),
    }
}

/// With `!=` available the structure gains the relation `!=`, which is
/// bijunctive and affine only; so tractability needs one of those two.
fn neq_schaefer(s: &Structure, key: FragmentKey, quantified: bool) -> Result<Verdict> {
    let (classes, _) = boolean_schaefer(s, quantified)?;
    let kept: Vec<SchaeferClass> = classes
        .into_iter()
        .filter(|c| matches!(c, SchaeferClass::Bijunctive | SchaeferClass::Affine))
        .collect();
    let class = if !kept.is_empty() {
        ComplexityClass::InP
    } else if quantified {
        ComplexityClass::PspaceComplete
    } else {
        ComplexityClass::NpComplete
    };
    Ok(Verdict {
        fragment: key,
        class,
        evidence: Evidence::Schaefer {
            classes: kept,
            quantified,
        },
    })
}

/// Some `a` whose constant map is an endomorphism: every nonempty relation
/// contains the all-`a` tuple.
pub fn constant_endomorphism(s: &Structure) -> Option<Element> {
    (0..s.size()).find(|&a| {
        s.relations()
            .iter()
            .all(|r| r.is_empty() || r.contains(&vec![a; r.arity()]))
    })
}
