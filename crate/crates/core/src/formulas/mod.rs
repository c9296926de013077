//! First-order formulas over relational signatures.
//!
//! Text syntax:
//!
//! ```text
//! formula := quant | disj
//! quant   := ("forall" | "exists") VAR ["in" "{" NUM {"," NUM} "}"] "." formula
//! disj    := conj {"|" conj}
//! conj    := unit {"&" unit}
//! unit    := "~" unit | "(" formula ")" | atom | "true" | "false"
//! atom    := NAME "(" VAR {"," VAR} ")" | VAR "=" VAR | VAR "!=" VAR
//! ```

mod canonical;
mod fragment;
mod parser;
mod transform;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::structures::Element;

pub use canonical::{
    canonical_sentence, defining_formula, sim_formula, CanonicalKind, DEFAULT_FORMULA_BUDGET,
};
pub use fragment::FragmentKey;
pub use parser::{parse_formula, parse_formula_with_free};
pub use transform::{dualize, fragment_of, is_nnf, relativise, to_nnf, RelativisationMode};

pub type Var = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Formula {
    /// `true` is the empty conjunction, `false` the empty disjunction.
    Const(bool),
    Atom { symbol: String, args: Vec<Var> },
    Eq(Var, Var),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Quant {
        kind: Quantifier,
        var: Var,
        restriction: Option<BTreeSet<Element>>,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(symbol: impl Into<String>, args: &[&str]) -> Formula {
        Formula::Atom {
            symbol: symbol.into(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }

    pub fn eq(a: impl Into<Var>, b: impl Into<Var>) -> Formula {
        Formula::Eq(a.into(), b.into())
    }

    pub fn neq(a: impl Into<Var>, b: impl Into<Var>) -> Formula {
        Formula::Not(Box::new(Formula::eq(a, b)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Conjunction with nested conjunctions flattened and `true` dropped.
    pub fn conj(children: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for c in children {
            match c {
                Formula::And(cs) => out.extend(cs),
                Formula::Const(true) => {}
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::Const(true),
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction with nested disjunctions flattened and `false` dropped.
    pub fn disj(children: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for c in children {
            match c {
                Formula::Or(cs) => out.extend(cs),
                Formula::Const(false) => {}
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::Const(false),
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn quant(kind: Quantifier, var: impl Into<Var>, body: Formula) -> Formula {
        Formula::Quant {
            kind,
            var: var.into(),
            restriction: None,
            body: Box::new(body),
        }
    }

    pub fn exists(var: impl Into<Var>, body: Formula) -> Formula {
        Formula::quant(Quantifier::Exists, var, body)
    }

    pub fn forall(var: impl Into<Var>, body: Formula) -> Formula {
        Formula::quant(Quantifier::Forall, var, body)
    }

    /// Wraps `body` in a block of quantifiers, outermost first.
    pub fn quant_block<I, V>(kind: Quantifier, vars: I, body: Formula) -> Formula
    where
        I: IntoIterator<Item = V>,
        I::IntoIter: DoubleEndedIterator,
        V: Into<Var>,
    {
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Formula::quant(kind, v, acc))
    }

    /// Number of AST nodes.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Atom { .. } | Formula::Eq(..) => 1,
            Formula::Not(f) => 1 + f.node_count(),
            Formula::And(cs) | Formula::Or(cs) => 1 + cs.iter().map(Formula::node_count).sum::<usize>(),
            Formula::Quant { body, .. } => 1 + body.node_count(),
        }
    }

    /// Longest chain of nested quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Atom { .. } | Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(cs) | Formula::Or(cs) => {
                cs.iter().map(Formula::quantifier_depth).max().unwrap_or(0)
            }
            Formula::Quant { body, .. } => 1 + body.quantifier_depth(),
        }
    }

    /// Free variables in order of first occurrence.
    pub fn free_variables(&self) -> Vec<Var> {
        fn walk(f: &Formula, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
            let see = |v: &Var, bound: &Vec<Var>, out: &mut Vec<Var>| {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            };
            match f {
                Formula::Const(_) => {}
                Formula::Atom { args, .. } => args.iter().for_each(|a| see(a, bound, out)),
                Formula::Eq(a, b) => {
                    see(a, bound, out);
                    see(b, bound, out);
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| walk(c, bound, out)),
                Formula::Quant { var, body, .. } => {
                    bound.push(var.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Ctx {
    Top,
    Disj,
    Conj,
    Unit,
}

fn write_formula(f: &Formula, ctx: Ctx, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let paren = |out: &mut fmt::Formatter<'_>, inner: &dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result| {
        out.write_str("(")?;
        inner(out)?;
        out.write_str(")")
    };
    match f {
        Formula::Const(b) => out.write_str(if *b { "true" } else { "false" }),
        Formula::Atom { symbol, args } => write!(out, "{symbol}({})", args.join(", ")),
        Formula::Eq(a, b) => write!(out, "{a} = {b}"),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Eq(a, b) => write!(out, "{a} != {b}"),
            other => {
                out.write_str("~")?;
                write_formula(other, Ctx::Unit, out)
            }
        },
        Formula::Or(cs) => {
            let body = |out: &mut fmt::Formatter<'_>| {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.write_str(" | ")?;
                    }
                    let child_ctx = match c {
                        Formula::Or(_) | Formula::Quant { .. } => Ctx::Unit,
                        _ => Ctx::Disj,
                    };
                    write_formula(c, child_ctx, out)?;
                }
                Ok(())
            };
            if ctx <= Ctx::Disj {
                body(out)
            } else {
                paren(out, &body)
            }
        }
        Formula::And(cs) => {
            let body = |out: &mut fmt::Formatter<'_>| {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.write_str(" & ")?;
                    }
                    write_formula(c, Ctx::Conj, out)?;
                }
                Ok(())
            };
            if ctx <= Ctx::Disj {
                body(out)
            } else {
                paren(out, &body)
            }
        }
        Formula::Quant {
            kind,
            var,
            restriction,
            body,
        } => {
            let inner = |out: &mut fmt::Formatter<'_>| {
                write!(out, "{} {var}", kind.keyword())?;
                if let Some(r) = restriction {
                    let parts: Vec<String> = r.iter().map(ToString::to_string).collect();
                    write!(out, " in {{{}}}", parts.join(", "))?;
                }
                out.write_str(". ")?;
                write_formula(body, Ctx::Top, out)
            };
            if ctx == Ctx::Top {
                inner(out)
            } else {
                paren(out, &inner)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, Ctx::Top, f)
    }
}

/// Renders a formula in the text syntax; `parse_formula` inverts it.
pub fn render_formula(f: &Formula) -> String {
    f.to_string()
}
