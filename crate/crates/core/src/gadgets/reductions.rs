use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{dhat, g_gadget, graph_edges, sg};
use crate::error::{Error, Result};
use crate::formulas::{Formula, Quantifier, Var};
use crate::structures::{Element, Structure};

/// Target of [`reduce_qcsp_nae_to_gadget`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "camelCase")]
pub enum NaeTarget {
    /// `G(2,2,0,2)`: `U = {0,1}`, `X = {2,3}`, edges `0-2` and `1-3`.
    G22,
    Dhat { j: usize, k: usize },
}

impl NaeTarget {
    pub fn structure(&self) -> Result<Structure> {
        match *self {
            NaeTarget::G22 => g_gadget(2, 2, 0, 2),
            NaeTarget::Dhat { j, k } => dhat(j, k),
        }
    }

    fn sides(&self) -> (BTreeSet<Element>, BTreeSet<Element>) {
        let (j, k) = match *self {
            NaeTarget::G22 => (2, 2),
            NaeTarget::Dhat { j, k } => (j, k),
        };
        ((0..j).collect(), (j..j + k).collect())
    }
}

fn check_nae_atom(symbol: &str, args: &[Var]) -> Result<()> {
    if symbol != "NAE" {
        return Err(Error::UnknownSymbol(symbol.to_string()));
    }
    if args.len() != 3 {
        return Err(Error::ArityMismatch {
            symbol: symbol.to_string(),
            expected: 3,
            found: args.len(),
        });
    }
    Ok(())
}

/// Replaces every `NAE(x,y,z)` by `E(x,y) | E(y,z) | E(x,z)`.
pub fn reduce_nae_to_k2(phi: &Formula) -> Result<Formula> {
    match phi {
        Formula::Atom { symbol, args } => {
            check_nae_atom(symbol, args)?;
            let e = |a: &Var, b: &Var| Formula::Atom {
                symbol: "E".into(),
                args: vec![a.clone(), b.clone()],
            };
            Ok(Formula::Or(vec![
                e(&args[0], &args[1]),
                e(&args[1], &args[2]),
                e(&args[0], &args[2]),
            ]))
        }
        Formula::And(cs) => Ok(Formula::And(
            cs.iter().map(reduce_nae_to_k2).collect::<Result<_>>()?,
        )),
        Formula::Const(true) => Ok(Formula::Const(true)),
        Formula::Quant {
            kind,
            var,
            restriction,
            body,
        } => Ok(Formula::Quant {
            kind: *kind,
            var: var.clone(),
            restriction: restriction.clone(),
            body: Box::new(reduce_nae_to_k2(body)?),
        }),
        other => Err(Error::UnsupportedFragment(format!(
            "expected a sentence built from NAE atoms, exists, forall and conjunction, found `{other}`"
        ))),
    }
}

type Prefix = Vec<(Quantifier, Var)>;

/// Splits a clause-form sentence into its prefix and its NAE clauses.
fn clause_form(phi: &Formula) -> Result<(Prefix, Vec<[Var; 3]>)> {
    let mut prefix = Vec::new();
    let mut f = phi;
    while let Formula::Quant {
        kind,
        var,
        restriction,
        body,
    } = f
    {
        if restriction.is_some() {
            return Err(Error::InvalidArgument(format!(
                "restricted quantifier on `{var}` in a clause-form input"
            )));
        }
        prefix.push((*kind, var.clone()));
        f = body;
    }
    let atoms: Vec<&Formula> = match f {
        Formula::And(cs) => cs.iter().collect(),
        Formula::Const(true) => Vec::new(),
        other => vec![other],
    };
    let mut clauses = Vec::new();
    for a in atoms {
        match a {
            Formula::Atom { symbol, args } => {
                check_nae_atom(symbol, args)?;
                clauses.push([args[0].clone(), args[1].clone(), args[2].clone()]);
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "expected a conjunction of NAE atoms after the prefix, found `{other}`"
                )))
            }
        }
    }
    for c in &clauses {
        for v in c {
            if !prefix.iter().any(|(_, p)| p == v) {
                return Err(Error::UnboundVariable(v.clone()));
            }
        }
    }
    Ok((prefix, clauses))
}

fn restricted(kind: Quantifier, var: Var, set: &BTreeSet<Element>, body: Formula) -> Formula {
    Formula::Quant {
        kind,
        var,
        restriction: Some(set.clone()),
        body: Box::new(body),
    }
}

/// Encodes a quantified NAE instance in clause form into the target gadget.
///
/// `exists a` becomes `exists v_a in X`; `forall a` becomes
/// `forall u_a in U. exists v_a in X. E(u_a, v_a) & ...`; clause `i` becomes
/// `forall c_i in U. E(c_i, v_a) | E(c_i, v_b) | E(c_i, v_c)`. For `Dhat`
/// the whole sentence is prefixed by `forall r_u in U. exists r_x in X` and
/// `E(a, b)` is read as `R(r_u, r_x, a, b)`.
pub fn reduce_qcsp_nae_to_gadget(phi: &Formula, target: NaeTarget) -> Result<Formula> {
    let (prefix, clauses) = clause_form(phi)?;
    let (u, x) = target.sides();
    let edge = |a: Var, b: Var| match target {
        NaeTarget::G22 => Formula::Atom {
            symbol: "E".into(),
            args: vec![a, b],
        },
        NaeTarget::Dhat { .. } => Formula::Atom {
            symbol: "R".into(),
            args: vec!["r_u".into(), "r_x".into(), a, b],
        },
    };
    let mut matrix = Vec::new();
    for (i, c) in clauses.iter().enumerate() {
        let ci = format!("c_{i}");
        let body = Formula::Or(c.iter().map(|v| edge(ci.clone(), format!("v_{v}"))).collect());
        matrix.push(restricted(Quantifier::Forall, ci, &u, body));
    }
    let mut out = Formula::conj(matrix);
    for (kind, var) in prefix.into_iter().rev() {
        let v = format!("v_{var}");
        out = match kind {
            Quantifier::Exists => restricted(Quantifier::Exists, v, &x, out),
            Quantifier::Forall => {
                let w = format!("u_{var}");
                let inner = Formula::conj([edge(w.clone(), v.clone()), out]);
                restricted(
                    Quantifier::Forall,
                    w,
                    &u,
                    restricted(Quantifier::Exists, v, &x, inner),
                )
            }
        };
    }
    if let NaeTarget::Dhat { .. } = target {
        out = restricted(
            Quantifier::Forall,
            "r_u".into(),
            &u,
            restricted(Quantifier::Exists, "r_x".into(), &x, out),
        );
    }
    Ok(out)
}

/// `SG(graph)`: positive equality-free model checking on it is NP-complete
/// when the graph is 3-colourable and Pspace-complete otherwise.
pub fn meta_reduction(graph: &Structure) -> Result<Structure> {
    graph_edges(graph)?;
    sg(graph)
}
