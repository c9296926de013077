//! Model checking by direct recursion on the formula.

mod containment;
mod sampler;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{Formula, Quantifier, Var};
use crate::structures::{Element, Structure};

pub use containment::{contained_in, ContainmentFragment};
pub use sampler::{check_relativisation, random_sentence, RelativisationReport, SamplerParams};

/// A formula with variables resolved to slots and symbols to relations.
enum Node {
    Const(bool),
    Atom { rel: usize, slots: Vec<usize> },
    Eq(usize, usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Quant {
        exists: bool,
        var: Var,
        slot: usize,
        domain: Vec<Element>,
        body: Box<Node>,
    },
}

struct Compiler<'s> {
    s: &'s Structure,
    scope: Vec<(Var, usize)>,
    slots: usize,
}

impl Compiler<'_> {
    fn lookup(&self, v: &Var) -> Result<usize> {
        self.scope
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|&(_, slot)| slot)
            .ok_or_else(|| Error::UnboundVariable(v.clone()))
    }

    fn compile(&mut self, f: &Formula) -> Result<Node> {
        Ok(match f {
            Formula::Const(b) => Node::Const(*b),
            Formula::Atom { symbol, args } => {
                let sig = self.s.signature();
                let rel = sig
                    .index_of(symbol)
                    .ok_or_else(|| Error::UnknownSymbol(symbol.clone()))?;
                let expected = sig.symbols()[rel].arity;
                if expected != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: symbol.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                let slots = args.iter().map(|a| self.lookup(a)).collect::<Result<_>>()?;
                Node::Atom { rel, slots }
            }
            Formula::Eq(a, b) => Node::Eq(self.lookup(a)?, self.lookup(b)?),
            Formula::Not(g) => Node::Not(Box::new(self.compile(g)?)),
            Formula::And(cs) => Node::And(cs.iter().map(|c| self.compile(c)).collect::<Result<_>>()?),
            Formula::Or(cs) => Node::Or(cs.iter().map(|c| self.compile(c)).collect::<Result<_>>()?),
            Formula::Quant {
                kind,
                var,
                restriction,
                body,
            } => {
                let n = self.s.size();
                let domain: Vec<Element> = match restriction {
                    Some(r) => {
                        if let Some(&e) = r.iter().find(|&&e| e >= n) {
                            return Err(Error::OutOfRange { element: e, size: n });
                        }
                        r.iter().copied().collect()
                    }
                    None => (0..n).collect(),
                };
                let slot = self.slots;
                self.slots += 1;
                self.scope.push((var.clone(), slot));
                let body = self.compile(body)?;
                self.scope.pop();
                Node::Quant {
                    exists: *kind == Quantifier::Exists,
                    var: var.clone(),
                    slot,
                    domain,
                    body: Box::new(body),
                }
            }
        })
    }
}

struct Compiled<'s> {
    s: &'s Structure,
    root: Node,
    assignment: Vec<Element>,
}

fn compile<'s>(s: &'s Structure, f: &Formula, free: &[(Var, Element)]) -> Result<Compiled<'s>> {
    let mut c = Compiler {
        s,
        scope: Vec::new(),
        slots: 0,
    };
    let mut assignment = Vec::new();
    for (v, e) in free {
        if *e >= s.size() {
            return Err(Error::OutOfRange {
                element: *e,
                size: s.size(),
            });
        }
        c.scope.push((v.clone(), c.slots));
        c.slots += 1;
        assignment.push(*e);
    }
    let root = c.compile(f)?;
    assignment.resize(c.slots, 0);
    Ok(Compiled { s, root, assignment })
}

fn eval(node: &Node, s: &Structure, a: &mut [Element]) -> bool {
    match node {
        Node::Const(b) => *b,
        Node::Atom { rel, slots } => {
            let n = s.size();
            let idx = slots.iter().fold(0, |acc, &sl| acc * n + a[sl]);
            s.relation(*rel).contains_index(idx)
        }
        Node::Eq(x, y) => a[*x] == a[*y],
        Node::Not(g) => !eval(g, s, a),
        Node::And(cs) => cs.iter().all(|c| eval(c, s, a)),
        Node::Or(cs) => cs.iter().any(|c| eval(c, s, a)),
        Node::Quant {
            exists,
            slot,
            domain,
            body,
            ..
        } => {
            for &e in domain {
                a[*slot] = e;
                if eval(body, s, a) == *exists {
                    return *exists;
                }
            }
            !*exists
        }
    }
}

/// Truth of a sentence in `s`.
pub fn evaluate(s: &Structure, f: &Formula) -> Result<bool> {
    evaluate_with(s, f, &[])
}

/// Truth of `f` under an assignment of its free variables.
pub fn evaluate_with(s: &Structure, f: &Formula, free: &[(Var, Element)]) -> Result<bool> {
    let mut c = compile(s, f, free)?;
    Ok(eval(&c.root, c.s, &mut c.assignment))
}

/// A certificate for the value of a formula: witnesses for true existential
/// and false universal nodes, and every branch for the others.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TraceNode {
    /// An atom, equality or constant.
    Leaf,
    Negation(Box<TraceNode>),
    /// A true disjunct or a false conjunct.
    Pick { index: usize, node: Box<TraceNode> },
    /// Every child: all conjuncts true, or all disjuncts false.
    Every(Vec<TraceNode>),
    /// A witness for a true existential or a counterexample to a universal.
    Choose {
        var: Var,
        element: Element,
        node: Box<TraceNode>,
    },
    /// Every element of the quantifier's range.
    Each {
        var: Var,
        branches: Vec<(Element, TraceNode)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalTrace {
    pub value: bool,
    pub root: TraceNode,
}

fn trace(node: &Node, s: &Structure, a: &mut [Element]) -> (bool, TraceNode) {
    match node {
        Node::Const(_) | Node::Atom { .. } | Node::Eq(..) => (eval(node, s, a), TraceNode::Leaf),
        Node::Not(g) => {
            let (v, t) = trace(g, s, a);
            (!v, TraceNode::Negation(Box::new(t)))
        }
        Node::And(cs) | Node::Or(cs) => {
            // the value that decides the connective on its own
            let decisive = matches!(node, Node::Or(_));
            for (i, c) in cs.iter().enumerate() {
                if eval(c, s, a) == decisive {
                    let (_, t) = trace(c, s, a);
                    return (
                        decisive,
                        TraceNode::Pick {
                            index: i,
                            node: Box::new(t),
                        },
                    );
                }
            }
            let all = cs.iter().map(|c| trace(c, s, a).1).collect();
            (!decisive, TraceNode::Every(all))
        }
        Node::Quant {
            exists,
            var,
            slot,
            domain,
            body,
        } => {
            for &e in domain {
                a[*slot] = e;
                if eval(body, s, a) == *exists {
                    let (_, t) = trace(body, s, a);
                    return (
                        *exists,
                        TraceNode::Choose {
                            var: var.clone(),
                            element: e,
                            node: Box::new(t),
                        },
                    );
                }
            }
            let branches = domain
                .iter()
                .map(|&e| {
                    a[*slot] = e;
                    (e, trace(body, s, a).1)
                })
                .collect();
            (
                !*exists,
                TraceNode::Each {
                    var: var.clone(),
                    branches,
                },
            )
        }
    }
}

/// Evaluates a sentence and returns a certificate for the result.
pub fn evaluate_with_trace(s: &Structure, f: &Formula) -> Result<EvalTrace> {
    let mut c = compile(s, f, &[])?;
    let (value, root) = trace(&c.root, c.s, &mut c.assignment);
    Ok(EvalTrace { value, root })
}

/// Re-derives the value recorded in `t` using only the choices it makes,
/// returning whether the certificate is valid.
pub fn check_trace(s: &Structure, f: &Formula, t: &EvalTrace) -> Result<bool> {
    let mut c = compile(s, f, &[])?;
    Ok(replay(&c.root, c.s, &mut c.assignment, &t.root) == Some(t.value))
}

fn replay(node: &Node, s: &Structure, a: &mut [Element], t: &TraceNode) -> Option<bool> {
    match (node, t) {
        (Node::Const(_) | Node::Atom { .. } | Node::Eq(..), TraceNode::Leaf) => Some(eval(node, s, a)),
        (Node::Not(g), TraceNode::Negation(tg)) => replay(g, s, a, tg).map(|v| !v),
        (Node::And(cs) | Node::Or(cs), TraceNode::Pick { index, node: tc }) => {
            let decisive = matches!(node, Node::Or(_));
            let v = replay(cs.get(*index)?, s, a, tc)?;
            (v == decisive).then_some(decisive)
        }
        (Node::And(cs) | Node::Or(cs), TraceNode::Every(ts)) => {
            let decisive = matches!(node, Node::Or(_));
            if ts.len() != cs.len() {
                return None;
            }
            for (c, tc) in cs.iter().zip(ts) {
                if replay(c, s, a, tc)? == decisive {
                    return None;
                }
            }
            Some(!decisive)
        }
        (
            Node::Quant {
                exists,
                slot,
                domain,
                body,
                ..
            },
            TraceNode::Choose { element, node: tb, .. },
        ) => {
            if !domain.contains(element) {
                return None;
            }
            a[*slot] = *element;
            let v = replay(body, s, a, tb)?;
            (v == *exists).then_some(*exists)
        }
        (
            Node::Quant {
                exists,
                slot,
                domain,
                body,
                ..
            },
            TraceNode::Each { branches, .. },
        ) => {
            let listed: Vec<Element> = branches.iter().map(|b| b.0).collect();
            if &listed != domain {
                return None;
            }
            for (e, tb) in branches {
                a[*slot] = *e;
                if replay(body, s, a, tb)? == *exists {
                    return None;
                }
            }
            Some(!*exists)
        }
        _ => None,
    }
}

/// Element assignment helper for formulas with free variables.
pub fn assignment(pairs: &[(&str, Element)]) -> Vec<(Var, Element)> {
    pairs.iter().map(|(v, e)| (v.to_string(), *e)).collect()
}
