//! Finite relational structures over a domain `0..n-1`.

mod boolean;
mod morphism;
mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use boolean::BooleanOperationTable;
pub use morphism::{are_isomorphic, find_morphism, MorphismKind, MorphismWitness};
pub use text::{parse_structure, parse_structure_named, render_structure, render_structure_named};

pub type Element = usize;

/// Upper bound on `n^arity` for a single relation.
pub const MAX_RELATION_CELLS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Symbol {
        Symbol {
            name: name.into(),
            arity,
        }
    }
}

/// Relation symbols sorted by name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new(mut symbols: Vec<Symbol>) -> Result<Signature> {
        symbols.sort();
        for w in symbols.windows(2) {
            if w[0].name == w[1].name {
                return Err(Error::SignatureMismatch(format!(
                    "symbol `{}` declared twice",
                    w[0].name
                )));
            }
        }
        for s in &symbols {
            if !is_identifier(&s.name) {
                return Err(Error::SignatureMismatch(format!(
                    "`{}` is not a valid symbol name",
                    s.name
                )));
            }
            if s.arity == 0 {
                return Err(Error::SignatureMismatch(format!(
                    "symbol `{}` has arity 0",
                    s.name
                )));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols
            .binary_search_by(|s| s.name.as_str().cmp(name))
            .ok()
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.symbols[i].arity)
    }
}

/// The tuples of one relation, kept both as a sorted list and as a dense
/// bit table over `D^arity`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    size: usize,
    tuples: Vec<Vec<Element>>,
    dense: Vec<u64>,
}

impl Relation {
    fn new(size: usize, arity: usize, mut tuples: Vec<Vec<Element>>) -> Result<Relation> {
        let cells = cell_count(size, arity).ok_or_else(|| {
            Error::InvalidStructure(format!(
                "relation space {size}^{arity} exceeds {MAX_RELATION_CELLS} cells"
            ))
        })?;
        for t in &tuples {
            if t.len() != arity {
                return Err(Error::InvalidStructure(format!(
                    "tuple {t:?} does not have arity {arity}"
                )));
            }
            if let Some(&e) = t.iter().find(|&&e| e >= size) {
                return Err(Error::OutOfRange { element: e, size });
            }
        }
        tuples.sort();
        tuples.dedup();
        let mut dense = vec![0u64; cells.div_ceil(64)];
        for t in &tuples {
            let i = encode(size, t);
            dense[i / 64] |= 1u64 << (i % 64);
        }
        Ok(Relation {
            arity,
            size,
            tuples,
            dense,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &[Vec<Element>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn is_full(&self) -> bool {
        Some(self.tuples.len()) == cell_count(self.size, self.arity)
    }

    pub fn contains(&self, tuple: &[Element]) -> bool {
        if tuple.len() != self.arity || tuple.iter().any(|&e| e >= self.size) {
            return false;
        }
        self.contains_index(encode(self.size, tuple))
    }

    #[inline]
    pub(crate) fn contains_index(&self, index: usize) -> bool {
        self.dense[index / 64] >> (index % 64) & 1 == 1
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.tuples).finish()
    }
}

fn cell_count(size: usize, arity: usize) -> Option<usize> {
    let mut cells: usize = 1;
    for _ in 0..arity {
        cells = cells.checked_mul(size)?;
        if cells > MAX_RELATION_CELLS {
            return None;
        }
    }
    Some(cells)
}

#[inline]
pub(crate) fn encode(size: usize, tuple: &[Element]) -> usize {
    tuple.iter().fold(0, |acc, &e| acc * size + e)
}

/// Every tuple of `D^arity` in lexicographic order.
pub(crate) fn all_tuples(size: usize, arity: usize) -> impl Iterator<Item = Vec<Element>> {
    let mut cur = if size == 0 && arity > 0 {
        None
    } else {
        Some(vec![0; arity])
    };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let t = cur.as_mut().unwrap();
        let mut i = arity;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < size {
                break;
            }
            t[i] = 0;
        }
        Some(out)
    })
}

/// Serialises as its canonical text.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Structure {
    signature: Signature,
    size: usize,
    relations: Vec<Relation>,
}

impl Structure {
    /// `relations[i]` holds the tuples of `signature.symbols()[i]`.
    pub fn new(
        signature: Signature,
        size: usize,
        relations: Vec<Vec<Vec<Element>>>,
    ) -> Result<Structure> {
        if size == 0 {
            return Err(Error::InvalidStructure("the domain must be nonempty".into()));
        }
        if relations.len() != signature.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} relations given for {} symbols",
                relations.len(),
                signature.len()
            )));
        }
        let relations = signature
            .symbols()
            .iter()
            .zip(relations)
            .map(|(s, t)| Relation::new(size, s.arity, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Structure {
            signature,
            size,
            relations,
        })
    }

    /// Builds a structure from `(name, arity, tuples)` triples in any order.
    pub fn from_relations<S, I>(size: usize, relations: I) -> Result<Structure>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, usize, Vec<Vec<Element>>)>,
    {
        let mut named: Vec<(Symbol, Vec<Vec<Element>>)> = relations
            .into_iter()
            .map(|(n, a, t)| (Symbol::new(n, a), t))
            .collect();
        named.sort_by(|a, b| a.0.cmp(&b.0));
        let signature = Signature::new(named.iter().map(|(s, _)| s.clone()).collect())?;
        Structure::new(signature, size, named.into_iter().map(|(_, t)| t).collect())
    }

    /// A single binary relation `E`.
    pub fn graph(size: usize, edges: &[(Element, Element)]) -> Result<Structure> {
        Structure::from_relations(
            size,
            [("E", 2, edges.iter().map(|&(a, b)| vec![a, b]).collect())],
        )
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, index: usize) -> &Relation {
        &self.relations[index]
    }

    pub fn relation_by_name(&self, name: &str) -> Option<&Relation> {
        self.signature.index_of(name).map(|i| &self.relations[i])
    }

    pub fn holds(&self, name: &str, tuple: &[Element]) -> bool {
        self.relation_by_name(name)
            .is_some_and(|r| r.contains(tuple))
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(Relation::len).sum()
    }

    /// `R^c = D^r \ R` for every symbol.
    pub fn complement(&self) -> Structure {
        let relations = self
            .relations
            .iter()
            .map(|r| {
                all_tuples(self.size, r.arity)
                    .filter(|t| !r.contains_index(encode(self.size, t)))
                    .collect()
            })
            .collect();
        Structure::new(self.signature.clone(), self.size, relations)
            .expect("complement of a valid structure")
    }

    /// Elements of `other` are shifted by `self.size()`.
    pub fn disjoint_union(&self, other: &Structure) -> Result<Structure> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch(
                "disjoint union needs equal signatures".into(),
            ));
        }
        let shift = self.size;
        let relations = self
            .relations
            .iter()
            .zip(&other.relations)
            .map(|(a, b)| {
                let mut ts = a.tuples.clone();
                ts.extend(
                    b.tuples
                        .iter()
                        .map(|t| t.iter().map(|&e| e + shift).collect()),
                );
                ts
            })
            .collect();
        Structure::new(self.signature.clone(), self.size + other.size, relations)
    }

    /// Substructure induced on `keep`, renumbered in increasing order.
    /// Returns the structure and the old-to-new element map.
    pub fn induced_substructure(
        &self,
        keep: &[Element],
    ) -> Result<(Structure, Vec<Option<Element>>)> {
        let mut map = vec![None; self.size];
        let kept: BTreeSet<Element> = keep.iter().copied().collect();
        for (i, &e) in kept.iter().enumerate() {
            if e >= self.size {
                return Err(Error::OutOfRange {
                    element: e,
                    size: self.size,
                });
            }
            map[e] = Some(i);
        }
        let relations = self
            .relations
            .iter()
            .map(|r| {
                r.tuples
                    .iter()
                    .filter_map(|t| t.iter().map(|&e| map[e]).collect::<Option<Vec<_>>>())
                    .collect()
            })
            .collect();
        let s = Structure::new(self.signature.clone(), kept.len(), relations)?;
        Ok((s, map))
    }

    /// Class index of every element under `x ~ y`: swapping `x` and `y` in any
    /// single coordinate of any tuple never changes membership. Classes are
    /// numbered by their least element.
    pub fn sim_classes(&self) -> Vec<Element> {
        let n = self.size;
        let mut profiles: Vec<Vec<bool>> = vec![Vec::new(); n];
        for r in &self.relations {
            let k = r.arity;
            for pos in 0..k {
                for rest in all_tuples(n, k - 1) {
                    let mut t = Vec::with_capacity(k);
                    t.extend_from_slice(&rest[..pos]);
                    t.push(0);
                    t.extend_from_slice(&rest[pos..]);
                    for (x, profile) in profiles.iter_mut().enumerate() {
                        t[pos] = x;
                        profile.push(r.contains_index(encode(n, &t)));
                    }
                }
            }
        }
        let mut seen: BTreeMap<&Vec<bool>, Element> = BTreeMap::new();
        let mut classes = Vec::with_capacity(n);
        for p in &profiles {
            let next = seen.len();
            classes.push(*seen.entry(p).or_insert(next));
        }
        classes
    }

    /// Quotient by `~` with the class map.
    pub fn quotient_by_sim(&self) -> (Structure, Vec<Element>) {
        let classes = self.sim_classes();
        let count = classes.iter().max().map_or(0, |m| m + 1);
        let relations = self
            .relations
            .iter()
            .map(|r| {
                r.tuples
                    .iter()
                    .map(|t| t.iter().map(|&e| classes[e]).collect())
                    .collect()
            })
            .collect();
        let q = Structure::new(self.signature.clone(), count, relations)
            .expect("quotient of a valid structure");
        (q, classes)
    }

    /// Whether every relation is closed under the Boolean operation.
    pub fn closed_under_operation(&self, op: &BooleanOperationTable) -> Result<bool> {
        if self.size != 2 {
            return Err(Error::InvalidArgument(format!(
                "Boolean operations need a two-element domain, found {}",
                self.size
            )));
        }
        Ok(self.relations.iter().all(|r| op.preserves(r)))
    }

    /// Whether some relation is neither empty nor full.
    pub fn has_nontrivial_relation(&self) -> bool {
        self.relations.iter().any(|r| !r.is_empty() && !r.is_full())
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Structure(n={}", self.size)?;
        for (s, r) in self.signature.symbols().iter().zip(&self.relations) {
            write!(f, ", {}/{}={:?}", s.name, s.arity, r)?;
        }
        write!(f, ")")
    }
}

impl From<Structure> for String {
    fn from(s: Structure) -> String {
        render_structure(&s)
    }
}

impl TryFrom<String> for Structure {
    type Error = Error;
    fn try_from(s: String) -> Result<Structure> {
        parse_structure(&s)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_structure(self))
    }
}
