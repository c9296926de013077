//! Hardness gadgets, their structures, and reductions into them.
//!
//! All gadgets use 0-based elements.

mod reductions;

use serde::{Deserialize, Serialize};

use crate::bits::ElemSet;
use crate::error::{Error, Result};
use crate::shops::{exists_shop, Shop, ShopProfile};
use crate::structures::{Element, Structure};

pub use reductions::{meta_reduction, reduce_nae_to_k2, reduce_qcsp_nae_to_gadget, NaeTarget};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "camelCase")]
pub enum GadgetSpec {
    /// Loopless complete graph.
    Kn { n: usize },
    /// Complete graph with all loops.
    KnReflexive { n: usize },
    /// Complete bipartite graph on parts `0..a` and `a..a+b`.
    CompleteBipartite { a: usize, b: usize },
    /// The Boolean not-all-equal relation.
    BNae,
    /// One element with a loop.
    OneElement,
    /// `U = 0..j`, `X = j..j+k`; edge `u-x`, reflexive clique on `X`, and
    /// all edges between `U \ {u}` and `X \ {x}`. Here `u < j <= x < j+k`.
    G { j: usize, k: usize, u: Element, x: Element },
    /// A single 4-ary relation packing every `G(j,k,u,x)`.
    Dhat { j: usize, k: usize },
    /// Three colours `0,1,2`, the element `3`, and `4..4+s`.
    Gv { s: usize },
}

pub fn make_gadget(spec: &GadgetSpec) -> Result<Structure> {
    match *spec {
        GadgetSpec::Kn { n } => complete_graph(n, false),
        GadgetSpec::KnReflexive { n } => complete_graph(n, true),
        GadgetSpec::CompleteBipartite { a, b } => complete_bipartite(a, b),
        GadgetSpec::BNae => Ok(boolean_nae()),
        GadgetSpec::OneElement => Structure::graph(1, &[(0, 0)]),
        GadgetSpec::G { j, k, u, x } => g_gadget(j, k, u, x),
        GadgetSpec::Dhat { j, k } => dhat(j, k),
        GadgetSpec::Gv { s } => gv(s),
    }
}

fn positive(what: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::InvalidArgument(format!("{what} must be positive")))
    } else {
        Ok(())
    }
}

pub fn complete_graph(n: usize, reflexive: bool) -> Result<Structure> {
    positive("n", n)?;
    let mut e = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if reflexive || a != b {
                e.push((a, b));
            }
        }
    }
    Structure::graph(n, &e)
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<Structure> {
    positive("a", a)?;
    positive("b", b)?;
    let mut e = Vec::new();
    for x in 0..a {
        for y in a..a + b {
            e.push((x, y));
            e.push((y, x));
        }
    }
    Structure::graph(a + b, &e)
}

pub fn boolean_nae() -> Structure {
    let tuples = (1..7usize)
        .map(|i| vec![i >> 2 & 1, i >> 1 & 1, i & 1])
        .collect();
    Structure::from_relations(2, [("NAE", 3, tuples)]).expect("valid relation")
}

fn g_edges(j: usize, k: usize, u: Element, x: Element) -> Vec<(Element, Element)> {
    let mut e = vec![(u, x), (x, u)];
    for a in j..j + k {
        for b in j..j + k {
            e.push((a, b));
        }
    }
    for a in (0..j).filter(|&a| a != u) {
        for b in (j..j + k).filter(|&b| b != x) {
            e.push((a, b));
            e.push((b, a));
        }
    }
    e.sort();
    e.dedup();
    e
}

pub fn g_gadget(j: usize, k: usize, u: Element, x: Element) -> Result<Structure> {
    positive("j", j)?;
    positive("k", k)?;
    if u >= j || x < j || x >= j + k {
        return Err(Error::InvalidArgument(format!(
            "need u < {j} <= x < {}, found u = {u}, x = {x}",
            j + k
        )));
    }
    Structure::graph(j + k, &g_edges(j, k, u, x))
}

/// `R = ∪_u ( ∪_x (u,x) × E(u,x)  ∪  ∪_{x1,x2,x3} (x1,x2) × E(u,x3) )`.
pub fn dhat(j: usize, k: usize) -> Result<Structure> {
    positive("j", j)?;
    positive("k", k)?;
    let xs: Vec<Element> = (j..j + k).collect();
    let mut r = Vec::new();
    for u in 0..j {
        for &x in &xs {
            for (a, b) in g_edges(j, k, u, x) {
                r.push(vec![u, x, a, b]);
            }
        }
        for &x1 in &xs {
            for &x2 in &xs {
                for &x3 in &xs {
                    for (a, b) in g_edges(j, k, u, x3) {
                        r.push(vec![x1, x2, a, b]);
                    }
                }
            }
        }
    }
    Structure::from_relations(j + k, [("R", 4, r)])
}

/// Element `c` of the base graph, blown up to the three colours.
pub const GV_C: Element = 0;
/// Element `u` of the base graph.
pub const GV_U: Element = 1;
/// Element `v` of the base graph, blown up to the vertex elements.
pub const GV_V: Element = 2;

/// Edges of the base graph on `{c, u, v}`, the first hit of
/// [`gv_base_search`]: a loop on `c` and every edge between distinct elements.
pub const GV_BASE_EDGES: &[(Element, Element)] = &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];

/// `c -> {c}`, `u -> {c,u,v}`, `v -> {c}`.
pub fn gv_base_shop() -> Shop {
    Shop::from_lists(&[&[GV_C], &[GV_C, GV_U, GV_V], &[GV_C]]).expect("valid shop")
}

/// Small loopless graphs used to pin the base graph.
fn gv_probe_graphs() -> Vec<(Structure, bool)> {
    let cycle5: Vec<(Element, Element)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    let k4_minus: Vec<(Element, Element)> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)];
    let mut out = Vec::new();
    for (n, edges, colourable) in [
        (1, vec![], true),
        (2, vec![(0, 1)], true),
        (3, vec![(0, 1), (1, 2), (0, 2)], true),
        (4, (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect(), false),
        (4, k4_minus, true),
        (5, cycle5, true),
    ] {
        let sym: Vec<_> = edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        out.push((Structure::graph(n, &sym).expect("valid graph"), colourable));
    }
    out
}

fn gv_contract_holds(base: &[(Element, Element)]) -> bool {
    for s in 1..=3 {
        let g = Structure::from_relations(4 + s, gv_relations_with(s, base)).expect("valid");
        if !gv_shop(s).preserves(&g) {
            return false;
        }
    }
    gv_probe_graphs().iter().all(|(graph, colourable)| {
        let st = sg_with(graph, base).expect("valid");
        let a = (0..st.size()).any(|e| {
            exists_shop(&st, ShopProfile::AShop(e)).expect("small").is_some()
        });
        let e = (0..st.size()).any(|e| {
            exists_shop(&st, ShopProfile::EShop(e)).expect("small").is_some()
        });
        a == *colourable && !e
    })
}

/// Every symmetric, partially reflexive graph on `{c, u, v}` whose blow-up
/// is preserved by [`gv_shop`] and whose [`sg`] structures have an A-shop
/// exactly on 3-colourable probe graphs and never an E-shop. Ordered by
/// edge set.
pub fn gv_base_search() -> Vec<Vec<(Element, Element)>> {
    let pairs: Vec<(Element, Element)> = (0..3).flat_map(|a| (a..3).map(move |b| (a, b))).collect();
    let mut found = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let mut edges = Vec::new();
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                edges.push((a, b));
                if a != b {
                    edges.push((b, a));
                }
            }
        }
        edges.sort();
        if gv_contract_holds(&edges) {
            found.push(edges);
        }
    }
    found.sort();
    found
}

fn gv_projection(s: usize) -> Vec<Element> {
    let mut p = vec![GV_C, GV_C, GV_C, GV_U];
    p.extend(std::iter::repeat_n(GV_V, s));
    p
}

/// Tuples of `GV(s)`: the blow-up of the base graph plus one unary
/// predicate per colour.
fn gv_relations(s: usize) -> Vec<(&'static str, usize, Vec<Vec<Element>>)> {
    gv_relations_with(s, GV_BASE_EDGES)
}

fn gv_relations_with(s: usize, base: &[(Element, Element)]) -> Vec<(&'static str, usize, Vec<Vec<Element>>)> {
    let proj = gv_projection(s);
    let n = proj.len();
    let mut blown = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if base.contains(&(proj[a], proj[b])) {
                blown.push(vec![a, b]);
            }
        }
    }
    vec![
        ("Ep", 2, blown),
        ("Zero", 1, vec![vec![0]]),
        ("One", 1, vec![vec![1]]),
        ("Two", 1, vec![vec![2]]),
    ]
}

pub fn gv(s: usize) -> Result<Structure> {
    positive("s", s)?;
    Structure::from_relations(4 + s, gv_relations(s))
}

/// Colours fixed, `3` to everything, each vertex element to the colours.
pub fn gv_shop(s: usize) -> Shop {
    let n = 4 + s;
    let mut images = vec![ElemSet::singleton(0), ElemSet::singleton(1), ElemSet::singleton(2), ElemSet::full(n)];
    images.extend(std::iter::repeat_n(ElemSet::from_elems([0, 1, 2]), s));
    Shop::new(images).expect("valid shop")
}

/// `GV(|V|)` plus the graph's edges on the vertex elements and a triangle
/// on the colours, under the symbol `E`.
pub fn sg(graph: &Structure) -> Result<Structure> {
    sg_with(graph, GV_BASE_EDGES)
}

fn sg_with(graph: &Structure, base: &[(Element, Element)]) -> Result<Structure> {
    let edges = graph_edges(graph)?;
    let s = graph.size();
    let mut e: Vec<Vec<Element>> = edges.iter().map(|&(a, b)| vec![a + 4, b + 4]).collect();
    for a in 0..3 {
        for b in 0..3 {
            if a != b {
                e.push(vec![a, b]);
            }
        }
    }
    let mut rels = gv_relations_with(s, base);
    rels.push(("E", 2, e));
    Structure::from_relations(4 + s, rels)
}

/// The edges of a loopless symmetric graph with one binary symbol.
pub(crate) fn graph_edges(graph: &Structure) -> Result<Vec<(Element, Element)>> {
    let syms = graph.signature().symbols();
    if syms.len() != 1 || syms[0].arity != 2 {
        return Err(Error::InvalidArgument(
            "expected a graph with a single binary relation".into(),
        ));
    }
    let r = graph.relation(0);
    let mut out = Vec::new();
    for t in r.tuples() {
        if t[0] == t[1] {
            return Err(Error::InvalidArgument(format!("the graph has a loop at {}", t[0])));
        }
        if !r.contains(&[t[1], t[0]]) {
            return Err(Error::InvalidArgument(format!(
                "the graph is not symmetric at ({}, {})",
                t[0], t[1]
            )));
        }
        out.push((t[0], t[1]));
    }
    Ok(out)
}
