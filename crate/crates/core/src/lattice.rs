//! The lattice of down-shop-monoids on a small domain.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::bits::ElemSet;
use crate::classifier::ComplexityClass;
use crate::error::{Error, Result};
use crate::shops::{Dsm, Shop};

/// Largest domain for [`all_shops`].
pub const MAX_ALL_SHOPS_DOMAIN: usize = 5;
/// Largest domain for [`enumerate_dsms`] without `force`.
pub const MAX_CENSUS_DOMAIN: usize = 3;
/// Largest domain for [`enumerate_dsms`] with `force`.
pub const MAX_FORCED_CENSUS_DOMAIN: usize = 4;
/// Default limit on the number of lattice nodes.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// Every shop on `n` elements in canonical order.
pub fn all_shops(n: usize) -> Result<Vec<Shop>> {
    if n == 0 || n > MAX_ALL_SHOPS_DOMAIN {
        return Err(Error::DomainTooLarge {
            size: n,
            bound: MAX_ALL_SHOPS_DOMAIN,
        });
    }
    let full = ElemSet::full(n).bits();
    let mut out = Vec::new();
    let mut cur = vec![1u64; n];
    loop {
        if cur.iter().fold(0, |a, &m| a | m) == full {
            out.push(Shop::from_masks(cur.clone()));
        }
        // odometer over nonempty masks, last position fastest
        let mut i = n;
        loop {
            if i == 0 {
                out.sort();
                return Ok(out);
            }
            i -= 1;
            if cur[i] < full {
                cur[i] += 1;
                break;
            }
            cur[i] = 1;
        }
    }
}

/// InL with an A-shop and an E-shop, NP-complete with only an A-shop,
/// coNP-complete with only an E-shop, Pspace-complete otherwise.
pub fn dsm_complexity_tag(m: &Dsm) -> ComplexityClass {
    match (m.has_a_shop(), m.has_e_shop()) {
        (true, true) => ComplexityClass::InL,
        (true, false) => ComplexityClass::NpComplete,
        (false, true) => ComplexityClass::CoNpComplete,
        (false, false) => ComplexityClass::PspaceComplete,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeNode {
    pub id: usize,
    pub dsm: Dsm,
    /// A minimal generating set; the bottom node reports the identity.
    pub generators: Vec<Shop>,
    pub tag: ComplexityClass,
    /// Ids of the nodes directly below.
    pub covers: Vec<usize>,
}

/// Shops indexed in canonical order with their products and down-sets.
struct Universe {
    n: usize,
    shops: Vec<Shop>,
    index: HashMap<Shop, usize>,
    identity: usize,
    /// `down[i]`: sub-shops of `i`, including `i`.
    down: Vec<FixedBitSet>,
    /// `table[i * len + j] = i ∘ j`, when small enough to store.
    table: Option<Vec<u32>>,
}

const MAX_TABLE_CELLS: usize = 1 << 22;

impl Universe {
    fn new(n: usize) -> Result<Universe> {
        let shops = all_shops(n)?;
        let len = shops.len();
        let index: HashMap<Shop, usize> =
            shops.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let identity = index[&Shop::identity(n)];
        let mut down = Vec::with_capacity(len);
        for f in &shops {
            let mut b = FixedBitSet::with_capacity(len);
            for g in crate::shops::sub_shops(f) {
                b.insert(index[&g]);
            }
            down.push(b);
        }
        let mut u = Universe {
            n,
            shops,
            index,
            identity,
            down,
            table: None,
        };
        if len * len <= MAX_TABLE_CELLS {
            let mut t = Vec::with_capacity(len * len);
            for i in 0..len {
                for j in 0..len {
                    t.push(u.compose_slow(i, j) as u32);
                }
            }
            u.table = Some(t);
        }
        Ok(u)
    }

    fn len(&self) -> usize {
        self.shops.len()
    }

    fn compose_slow(&self, i: usize, j: usize) -> usize {
        self.index[&self.shops[i].compose_unchecked(&self.shops[j])]
    }

    fn compose(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Some(t) => t[i * self.len() + j] as usize,
            None => self.compose_slow(i, j),
        }
    }

    /// Members of `s` not strictly below another member.
    fn maximal(&self, s: &FixedBitSet) -> Vec<usize> {
        let mut below = FixedBitSet::with_capacity(self.len());
        for j in s.ones() {
            let mut d = self.down[j].clone();
            d.set(j, false);
            below.union_with(&d);
        }
        s.ones().filter(|&i| !below.contains(i)).collect()
    }

    /// Down-closure of the monoid generated by the maximal members of `s`.
    fn closure(&self, s: &FixedBitSet) -> FixedBitSet {
        let gens = self.maximal(s);
        let mut monoid = FixedBitSet::with_capacity(self.len());
        monoid.insert(self.identity);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(f) = queue.pop_front() {
            for &g in &gens {
                let h = self.compose(g, f);
                if !monoid.put(h) {
                    queue.push_back(h);
                }
            }
        }
        let mut out = FixedBitSet::with_capacity(self.len());
        for m in monoid.ones() {
            out.union_with(&self.down[m]);
        }
        out
    }

    fn to_dsm(&self, s: &FixedBitSet) -> Dsm {
        Dsm::from_sorted(self.n, s.ones().map(|i| self.shops[i].clone()).collect())
    }

    fn minimal_generators(&self, c: &FixedBitSet) -> Vec<usize> {
        let mut gens = self.maximal(c);
        let mut k = 0;
        while k < gens.len() {
            let mut rest = FixedBitSet::with_capacity(self.len());
            rest.extend(gens.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &g)| g));
            if self.closure(&rest) == *c {
                gens.remove(k);
            } else {
                k += 1;
            }
        }
        if gens.is_empty() {
            gens.push(self.identity);
        }
        gens
    }
}

fn prefix_eq(a: &FixedBitSet, b: &FixedBitSet, end: usize) -> bool {
    (0..end).all(|k| a.contains(k) == b.contains(k))
}

/// Every DSM on `n` elements, via Next-Closure over the DSM closure
/// operator. Nodes are ordered by size, then by their shop lists; the bottom
/// comes first and the full shop set last.
pub fn enumerate_dsms(n: usize, force: bool) -> Result<Vec<LatticeNode>> {
    enumerate_dsms_bounded(n, force, DEFAULT_NODE_BUDGET)
}

pub fn enumerate_dsms_bounded(n: usize, force: bool, budget: usize) -> Result<Vec<LatticeNode>> {
    let bound = if force {
        MAX_FORCED_CENSUS_DOMAIN
    } else {
        MAX_CENSUS_DOMAIN
    };
    if n == 0 || n > bound {
        return Err(Error::DomainTooLarge { size: n, bound });
    }
    let u = Universe::new(n)?;
    let len = u.len();
    let mut closed = Vec::new();
    let mut a = u.closure(&FixedBitSet::with_capacity(len));
    loop {
        closed.push(a.clone());
        if closed.len() > budget {
            return Err(Error::BudgetExceeded(format!(
                "more than {budget} lattice nodes"
            )));
        }
        if a.count_ones(..) == len {
            break;
        }
        let mut next = None;
        for i in (0..len).rev() {
            if a.contains(i) {
                continue;
            }
            let mut seed = FixedBitSet::with_capacity(len);
            seed.extend(a.ones().take_while(|&k| k < i));
            seed.insert(i);
            let b = u.closure(&seed);
            if prefix_eq(&a, &b, i) {
                next = Some(b);
                break;
            }
        }
        match next {
            Some(b) => a = b,
            None => break,
        }
    }
    closed.sort_by(|x, y| {
        x.count_ones(..)
            .cmp(&y.count_ones(..))
            .then_with(|| x.ones().cmp(y.ones()))
    });
    let mut nodes: Vec<LatticeNode> = closed
        .iter()
        .enumerate()
        .map(|(id, c)| {
            let dsm = u.to_dsm(c);
            LatticeNode {
                id,
                tag: dsm_complexity_tag(&dsm),
                generators: u.minimal_generators(c).into_iter().map(|g| u.shops[g].clone()).collect(),
                dsm,
                covers: Vec::new(),
            }
        })
        .collect();
    for b in 0..closed.len() {
        let mut covers: Vec<usize> = Vec::new();
        for a in (0..b).rev() {
            if closed[a].count_ones(..) == closed[b].count_ones(..) || !closed[a].is_subset(&closed[b]) {
                continue;
            }
            if covers.iter().all(|&c| !closed[a].is_subset(&closed[c])) {
                covers.push(a);
            }
        }
        covers.sort_unstable();
        nodes[b].covers = covers;
    }
    Ok(nodes)
}

/// One line per node: id, size, tag, then the generators in shop syntax.
pub fn render_node_table(nodes: &[LatticeNode]) -> String {
    let mut out = String::new();
    for node in nodes {
        let gens: Vec<String> = node.generators.iter().map(Shop::to_string).collect();
        let _ = writeln!(out, "{} {} {} {}", node.id, node.dsm.len(), node.tag.label(), gens.join(" "));
    }
    out
}

/// One `a covers b` line per edge of the Hasse diagram.
pub fn render_cover_edges(nodes: &[LatticeNode]) -> String {
    let mut out = String::new();
    for node in nodes {
        for c in &node.covers {
            let _ = writeln!(out, "{} covers {}", node.id, c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shops::generate_dsm;

    fn shop(text: &str) -> Shop {
        text.parse().unwrap()
    }

    #[test]
    fn shop_counts() {
        assert_eq!(all_shops(1).unwrap().len(), 1);
        assert_eq!(all_shops(2).unwrap().len(), 7);
        assert_eq!(all_shops(3).unwrap().len(), 265);
        assert!(all_shops(6).is_err());
    }

    #[test]
    fn boolean_lattice() {
        let nodes = enumerate_dsms(2, false).unwrap();
        assert_eq!(nodes.len(), 5);
        let gens: Vec<Vec<String>> = nodes
            .iter()
            .map(|n| n.generators.iter().map(Shop::to_string).collect())
            .collect();
        assert_eq!(
            gens,
            vec![
                vec!["0->{0};1->{1}"],
                vec!["0->{0};1->{0,1}"],
                vec!["0->{1};1->{0}"],
                vec!["0->{0,1};1->{1}"],
                vec!["0->{0,1};1->{0,1}"],
            ]
        );
        let tags: Vec<ComplexityClass> = nodes.iter().map(|n| n.tag).collect();
        use ComplexityClass::*;
        assert_eq!(tags, vec![PspaceComplete, InL, PspaceComplete, InL, InL]);
        let covers: Vec<Vec<usize>> = nodes.iter().map(|n| n.covers.clone()).collect();
        assert_eq!(covers, vec![vec![], vec![0], vec![0], vec![0], vec![1, 2, 3]]);
        assert_eq!(render_cover_edges(&nodes).lines().count(), 6);
    }

    #[test]
    fn one_element_lattice() {
        let nodes = enumerate_dsms(1, false).unwrap();
        assert_eq!(nodes.len(), 1);
        assert_eq!(nodes[0].tag, ComplexityClass::InL);
    }

    #[test]
    fn census_nodes_are_closed_and_distinct() {
        let nodes = enumerate_dsms(3, false).unwrap();
        for node in &nodes {
            assert!(node.dsm.is_closed());
            assert_eq!(generate_dsm(&node.generators, 3).unwrap(), node.dsm);
        }
        let mut sets: Vec<&Dsm> = nodes.iter().map(|n| &n.dsm).collect();
        sets.dedup();
        assert_eq!(sets.len(), nodes.len());
        assert!(enumerate_dsms(4, false).is_err());
    }

    #[test]
    fn tags() {
        assert_eq!(
            dsm_complexity_tag(&generate_dsm(&[], 2).unwrap()),
            ComplexityClass::PspaceComplete
        );
        assert_eq!(
            dsm_complexity_tag(&generate_dsm(&[shop("0->{0};1->{0,1}")], 2).unwrap()),
            ComplexityClass::InL
        );
        let fv = crate::gadgets::gv_shop(1);
        assert_eq!(
            dsm_complexity_tag(&generate_dsm(&[fv], 5).unwrap()),
            ComplexityClass::NpComplete
        );
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            enumerate_dsms_bounded(2, false, 3),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
