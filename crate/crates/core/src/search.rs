//! Backtracking search for hyper-maps `A -> B` whose images are drawn from
//! per-element candidate lists and which preserve a set of relation pairs.
//! Functions are the special case of singleton candidates.

use std::ops::ControlFlow;

use crate::structures::{Element, Relation};

pub(crate) struct HyperProblem<'a> {
    pub source_size: usize,
    pub target_size: usize,
    /// Candidate images per source element, tried in the given order.
    pub candidates: Vec<Vec<u64>>,
    /// `(source relation, target relation)`: for every source tuple the
    /// product of images must lie in the target relation.
    pub constraints: Vec<(&'a Relation, &'a Relation)>,
    /// Source elements whose images must jointly cover the target.
    pub cover: u64,
    /// Images must be pairwise disjoint.
    pub injective: bool,
}

struct Check<'a> {
    tuple: &'a [Element],
    target: &'a Relation,
}

impl<'a> HyperProblem<'a> {
    pub fn first(&self) -> Option<Vec<u64>> {
        let mut found = None;
        self.run(&mut |images| {
            found = Some(images.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    pub fn all(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        self.run(&mut |images| {
            out.push(images.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    /// Calls `visit` on every solution until it breaks.
    pub fn run(&self, visit: &mut dyn FnMut(&[u64]) -> ControlFlow<()>) {
        let n = self.source_size;
        let full = if self.target_size >= 64 {
            u64::MAX
        } else {
            (1u64 << self.target_size) - 1
        };

        let mut degree = vec![0usize; n];
        for (src, _) in &self.constraints {
            for t in src.tuples() {
                for &e in t {
                    degree[e] += 1;
                }
            }
        }
        let mut order: Vec<Element> = (0..n).collect();
        order.sort_by_key(|&e| (std::cmp::Reverse(degree[e]), e));
        let mut pos = vec![0usize; n];
        for (i, &e) in order.iter().enumerate() {
            pos[e] = i;
        }

        // Filter candidates by the tuples that mention only one element.
        let mut candidates = self.candidates.clone();
        for (src, tgt) in &self.constraints {
            for t in src.tuples() {
                let e = t[0];
                if t.iter().all(|&x| x == e) {
                    candidates[e].retain(|&img| {
                        let images = vec![img; t.len()];
                        product_in(&images, tgt, self.target_size)
                    });
                }
            }
        }
        if candidates.iter().any(Vec::is_empty) {
            return;
        }

        let mut checks: Vec<Vec<Check>> = (0..n).map(|_| Vec::new()).collect();
        for (src, tgt) in &self.constraints {
            for t in src.tuples() {
                let last = t.iter().map(|&e| pos[e]).max().unwrap();
                checks[last].push(Check {
                    tuple: t,
                    target: tgt,
                });
            }
        }

        // Union of everything still available to cover, from step i on.
        let mut reach = vec![0u64; n + 1];
        for i in (0..n).rev() {
            let e = order[i];
            let mut r = reach[i + 1];
            if self.cover >> e & 1 == 1 {
                for &c in &candidates[e] {
                    r |= c;
                }
            }
            reach[i] = r;
        }
        if self.cover != 0 && reach[0] & full != full {
            return;
        }

        let mut state = State {
            problem: self,
            order: &order,
            candidates: &candidates,
            checks: &checks,
            reach: &reach,
            full,
            images: vec![0u64; n],
            scratch: Vec::new(),
        };
        let _ = state.step(0, 0, 0, visit);
    }
}

struct State<'p, 'a> {
    problem: &'p HyperProblem<'a>,
    order: &'p [Element],
    candidates: &'p [Vec<u64>],
    checks: &'p [Vec<Check<'a>>],
    reach: &'p [u64],
    full: u64,
    images: Vec<u64>,
    scratch: Vec<u64>,
}

impl State<'_, '_> {
    fn step(
        &mut self,
        i: usize,
        covered: u64,
        used: u64,
        visit: &mut dyn FnMut(&[u64]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if i == self.order.len() {
            if self.problem.cover != 0 && covered != self.full {
                return ControlFlow::Continue(());
            }
            return visit(&self.images);
        }
        let e = self.order[i];
        let counts = self.problem.cover >> e & 1 == 1;
        for &img in &self.candidates[e] {
            if self.problem.injective && img & used != 0 {
                continue;
            }
            let cov = if counts { covered | img } else { covered };
            if self.problem.cover != 0 && (cov | self.reach[i + 1]) != self.full {
                continue;
            }
            self.images[e] = img;
            if self.consistent(i) {
                self.step(i + 1, cov, used | img, visit)?;
            }
        }
        self.images[e] = 0;
        ControlFlow::Continue(())
    }

    fn consistent(&mut self, i: usize) -> bool {
        let size = self.problem.target_size;
        for c in &self.checks[i] {
            self.scratch.clear();
            self.scratch.extend(c.tuple.iter().map(|&x| self.images[x]));
            if !product_in(&self.scratch, c.target, size) {
                return false;
            }
        }
        true
    }
}

/// Whether `images[0] x ... x images[k-1]` is contained in `target`.
pub(crate) fn product_in(images: &[u64], target: &Relation, size: usize) -> bool {
    fn rec(images: &[u64], target: &Relation, size: usize, acc: usize) -> bool {
        match images.split_first() {
            None => target.contains_index(acc),
            Some((&set, rest)) => {
                let mut bits = set;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if !rec(rest, target, size, acc * size + b) {
                        return false;
                    }
                }
                true
            }
        }
    }
    rec(images, target, size, 0)
}

/// Every nonempty subset of `0..n`, in increasing bitmask order.
pub(crate) fn nonempty_subsets(n: usize) -> Vec<u64> {
    let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    (1..=full).collect()
}

pub(crate) fn singletons(n: usize) -> Vec<u64> {
    (0..n).map(|e| 1u64 << e).collect()
}
