use serde::{Deserialize, Serialize};

use super::{encode, Relation};

/// A `k`-ary operation on `{0,1}` given by its truth table; entry `i` is the
/// value on the argument tuple whose bits, most significant first, spell `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BooleanOperationTable {
    pub arity: usize,
    pub table: Vec<u8>,
}

impl BooleanOperationTable {
    pub fn new(arity: usize, table: Vec<u8>) -> Option<Self> {
        ((1..=8).contains(&arity) && table.len() == 1 << arity && table.iter().all(|&b| b <= 1))
            .then_some(BooleanOperationTable { arity, table })
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[u8]) -> u8) -> Self {
        let table = (0..1usize << arity)
            .map(|i| {
                let args: Vec<u8> = (0..arity)
                    .map(|j| (i >> (arity - 1 - j) & 1) as u8)
                    .collect();
                f(&args) & 1
            })
            .collect();
        BooleanOperationTable { arity, table }
    }

    pub fn constant_zero() -> Self {
        Self::from_fn(1, |_| 0)
    }

    pub fn constant_one() -> Self {
        Self::from_fn(1, |_| 1)
    }

    pub fn and() -> Self {
        Self::from_fn(2, |a| a[0] & a[1])
    }

    pub fn or() -> Self {
        Self::from_fn(2, |a| a[0] | a[1])
    }

    pub fn majority() -> Self {
        Self::from_fn(3, |a| u8::from(a[0] + a[1] + a[2] >= 2))
    }

    /// `x xor y xor z`.
    pub fn minority() -> Self {
        Self::from_fn(3, |a| a[0] ^ a[1] ^ a[2])
    }

    pub fn apply(&self, args: &[u8]) -> u8 {
        let i = args.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
        self.table[i]
    }

    /// Closure of a relation over `{0,1}`; empty relations are closed.
    pub(crate) fn preserves(&self, r: &Relation) -> bool {
        let tuples = r.tuples();
        if tuples.is_empty() {
            return true;
        }
        let m = tuples.len();
        let mut pick = vec![0usize; self.arity];
        let mut out = vec![0usize; r.arity()];
        let mut args = vec![0u8; self.arity];
        loop {
            for (pos, o) in out.iter_mut().enumerate() {
                for (a, &p) in args.iter_mut().zip(&pick) {
                    *a = tuples[p][pos] as u8;
                }
                *o = self.apply(&args) as usize;
            }
            if !r.contains_index(encode(2, &out)) {
                return false;
            }
            let mut i = self.arity;
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < m {
                    break;
                }
                pick[i] = 0;
            }
        }
    }
}
