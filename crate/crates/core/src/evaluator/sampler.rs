use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::evaluate;
use crate::bits::ElemSet;
use crate::error::{Error, Result};
use crate::formulas::{relativise, Formula, Quantifier, RelativisationMode};
use crate::structures::{Element, Signature, Structure};

/// Shape of the sentences drawn by [`random_sentence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerParams {
    pub max_quantifiers: usize,
    pub max_width: usize,
    pub max_size: usize,
}

impl Default for SamplerParams {
    fn default() -> Self {
        SamplerParams {
            max_quantifiers: 4,
            max_width: 3,
            max_size: 24,
        }
    }
}

/// A random sentence of positive equality-free logic over `sig`.
pub fn random_sentence<R: Rng>(sig: &Signature, rng: &mut R, params: SamplerParams) -> Formula {
    let mut budget = params.max_size;
    gen(sig, rng, &params, &mut Vec::new(), &mut budget)
}

fn gen<R: Rng>(
    sig: &Signature,
    rng: &mut R,
    params: &SamplerParams,
    scope: &mut Vec<String>,
    budget: &mut usize,
) -> Formula {
    *budget = budget.saturating_sub(1);
    let can_quantify = scope.len() < params.max_quantifiers;
    let must_quantify = scope.is_empty();
    let roll: f64 = rng.gen();
    if can_quantify && (must_quantify || roll < 0.35) {
        let kind = if rng.gen_bool(0.5) {
            Quantifier::Exists
        } else {
            Quantifier::Forall
        };
        let var = format!("x{}", scope.len());
        scope.push(var.clone());
        let body = gen(sig, rng, params, scope, budget);
        scope.pop();
        return Formula::quant(kind, var, body);
    }
    if *budget > 2 && roll < 0.7 {
        let width = rng.gen_range(2..=params.max_width.max(2));
        let children: Vec<Formula> = (0..width)
            .map(|_| gen(sig, rng, params, scope, budget))
            .collect();
        return if rng.gen_bool(0.5) {
            Formula::And(children)
        } else {
            Formula::Or(children)
        };
    }
    if sig.is_empty() {
        return Formula::Const(rng.gen_bool(0.5));
    }
    let sym = &sig.symbols()[rng.gen_range(0..sig.len())];
    Formula::Atom {
        symbol: sym.name.clone(),
        args: (0..sym.arity)
            .map(|_| scope[rng.gen_range(0..scope.len())].clone())
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativisationReport {
    pub samples: usize,
    /// Sentences on which the four readings disagree, with their values in
    /// the order: unrestricted, universal only, existential only, both.
    pub counterexamples: Vec<(String, [bool; 4])>,
}

impl RelativisationReport {
    pub fn agrees(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Compares each sampled sentence with its three relativisations to `U`
/// (universal) and `X` (existential).
pub fn check_relativisation(
    s: &Structure,
    u: ElemSet,
    x: ElemSet,
    samples: usize,
    seed: u64,
) -> Result<RelativisationReport> {
    let full = ElemSet::full(s.size().min(64));
    for set in [u, x] {
        if set.is_empty() || !set.is_subset(full) {
            return Err(Error::InvalidArgument(format!(
                "{set} is not a nonempty subset of the domain"
            )));
        }
    }
    let us: BTreeSet<Element> = u.iter().collect();
    let xs: BTreeSet<Element> = x.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counterexamples = Vec::new();
    for _ in 0..samples {
        let f = random_sentence(s.signature(), &mut rng, SamplerParams::default());
        let mut values = [evaluate(s, &f)?; 4];
        for (i, mode) in [
            RelativisationMode::UniversalOnly,
            RelativisationMode::ExistentialOnly,
            RelativisationMode::Both,
        ]
        .into_iter()
        .enumerate()
        {
            values[i + 1] = evaluate(s, &relativise(&f, &us, &xs, mode)?)?;
        }
        if values.iter().any(|&v| v != values[0]) {
            counterexamples.push((f.to_string(), values));
        }
    }
    Ok(RelativisationReport {
        samples,
        counterexamples,
    })
}
