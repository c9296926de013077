use serde::{Deserialize, Serialize};

use super::ComplexityClass;
use crate::error::{Error, Result};
use crate::structures::{BooleanOperationTable, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SchaeferClass {
    ZeroValid,
    OneValid,
    Horn,
    DualHorn,
    Bijunctive,
    Affine,
}

impl SchaeferClass {
    pub const ALL: [SchaeferClass; 6] = [
        SchaeferClass::ZeroValid,
        SchaeferClass::OneValid,
        SchaeferClass::Horn,
        SchaeferClass::DualHorn,
        SchaeferClass::Bijunctive,
        SchaeferClass::Affine,
    ];

    /// The polymorphism characterising the class.
    pub fn operation(self) -> BooleanOperationTable {
        match self {
            SchaeferClass::ZeroValid => BooleanOperationTable::constant_zero(),
            SchaeferClass::OneValid => BooleanOperationTable::constant_one(),
            SchaeferClass::Horn => BooleanOperationTable::and(),
            SchaeferClass::DualHorn => BooleanOperationTable::or(),
            SchaeferClass::Bijunctive => BooleanOperationTable::majority(),
            SchaeferClass::Affine => BooleanOperationTable::minority(),
        }
    }

    /// The four classes that stay tractable with universal quantifiers.
    pub fn survives_quantifiers(self) -> bool {
        !matches!(self, SchaeferClass::ZeroValid | SchaeferClass::OneValid)
    }
}

/// Classes shared by all relations of a Boolean structure, and the verdict:
/// P when some class holds, otherwise NP-complete (or Pspace-complete when
/// `quantified`). Only the last four classes count when `quantified`.
pub fn boolean_schaefer(
    s: &Structure,
    quantified: bool,
) -> Result<(Vec<SchaeferClass>, ComplexityClass)> {
    if s.size() != 2 {
        return Err(Error::InvalidArgument(format!(
            "Schaefer classes need a two-element domain, found {}",
            s.size()
        )));
    }
    let mut classes = Vec::new();
    for c in SchaeferClass::ALL {
        if quantified && !c.survives_quantifiers() {
            continue;
        }
        if s.closed_under_operation(&c.operation())? {
            classes.push(c);
        }
    }
    let class = if !classes.is_empty() {
        ComplexityClass::InP
    } else if quantified {
        ComplexityClass::PspaceComplete
    } else {
        ComplexityClass::NpComplete
    };
    Ok((classes, class))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(arity: usize, tuples: Vec<Vec<usize>>) -> Structure {
        Structure::from_relations(2, [("R", arity, tuples)]).unwrap()
    }

    #[test]
    fn not_all_equal_fails_everything() {
        let mut t = Vec::new();
        for i in 1..7usize {
            t.push(vec![i >> 2 & 1, i >> 1 & 1, i & 1]);
        }
        let (classes, class) = boolean_schaefer(&rel(3, t.clone()), false).unwrap();
        assert!(classes.is_empty());
        assert_eq!(class, ComplexityClass::NpComplete);
        assert_eq!(boolean_schaefer(&rel(3, t), true).unwrap().1, ComplexityClass::PspaceComplete);
    }

    #[test]
    fn disequality_is_bijunctive_and_affine() {
        let (classes, _) = boolean_schaefer(&rel(2, vec![vec![0, 1], vec![1, 0]]), false).unwrap();
        assert_eq!(classes, vec![SchaeferClass::Bijunctive, SchaeferClass::Affine]);
    }

    #[test]
    fn nand_is_horn() {
        let (classes, class) = boolean_schaefer(&rel(2, vec![vec![0, 0], vec![0, 1], vec![1, 0]]), false).unwrap();
        assert!(classes.contains(&SchaeferClass::Horn));
        assert!(classes.contains(&SchaeferClass::ZeroValid));
        assert_eq!(class, ComplexityClass::InP);
    }

    #[test]
    fn quantified_ignores_constants() {
        // 0-valid and 1-valid but nothing else
        let t = vec![vec![0, 0, 0], vec![1, 1, 1], vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 0]];
        let (classes, class) = boolean_schaefer(&rel(3, t), true).unwrap();
        assert!(classes.iter().all(|c| c.survives_quantifiers()));
        let _ = class;
    }
}
