use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structures::{are_isomorphic, find_morphism, MorphismKind, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ContainmentFragment {
    Pp,
    PpNeq,
    EqfreeNeg,
    PosEqfree,
}

/// Whether every sentence of the fragment true in `a` is true in `b`.
pub fn contained_in(a: &Structure, b: &Structure, fragment: ContainmentFragment) -> Result<bool> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(
            "containment compares structures over one signature".into(),
        ));
    }
    Ok(match fragment {
        ContainmentFragment::Pp => find_morphism(a, b, MorphismKind::Homomorphism)?.is_some(),
        ContainmentFragment::PpNeq => find_morphism(a, b, MorphismKind::Injective)?.is_some(),
        ContainmentFragment::EqfreeNeg => {
            are_isomorphic(&a.quotient_by_sim().0, &b.quotient_by_sim().0)?
        }
        ContainmentFragment::PosEqfree => {
            find_morphism(a, b, MorphismKind::SurjectiveHyper)?.is_some()
        }
    })
}
