//! Finite categories, presheaves on them, and transformations between presheaves.

mod category;
mod presheaf;
mod transformation;

use std::sync::Arc;

pub use category::{
    identity_name, slice, validate_category, FinCategory, MorId, Morphism, ObjId, RawCategory, Slice,
};
pub use presheaf::{Carrier, FinSet, LatPresheaf, PosPresheaf, Presheaf, SetPresheaf};
pub use transformation::{enumerate_transformations, require_natural, validate_transformation, Mode, TransData};

use crate::error::Result;
use crate::ndl::{c_map, complete_c, Completion};
use crate::order::FinDistLattice;

/// `C ∘ F` together with the completion of every value.
#[derive(Clone, Debug)]
pub struct CPresheaf {
    pub presheaf: Arc<LatPresheaf>,
    pub completions: Vec<Completion>,
}

impl CPresheaf {
    /// The lax transformation `⇓ : F → C ∘ F`.
    pub fn doubledown(&self, f: Arc<LatPresheaf>) -> TransData<FinDistLattice> {
        let components = self.completions.iter().map(|c| c.doubledown_table().to_vec()).collect();
        TransData::new_unchecked(f, self.presheaf.clone(), components)
    }
}

/// Post-composes a presheaf of normal lattices with `C`.
pub fn compose_with_c(f: &LatPresheaf) -> Result<CPresheaf> {
    let base = f.base();
    let completions = f.values().iter().map(|v| complete_c(v)).collect::<Result<Vec<_>>>()?;
    let maps = base
        .morphisms()
        .map(|h| {
            let (b, a) = (base.dom(h), base.cod(h));
            c_map(f.value(b), &completions[a], &completions[b], f.map(h))
        })
        .collect::<Result<Vec<_>>>()?;
    let values = completions.iter().map(|c| c.lattice().clone()).collect();
    let presheaf = Arc::new(Presheaf::new(base.clone(), values, maps)?);
    Ok(CPresheaf { presheaf, completions })
}

/// `C(α) : C ∘ F1 → C ∘ F2`, componentwise.
pub fn c_on_transformation(
    alpha: &TransData<FinDistLattice>,
    c1: &CPresheaf,
    c2: &CPresheaf,
) -> Result<TransData<FinDistLattice>> {
    let base = alpha.source().base();
    let components = base
        .objects()
        .map(|a| {
            c_map(
                alpha.target().value(a),
                &c1.completions[a],
                &c2.completions[a],
                alpha.component(a),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    TransData::new(c1.presheaf.clone(), c2.presheaf.clone(), components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn c_of_f_ar() {
        let f = Arc::new(fixtures::f_ar());
        let cf = compose_with_c(&f).unwrap();
        assert_eq!(cf.presheaf.value(0).len(), 2);
        assert_eq!(cf.presheaf.value(1).len(), 2);
        let down = cf.doubledown(f);
        // ⇓m = {0} in CHAIN3 while ⇓ of its image 1 is all of BOOL2.
        assert_eq!(validate_transformation(&down).unwrap(), Mode::Lax);
    }
}
