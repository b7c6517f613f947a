//! Natural and lax natural transformations between presheaves.
//!
//! `φ: F1 → F2` is lax when `F2(h)(φ_a(x)) ≤ φ_a'(F1(h)(x))` for every
//! `h: a' → a` and `x ∈ F1(a)`, and natural when all of these are equalities.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mutation::{self, Mutation};
use crate::order::{lattice_homs, Elem, FinDistLattice};

use super::category::{MorId, ObjId};
use super::presheaf::{Carrier, Presheaf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Natural,
    Lax,
}

/// Components of a transformation, checked only to be maps of the right kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransData<V> {
    source: Arc<Presheaf<V>>,
    target: Arc<Presheaf<V>>,
    components: Vec<Vec<Elem>>,
}

impl<V: Carrier> TransData<V> {
    pub fn new(
        source: Arc<Presheaf<V>>,
        target: Arc<Presheaf<V>>,
        components: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        if source.base() != target.base() {
            return Err(Error::DomainMismatch("presheaves over different categories".into()));
        }
        let base = source.base();
        if components.len() != base.num_objects() {
            return Err(Error::DomainMismatch(format!(
                "{} components for {} objects",
                components.len(),
                base.num_objects()
            )));
        }
        for a in base.objects() {
            V::check_map(source.value(a), target.value(a), &components[a]).map_err(|e| {
                Error::DomainMismatch(format!("component at `{}`: {e}", base.object_name(a)))
            })?;
        }
        Ok(TransData { source, target, components })
    }

    pub(crate) fn new_unchecked(
        source: Arc<Presheaf<V>>,
        target: Arc<Presheaf<V>>,
        components: Vec<Vec<Elem>>,
    ) -> Self {
        TransData { source, target, components }
    }

    pub fn identity(f: Arc<Presheaf<V>>) -> Self {
        let components = f.values().iter().map(|v| (0..v.size()).collect()).collect();
        TransData { source: f.clone(), target: f, components }
    }

    pub fn source(&self) -> &Arc<Presheaf<V>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presheaf<V>> {
        &self.target
    }

    pub fn component(&self, a: ObjId) -> &[Elem] {
        &self.components[a]
    }

    pub fn components(&self) -> &[Vec<Elem>] {
        &self.components
    }

    #[inline]
    pub fn apply(&self, a: ObjId, x: Elem) -> Elem {
        self.components[a][x]
    }

    /// `next ∘ self`
    pub fn then(&self, next: &TransData<V>) -> Result<TransData<V>> {
        if self.target != next.source {
            return Err(Error::DomainMismatch("composite of non-composable transformations".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&next.components)
            .map(|(f, g)| f.iter().map(|&x| g[x]).collect())
            .collect();
        Ok(TransData { source: self.source.clone(), target: next.target.clone(), components })
    }

    /// Componentwise order on parallel transformations.
    pub fn pointwise_leq(&self, other: &TransData<V>) -> bool {
        self.source.base().objects().all(|a| {
            let v = self.target.value(a);
            self.components[a].iter().zip(&other.components[a]).all(|(&x, &y)| v.leq(x, y))
        })
    }
}

/// Classifies a transformation, failing if even the lax inequality breaks.
pub fn validate_transformation<V: Carrier>(t: &TransData<V>) -> Result<Mode> {
    let (f1, f2) = (t.source(), t.target());
    let c = f1.base();
    let mut mode = Mode::Natural;
    for h in c.morphisms() {
        let (a2, a) = (c.dom(h), c.cod(h));
        let v = f2.value(a2);
        for x in 0..f1.value(a).size() {
            let left = f2.restrict(h, t.apply(a, x));
            let right = t.apply(a2, f1.restrict(h, x));
            if left == right {
                continue;
            }
            mode = Mode::Lax;
            if !v.leq(left, right) && !mutation::is_active(Mutation::SkipLaxInequality) {
                return Err(Error::NotLax {
                    morphism: c.mor_name(h).to_owned(),
                    element: f1.value(a).element_name(x).to_owned(),
                });
            }
        }
    }
    Ok(mode)
}

/// Fails unless the transformation is natural.
pub fn require_natural<V: Carrier>(t: &TransData<V>) -> Result<()> {
    let (f1, f2) = (t.source(), t.target());
    let c = f1.base();
    for h in c.morphisms() {
        let (a2, a) = (c.dom(h), c.cod(h));
        for x in 0..f1.value(a).size() {
            if f2.restrict(h, t.apply(a, x)) != t.apply(a2, f1.restrict(h, x)) {
                return Err(Error::NotNatural {
                    morphism: c.mor_name(h).to_owned(),
                    element: f1.value(a).element_name(x).to_owned(),
                });
            }
        }
    }
    Ok(())
}

/// Lattice-hom transformations `f → g` of the given mode, at most `limit` of them.
///
/// `candidates[a]` restricts (and orders) the components tried at `a`; by
/// default every lattice homomorphism is tried, in enumeration order.
pub fn enumerate_transformations(
    f: &Arc<Presheaf<FinDistLattice>>,
    g: &Arc<Presheaf<FinDistLattice>>,
    mode: Mode,
    candidates: Option<Vec<Vec<Vec<Elem>>>>,
    limit: usize,
) -> Vec<TransData<FinDistLattice>> {
    let c = f.base();
    let candidates = candidates.unwrap_or_else(|| {
        c.objects().map(|a| lattice_homs(f.value(a), g.value(a))).collect()
    });
    // squares to check once both ends are chosen, keyed by the later object
    let mut squares: Vec<Vec<MorId>> = vec![Vec::new(); c.num_objects()];
    for h in c.morphisms() {
        if !c.is_identity(h) {
            squares[c.dom(h).max(c.cod(h))].push(h);
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(c.num_objects());
    let square_ok = |chosen: &[usize], h: MorId| {
        let (a2, a) = (c.dom(h), c.cod(h));
        let (pa, pa2) = (&candidates[a][chosen[a]], &candidates[a2][chosen[a2]]);
        (0..f.value(a).len()).all(|x| {
            let left = g.restrict(h, pa[x]);
            let right = pa2[f.restrict(h, x)];
            match mode {
                Mode::Natural => left == right,
                Mode::Lax => g.value(a2).leq(left, right),
            }
        })
    };
    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        n: usize,
        candidates: &[Vec<Vec<Elem>>],
        squares: &[Vec<MorId>],
        chosen: &mut Vec<usize>,
        ok: &dyn Fn(&[usize], MorId) -> bool,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if k == n {
            out.push(chosen.clone());
            return;
        }
        for i in 0..candidates[k].len() {
            chosen.push(i);
            if squares[k].iter().all(|&h| ok(chosen, h)) {
                rec(k + 1, n, candidates, squares, chosen, ok, out, limit);
            }
            chosen.pop();
        }
    }
    rec(0, c.num_objects(), &candidates, &squares, &mut chosen, &square_ok, &mut out, limit);
    out.into_iter()
        .map(|choice| {
            let components = choice.iter().enumerate().map(|(a, &i)| candidates[a][i].clone()).collect();
            TransData::new_unchecked(f.clone(), g.clone(), components)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;
    use crate::fixtures;

    #[test]
    fn identity_is_natural() {
        let f = Arc::new(fixtures::f_ar());
        assert_eq!(validate_transformation(&TransData::identity(f)).unwrap(), Mode::Natural);
    }

    #[test]
    fn lax_but_not_natural() {
        // F_AR → constant BOOL2: o1 ↦ (0,m,1 ↦ 0,0,1), o0 ↦ id.
        // At h: F2(h)(φ_o1(m)) = 0 ≤ 1 = φ_o0(F1(h)(m)).
        let f1 = Arc::new(fixtures::f_ar());
        let f2 = Arc::new(fixtures::a_const_bool2());
        let t = TransData::new(f1.clone(), f2.clone(), vec![vec![0, 1], vec![0, 0, 1]]).unwrap();
        assert_eq!(validate_transformation(&t).unwrap(), Mode::Lax);
        assert!(require_natural(&t).is_err());

        let n = TransData::new(f1.clone(), f2.clone(), vec![vec![0, 1], vec![0, 1, 1]]).unwrap();
        assert_eq!(validate_transformation(&n).unwrap(), Mode::Natural);
        assert!(t.pointwise_leq(&n) && !n.pointwise_leq(&t));
    }

    #[test]
    fn oplax_is_rejected() {
        let k = Arc::new(Presheaf::constant(
            Arc::new(FinCategory::arrow()),
            Arc::new(fixtures::chain3()),
        ));
        let lax = TransData::new(k.clone(), k.clone(), vec![vec![0, 1, 2], vec![0, 0, 2]]).unwrap();
        assert_eq!(validate_transformation(&lax).unwrap(), Mode::Lax);
        let oplax = TransData::new(k.clone(), k.clone(), vec![vec![0, 0, 2], vec![0, 1, 2]]).unwrap();
        assert!(matches!(validate_transformation(&oplax), Err(Error::NotLax { .. })));
        let skipped = crate::mutation::with_mutation(Some(Mutation::SkipLaxInequality), || {
            validate_transformation(&oplax)
        });
        assert_eq!(skipped.unwrap(), Mode::Lax);
        assert!(TransData::new(k.clone(), k, vec![vec![0, 0, 0], vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn enumeration_matches_filtering() {
        let f = Arc::new(fixtures::f_ar());
        let g = Arc::new(fixtures::a_const_bool2());
        let all = enumerate_transformations(&f, &g, Mode::Lax, None, usize::MAX);
        let natural = enumerate_transformations(&f, &g, Mode::Natural, None, usize::MAX);
        // components CHAIN3 → BOOL2 (two homs) and BOOL2 → BOOL2 (identity)
        assert_eq!(all.len(), 2);
        assert_eq!(natural.len(), 1);
        for t in &all {
            assert!(validate_transformation(t).is_ok());
        }
        assert_eq!(validate_transformation(&natural[0]).unwrap(), Mode::Natural);
        assert_eq!(enumerate_transformations(&f, &g, Mode::Lax, None, 1).len(), 1);
    }

    #[test]
    fn composition() {
        let c = Arc::new(FinCategory::arrow());
        let f = Arc::new(fixtures::f_ar());
        assert_eq!(f.base(), &c);
        let id = TransData::identity(f.clone());
        assert_eq!(id.then(&id).unwrap(), id);
    }
}
