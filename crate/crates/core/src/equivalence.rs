//! Internal compact regular frames over a finite base, modeled as presheaves
//! `L` with a fixing isomorphism `λ: L ≅ tilde(C ∘ L)`, and their
//! correspondence with presheaves of finite Boolean algebras.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{
    c_on_transformation, compose_with_c, enumerate_transformations, require_natural, CPresheaf,
    LatPresheaf, Mode, ObjId, TransData,
};
use crate::lax::{epsilon, mu, psi, tilde, tilde_on_lax, Tilde};
use crate::ndl::{is_compact_regular, sup_inverse};
use crate::order::{check_hom, is_order_isomorphism, FinDistLattice};

type Trans = TransData<FinDistLattice>;

/// A presheaf of compact regular (finite Boolean) lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KRFunctor(Arc<LatPresheaf>);

impl KRFunctor {
    pub fn new(p: Arc<LatPresheaf>) -> Result<Self> {
        for (o, v) in p.values().iter().enumerate() {
            if !is_compact_regular(v) {
                return Err(Error::NotCompactRegular(format!("value at `{}`", p.base().object_name(o))));
            }
        }
        Ok(KRFunctor(p))
    }

    pub fn presheaf(&self) -> &Arc<LatPresheaf> {
        &self.0
    }
}

/// A carrier `L` with `λ: L ≅ tilde(C ∘ L)` and its inverse.
#[derive(Clone, Debug)]
pub struct InternalKRFrame {
    carrier: Arc<LatPresheaf>,
    c_carrier: CPresheaf,
    fixed: Tilde<FinDistLattice>,
    lambda: Trans,
    lambda_inv: Trans,
}

impl InternalKRFrame {
    pub fn carrier(&self) -> &Arc<LatPresheaf> {
        &self.carrier
    }

    /// `C ∘ L`
    pub fn c_carrier(&self) -> &CPresheaf {
        &self.c_carrier
    }

    /// `tilde(C ∘ L)`
    pub fn fixed(&self) -> &Tilde<FinDistLattice> {
        &self.fixed
    }

    pub fn lambda(&self) -> &Trans {
        &self.lambda
    }

    pub fn lambda_inv(&self) -> &Trans {
        &self.lambda_inv
    }
}

/// Componentwise `⇓` as a natural map `A → C ∘ A`.
fn doubledown_of(a: &KRFunctor, ca: &CPresheaf) -> Result<Trans> {
    let t = ca.doubledown(a.presheaf().clone());
    require_natural(&t)?;
    Ok(t)
}

/// Componentwise `⋁` as a natural map `C ∘ A → A`.
fn sup_of(a: &KRFunctor, ca: &CPresheaf) -> Result<Trans> {
    let p = a.presheaf();
    let components = p
        .base()
        .objects()
        .map(|o| {
            ca.completions[o]
                .ideals()
                .iter()
                .map(|i| sup_inverse(p.value(o), i))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    TransData::new(ca.presheaf.clone(), p.clone(), components)
}

/// `Ψ(A)`: the carrier `Ã` with `λ = tilde(C(ε) ∘ ⇓)` and `λ⁻¹ = tilde(⋁ ∘ C(μ))`.
pub fn psi_functor(a: &KRFunctor) -> Result<InternalKRFrame> {
    let ta = tilde(a.presheaf())?;
    let carrier = ta.presheaf().clone();
    let ca = compose_with_c(a.presheaf())?;
    let cl = compose_with_c(&carrier)?;
    let fixed = tilde(&cl.presheaf)?;
    let e = epsilon(&ta)?;
    let m = mu(&ta)?;
    let c_eps = c_on_transformation(&e, &ca, &cl)?;
    let c_mu = c_on_transformation(&m, &cl, &ca)?;
    let down = doubledown_of(a, &ca)?.then(&c_eps)?;
    let up = c_mu.then(&sup_of(a, &ca)?)?;
    let lambda = tilde_on_lax(&down, &ta, &fixed)?;
    let lambda_inv = tilde_on_lax(&up, &fixed, &ta)?;
    let frame = InternalKRFrame { carrier, c_carrier: cl, fixed, lambda, lambda_inv };
    check_internal_doubledown(&frame)?;
    check_fix_iso(&frame)?;
    Ok(frame)
}

/// `λ(x)_f` must be `⇓(L(f)x)` computed in `L(b)`.
fn check_internal_doubledown(frame: &InternalKRFrame) -> Result<()> {
    let l = &frame.carrier;
    let c = l.base();
    for a in c.objects() {
        for x in 0..l.value(a).len() {
            let fam = frame.fixed.family(a, frame.lambda.apply(a, x));
            for (&f, &y) in frame.fixed.coordinates(a).iter().zip(fam) {
                let expected = frame.c_carrier.completions[c.dom(f)].doubledown(l.restrict(f, x));
                if y != expected {
                    return Err(Error::IsoFailure(format!(
                        "λ at `{}` differs from the internal ⇓ on coordinate `{}`",
                        c.object_name(a),
                        c.mor_name(f)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Both maps natural, every component a lattice iso and an order iso, mutually inverse.
fn check_inverse_pair(name: &str, forward: &Trans, backward: &Trans) -> Result<()> {
    require_natural(forward).map_err(|e| Error::IsoFailure(format!("{name}: {e}")))?;
    require_natural(backward).map_err(|e| Error::IsoFailure(format!("{name} inverse: {e}")))?;
    let (s, t) = (forward.source(), forward.target());
    let c = s.base();
    for a in c.objects() {
        let (sv, tv) = (s.value(a), t.value(a));
        let (fw, bw) = (forward.component(a), backward.component(a));
        check_hom(sv, tv, fw).map_err(|e| Error::IsoFailure(format!("{name} at `{}`: {e}", c.object_name(a))))?;
        check_hom(tv, sv, bw).map_err(|e| Error::IsoFailure(format!("{name} inverse at `{}`: {e}", c.object_name(a))))?;
        if !is_order_isomorphism(sv.poset(), tv.poset(), fw) {
            return Err(Error::IsoFailure(format!("{name} at `{}` is not an order isomorphism", c.object_name(a))));
        }
        if (0..sv.len()).any(|x| bw[fw[x]] != x) || (0..tv.len()).any(|y| fw[bw[y]] != y) {
            return Err(Error::IsoFailure(format!("{name} at `{}` is not inverted", c.object_name(a))));
        }
    }
    Ok(())
}

fn check_fix_iso(frame: &InternalKRFrame) -> Result<()> {
    check_inverse_pair("λ", &frame.lambda, &frame.lambda_inv)
}

/// `Φ(L) = C ∘ L`
pub fn phi_functor(frame: &InternalKRFrame) -> Result<KRFunctor> {
    KRFunctor::new(frame.c_carrier.presheaf.clone())
}

/// `Φ` on a morphism of internal frames: `C` applied componentwise.
pub fn phi_on_morphism(alpha: &Trans, l1: &InternalKRFrame, l2: &InternalKRFrame) -> Result<Trans> {
    c_on_transformation(alpha, &l1.c_carrier, &l2.c_carrier)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub object: String,
    /// `(x, image)` by element name.
    pub bijection: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub check: &'static str,
    pub components: Vec<ComponentReport>,
    pub squares: usize,
}

fn report(check: &'static str, t: &Trans) -> EquivalenceReport {
    let (s, g) = (t.source(), t.target());
    let c = s.base();
    let components = c
        .objects()
        .map(|a| ComponentReport {
            object: c.object_name(a).to_owned(),
            bijection: (0..s.value(a).len())
                .map(|x| (s.value(a).name(x).to_owned(), g.value(a).name(t.apply(a, x)).to_owned()))
                .collect(),
        })
        .collect();
    let squares = c.morphisms().map(|h| s.value(c.cod(h)).len()).sum();
    EquivalenceReport { check, components, squares }
}

/// The unit/counit data `C ∘ Ã ≅ A` built from the fixing isomorphism.
pub struct TheoremWitness {
    pub frame: InternalKRFrame,
    /// `ψ^{λ⁻¹}: C ∘ Ã → A`
    pub counit: Trans,
    /// `ψ^{λ}: A → C ∘ Ã`
    pub unit: Trans,
}

pub fn theorem_witness(a: &KRFunctor) -> Result<TheoremWitness> {
    let frame = psi_functor(a)?;
    let ta = tilde(a.presheaf())?;
    let counit = psi(&frame.lambda_inv, &frame.fixed, &ta)?;
    let unit = psi(&frame.lambda, &ta, &frame.fixed)?;
    check_inverse_pair("ψ", &counit, &unit)?;
    Ok(TheoremWitness { frame, counit, unit })
}

/// `Φ(Ψ(A)) ≅ A`, with every component and square checked.
pub fn verify_theorem(a: &KRFunctor) -> Result<EquivalenceReport> {
    let w = theorem_witness(a)?;
    Ok(report("theorem", &w.counit))
}

/// `Ψ(Φ(L)) ≅ L` through `λ`.
pub fn verify_fixed(frame: &InternalKRFrame) -> Result<EquivalenceReport> {
    check_fix_iso(frame)?;
    phi_functor(frame)?;
    Ok(report("fixed", &frame.lambda))
}

/// `Φ(L)(a) = C(L(a))` and `L(a) ≅ tilde(Φ(L))(a)` through `λ_a`.
pub fn jt_pointwise(frame: &InternalKRFrame, a: ObjId) -> Result<ComponentReport> {
    let l = &frame.carrier;
    let direct = crate::ndl::complete_c(l.value(a))?;
    if direct.lattice() != frame.c_carrier.presheaf.value(a) {
        return Err(Error::IsoFailure(format!("Φ(L) at `{}` is not C(L(a))", l.base().object_name(a))));
    }
    let (src, dst) = (l.value(a), frame.fixed.presheaf().value(a));
    let comp = frame.lambda.component(a);
    if !is_order_isomorphism(src.poset(), dst.poset(), comp) || check_hom(src, dst, comp).is_err() {
        return Err(Error::IsoFailure(format!("λ at `{}` is not an isomorphism", l.base().object_name(a))));
    }
    Ok(report("pointwise", &frame.lambda).components.swap_remove(a))
}

/// Morphisms `Ψ(A) → Ψ(B)` of the fixed-point category: natural `α: Ã → B̃`
/// with `tilde(C(α)) ∘ λ_A = λ_B ∘ α`.
pub fn fixed_morphisms(fa: &InternalKRFrame, fb: &InternalKRFrame, limit: usize) -> Result<Vec<Trans>> {
    let mut out = Vec::new();
    for alpha in enumerate_transformations(&fa.carrier, &fb.carrier, Mode::Natural, None, limit) {
        if is_fixed_morphism(&alpha, fa, fb)? {
            out.push(alpha);
        }
    }
    Ok(out)
}

pub fn is_fixed_morphism(alpha: &Trans, fa: &InternalKRFrame, fb: &InternalKRFrame) -> Result<bool> {
    let c_alpha = phi_on_morphism(alpha, fa, fb)?;
    let lifted = tilde_on_lax(&c_alpha, &fa.fixed, &fb.fixed)?;
    Ok(fa.lambda.then(&lifted)? == alpha.then(&fb.lambda)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomReport {
    pub natural: usize,
    pub fixed: usize,
}

/// Checks that `φ ↦ φ̃` is a bijection `Nat(A, B) → Hom(Ψ(A), Ψ(B))`, and
/// that the counit is natural in `A`.
pub fn hom_correspondence(a: &KRFunctor, b: &KRFunctor) -> Result<HomReport> {
    let (wa, wb) = (theorem_witness(a)?, theorem_witness(b)?);
    let (ta, tb) = (tilde(a.presheaf())?, tilde(b.presheaf())?);
    let naturals = enumerate_transformations(a.presheaf(), b.presheaf(), Mode::Natural, None, usize::MAX);
    let fixed = fixed_morphisms(&wa.frame, &wb.frame, usize::MAX)?;
    let mut images = Vec::new();
    for phi in &naturals {
        let lifted = tilde_on_lax(phi, &ta, &tb)?;
        if !fixed.contains(&lifted) {
            return Err(Error::IsoFailure("tilde of a natural map is not a fixed-point morphism".into()));
        }
        if images.contains(&lifted) {
            return Err(Error::IsoFailure("tilde is not injective on natural maps".into()));
        }
        // counit ∘ C(φ̃) = φ ∘ counit
        let left = phi_on_morphism(&lifted, &wa.frame, &wb.frame)?.then(&wb.counit)?;
        let right = wa.counit.then(phi)?;
        if left != right {
            return Err(Error::IsoFailure("the counit is not natural in A".into()));
        }
        images.push(lifted);
    }
    if images.len() != fixed.len() {
        return Err(Error::IsoFailure(format!(
            "{} natural maps but {} fixed-point morphisms",
            naturals.len(),
            fixed.len()
        )));
    }
    Ok(HomReport { natural: naturals.len(), fixed: fixed.len() })
}

/// `tilde(C ∘ –)` applied twice agrees with once, through `Ψ` of `C ∘ N`.
pub fn check_idempotence(n: &LatPresheaf) -> Result<EquivalenceReport> {
    let cn = compose_with_c(n)?;
    let frame = psi_functor(&KRFunctor::new(cn.presheaf.clone())?)?;
    verify_fixed(&frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{FinCategory, Presheaf};
    use crate::fixtures;
    use crate::order::find_isomorphism;

    fn kr(p: LatPresheaf) -> KRFunctor {
        KRFunctor::new(Arc::new(p)).unwrap()
    }

    #[test]
    fn rejects_non_boolean() {
        assert!(matches!(KRFunctor::new(Arc::new(fixtures::f_ar())), Err(Error::NotCompactRegular(_))));
    }

    #[test]
    fn constant_bool2_on_arrow() {
        let a = kr(fixtures::a_const_bool2());
        let frame = psi_functor(&a).unwrap();
        let v1 = frame.carrier().value(1);
        assert_eq!(v1.len(), 3);
        assert!(!v1.is_boolean());
        assert_eq!(frame.carrier().value(0).len(), 2);
        let phi = phi_functor(&frame).unwrap();
        assert_eq!(phi.presheaf().value(1).len(), 2);
        let r = verify_theorem(&a).unwrap();
        assert_eq!(r.components.len(), 2);
        verify_fixed(&frame).unwrap();
        let pw = jt_pointwise(&frame, 1).unwrap();
        assert_eq!(pw.bijection.len(), 3);
    }

    #[test]
    fn one_object_base() {
        let a = kr(Presheaf::constant(Arc::new(FinCategory::terminal()), Arc::new(fixtures::bool4())));
        let frame = psi_functor(&a).unwrap();
        assert!(find_isomorphism(frame.carrier().value(0), &fixtures::bool4()).is_some());
        verify_theorem(&a).unwrap();
        jt_pointwise(&frame, 0).unwrap();
    }

    #[test]
    fn a_ar_round_trip() {
        let a = kr(fixtures::a_ar());
        let w = theorem_witness(&a).unwrap();
        for o in 0..2 {
            assert!(find_isomorphism(w.counit.source().value(o), a.presheaf().value(o)).is_some());
        }
        verify_fixed(&w.frame).unwrap();
    }

    #[test]
    fn hom_correspondence_examples() {
        let one = Arc::new(FinCategory::terminal());
        let b2 = kr(Presheaf::constant(one.clone(), Arc::new(fixtures::bool2())));
        let b4 = kr(Presheaf::constant(one, Arc::new(fixtures::bool4())));
        assert_eq!(hom_correspondence(&b2, &b2).unwrap(), HomReport { natural: 1, fixed: 1 });
        assert_eq!(hom_correspondence(&b4, &b2).unwrap(), HomReport { natural: 2, fixed: 2 });
        let ar = kr(fixtures::a_ar());
        let cb = kr(fixtures::a_const_bool2());
        let r = hom_correspondence(&ar, &cb).unwrap();
        assert_eq!(r.natural, r.fixed);
    }

    #[test]
    fn idempotence_on_f_ar() {
        check_idempotence(&fixtures::f_ar()).unwrap();
    }
}
