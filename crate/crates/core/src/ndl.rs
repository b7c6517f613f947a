//! The well-inside relation, normality, and the round-ideal completion `C`.
//!
//! `a ◁ b` holds when some `c` has `a ∧ c = 0` and `b ∨ c = 1`. In a
//! distributive lattice the set `{ c | b ∨ c = 1 }` is closed under meets, so
//! it has a least element `s(b)`, and `a ◁ b` iff `a ∧ s(b) = 0`. The
//! [`WellInside`] table uses that shortcut; [`well_inside`] searches for the
//! witness directly.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mutation::{self, Mutation};
use crate::order::{
    ideals, lattice_homs, lattice_of_ideals, Elem, ElemSet, FinDistLattice, Ideal, LatticeHom,
};

/// Searches for the least `c` (by index) with `a ∧ c = 0` and `b ∨ c = 1`.
pub fn well_inside(l: &FinDistLattice, a: Elem, b: Elem) -> Result<Option<Elem>> {
    for x in [a, b] {
        if x >= l.len() {
            return Err(Error::UnknownElement(format!("#{x}")));
        }
    }
    Ok(l
        .elements()
        .find(|&c| l.meet(a, c) == l.bottom() && l.join(b, c) == l.top()))
}

/// The whole `◁` relation of one lattice.
#[derive(Clone, Debug)]
pub struct WellInside {
    supplement: Vec<Elem>,
    above: Vec<ElemSet>,
    below: Vec<ElemSet>,
}

impl WellInside {
    pub fn new(l: &FinDistLattice) -> Self {
        let supplement: Vec<Elem> = l
            .elements()
            .map(|b| l.meet_all(l.elements().filter(|&c| l.join(b, c) == l.top())))
            .collect();
        let mut above = vec![l.poset().empty_set(); l.len()];
        let mut below = vec![l.poset().empty_set(); l.len()];
        for a in l.elements() {
            for b in l.elements() {
                if l.meet(a, supplement[b]) == l.bottom() {
                    above[a].insert(b);
                    below[b].insert(a);
                }
            }
        }
        WellInside { supplement, above, below }
    }

    #[inline]
    pub fn holds(&self, a: Elem, b: Elem) -> bool {
        self.above[a].contains(b)
    }

    /// Least `c` with `b ∨ c = 1`; it witnesses every `a ◁ b`.
    pub fn witness(&self, b: Elem) -> Elem {
        self.supplement[b]
    }

    /// `{ b | a ◁ b }`
    pub fn above(&self, a: Elem) -> &ElemSet {
        &self.above[a]
    }

    /// `⇓b = { a | a ◁ b }`
    pub fn below(&self, b: Elem) -> &ElemSet {
        &self.below[b]
    }
}

/// One separated cover: `a ∨ b = 1`, `a' ∧ b' = 0`, `a' ∨ b = 1 = a ∨ b'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverWitness {
    pub a: Elem,
    pub b: Elem,
    pub a_sep: Elem,
    pub b_sep: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum NormalityCertificate {
    Normal { witnesses: Vec<CoverWitness> },
    NotNormal { a: Elem, b: Elem },
}

impl NormalityCertificate {
    pub fn is_normal(&self) -> bool {
        matches!(self, NormalityCertificate::Normal { .. })
    }

    pub fn witness(&self, a: Elem, b: Elem) -> Option<CoverWitness> {
        match self {
            NormalityCertificate::Normal { witnesses } => {
                witnesses.iter().copied().find(|w| (w.a, w.b) == (a, b))
            }
            NormalityCertificate::NotNormal { .. } => None,
        }
    }

    /// Re-checks every recorded witness (or the failing cover) against `l`.
    pub fn check(&self, l: &FinDistLattice) -> Result<()> {
        match self {
            NormalityCertificate::Normal { witnesses } => {
                let covers = l
                    .elements()
                    .flat_map(|a| l.elements().map(move |b| (a, b)))
                    .filter(|&(a, b)| l.join(a, b) == l.top())
                    .count();
                if covers != witnesses.len() {
                    return Err(Error::NotNormal("certificate".into(), "incomplete".into()));
                }
                for w in witnesses {
                    let ok = l.join(w.a, w.b) == l.top()
                        && l.meet(w.a_sep, w.b_sep) == l.bottom()
                        && l.join(w.a_sep, w.b) == l.top()
                        && l.join(w.a, w.b_sep) == l.top();
                    if !ok {
                        return Err(Error::NotNormal(
                            l.name(w.a).to_owned(),
                            l.name(w.b).to_owned(),
                        ));
                    }
                }
                Ok(())
            }
            NormalityCertificate::NotNormal { a, b } => {
                let separable = l.elements().any(|x| {
                    l.elements().any(|y| {
                        l.meet(x, y) == l.bottom()
                            && l.join(x, *b) == l.top()
                            && l.join(*a, y) == l.top()
                    })
                });
                if l.join(*a, *b) != l.top() || separable {
                    return Err(Error::NotNormal("certificate".into(), "spurious failure".into()));
                }
                Ok(())
            }
        }
    }
}

/// Scans every ordered cover `a ∨ b = 1`.
///
/// The recorded separators are the least candidates, `a' = s(b)` and
/// `b' = s(a)`. The answer is cross-checked against the equivalent form
/// `a ∨ b = 1 ⇒ ∃ a' ◁ a with a' ∨ b = 1`.
pub fn is_normal(l: &FinDistLattice) -> NormalityCertificate {
    let wi = WellInside::new(l);
    normality_with(l, &wi)
}

pub(crate) fn normality_with(l: &FinDistLattice, wi: &WellInside) -> NormalityCertificate {
    let mut witnesses = Vec::new();
    let mut failure = None;
    for a in l.elements() {
        for b in l.elements() {
            if l.join(a, b) != l.top() {
                continue;
            }
            let (a_sep, b_sep) = (wi.witness(b), wi.witness(a));
            if l.meet(a_sep, b_sep) == l.bottom() {
                witnesses.push(CoverWitness { a, b, a_sep, b_sep });
            } else if failure.is_none() {
                failure = Some((a, b));
            }
        }
    }
    let certificate = match failure {
        None => NormalityCertificate::Normal { witnesses },
        Some((a, b)) => NormalityCertificate::NotNormal { a, b },
    };
    assert_eq!(
        certificate.is_normal(),
        normal_via_well_inside(l, wi),
        "the two forms of normality disagree"
    );
    certificate
}

fn normal_via_well_inside(l: &FinDistLattice, wi: &WellInside) -> bool {
    l.elements().all(|a| {
        l.elements().all(|b| {
            l.join(a, b) != l.top() || wi.below(a).ones().any(|a2| l.join(a2, b) == l.top())
        })
    })
}

fn require_normal(l: &FinDistLattice, wi: &WellInside) -> Result<()> {
    match normality_with(l, wi) {
        NormalityCertificate::Normal { .. } => Ok(()),
        NormalityCertificate::NotNormal { a, b } => {
            Err(Error::NotNormal(l.name(a).to_owned(), l.name(b).to_owned()))
        }
    }
}

/// The least `c` (by index) with `a ◁ c ◁ b`.
pub fn interpolate(l: &FinDistLattice, a: Elem, b: Elem) -> Result<Elem> {
    let wi = WellInside::new(l);
    require_normal(l, &wi)?;
    if !wi.holds(a, b) {
        return Err(Error::NotWellInside(l.name(a).to_owned(), l.name(b).to_owned()));
    }
    l.elements()
        .find(|&c| wi.holds(a, c) && wi.holds(c, b))
        .ok_or_else(|| Error::NotWellInside(l.name(a).to_owned(), l.name(b).to_owned()))
}

/// Every `x ∈ I` is well inside some `y ∈ I`.
pub fn is_round(wi: &WellInside, members: &ElemSet) -> bool {
    members.ones().all(|a| !wi.above(a).is_disjoint(members))
}

/// An ideal each of whose members is well inside another member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RoundIdeal(Ideal);

impl RoundIdeal {
    pub fn new(l: &FinDistLattice, ideal: Ideal) -> Result<Self> {
        if !is_round(&WellInside::new(l), ideal.members()) {
            return Err(Error::NotRoundIdeal(ideal.name(l)));
        }
        Ok(RoundIdeal(ideal))
    }

    pub fn ideal(&self) -> &Ideal {
        &self.0
    }
}

/// `C(N)`: round ideals under inclusion, plus `⇓ : N → C(N)`.
#[derive(Clone, Debug)]
pub struct Completion {
    lattice: Arc<FinDistLattice>,
    ideals: Vec<Ideal>,
    lookup: HashMap<ElemSet, Elem>,
    doubledown: Vec<Elem>,
}

impl Completion {
    pub fn lattice(&self) -> &Arc<FinDistLattice> {
        &self.lattice
    }

    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    pub fn ideal(&self, i: Elem) -> &Ideal {
        &self.ideals[i]
    }

    /// Index of the round ideal with exactly these members.
    pub fn index_of(&self, members: &ElemSet) -> Option<Elem> {
        self.lookup.get(members).copied()
    }

    /// `⇓a`
    pub fn doubledown(&self, a: Elem) -> Elem {
        self.doubledown[a]
    }

    pub fn doubledown_table(&self) -> &[Elem] {
        &self.doubledown
    }
}

/// Materializes `C(N)` by filtering the ideals of `N` for roundness.
pub fn complete_c(n: &FinDistLattice) -> Result<Completion> {
    let wi = WellInside::new(n);
    require_normal(n, &wi)?;
    let round: Vec<Ideal> = ideals(n)
        .into_iter()
        .filter(|i| is_round(&wi, i.members()))
        .collect();
    let lattice = lattice_of_ideals(n, &round)?;
    let lookup: HashMap<ElemSet, Elem> = round
        .iter()
        .enumerate()
        .map(|(k, i)| (i.members().clone(), k))
        .collect();
    let doubledown = n
        .elements()
        .map(|a| {
            lookup
                .get(wi.below(a))
                .copied()
                .ok_or_else(|| Error::NotRoundIdeal(format!("⇓{}", n.name(a))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Completion { lattice: Arc::new(lattice), ideals: round, lookup, doubledown })
}

/// `C(f)` as a table `C(dom) → C(cod)`: `I ↦ ↓∃_f(I)`.
pub fn c_map(
    cod: &FinDistLattice,
    dom_c: &Completion,
    cod_c: &Completion,
    f: &[Elem],
) -> Result<Vec<Elem>> {
    dom_c
        .ideals()
        .iter()
        .map(|i| {
            let image = cod.poset().set_of(i.members().ones().map(|a| f[a]));
            let target = if mutation::is_active(Mutation::RawImage) {
                image
            } else {
                cod.poset().downclose(&image)
            };
            cod_c
                .index_of(&target)
                .ok_or_else(|| Error::NotRoundIdeal(cod.poset().set_name(&target)))
        })
        .collect()
}

/// Applies `C` to a homomorphism between normal lattices.
pub fn c_on_hom(f: &LatticeHom) -> Result<LatticeHom> {
    let dom_c = complete_c(f.dom())?;
    let cod_c = complete_c(f.cod())?;
    let table = c_map(f.cod(), &dom_c, &cod_c, f.table())?;
    LatticeHom::new(dom_c.lattice.clone(), cod_c.lattice.clone(), table)
}

/// Complemented elements.
pub fn center(l: &FinDistLattice) -> ElemSet {
    l.complemented()
}

/// Every `b` is the join of `{ b' | b' ◁ b }` (compactness is automatic).
pub fn is_compact_regular(l: &FinDistLattice) -> bool {
    let wi = WellInside::new(l);
    l.elements().all(|b| l.join_all(wi.below(b).ones()) == b)
}

/// `⋁ I` for a round ideal of a compact regular lattice; inverse to `⇓`.
pub fn sup_inverse(n: &FinDistLattice, i: &Ideal) -> Result<Elem> {
    if !is_compact_regular(n) {
        return Err(Error::NotCompactRegular(format!("{} elements", n.len())));
    }
    if !is_round(&WellInside::new(n), i.members()) {
        return Err(Error::NotRoundIdeal(i.name(n)));
    }
    i.max(n).ok_or_else(|| Error::NotRoundIdeal(i.name(n)))
}

/// The map `I ↦ max(I)` from `C(N)` onto the center of `N`, checked to be a
/// bijective lattice homomorphism onto the center sublattice.
pub fn completion_onto_center(n: &FinDistLattice, c: &Completion) -> Result<Vec<Elem>> {
    let centre = center(n);
    let (centre_lattice, members) = n.sublattice(&centre)?;
    let table = c
        .ideals()
        .iter()
        .map(|i| {
            let m = i.max(n).ok_or_else(|| Error::IsoFailure(format!("{} has no max", i.name(n))))?;
            members
                .binary_search(&m)
                .map_err(|_| Error::IsoFailure(format!("max of {} is not central", i.name(n))))
        })
        .collect::<Result<Vec<_>>>()?;
    if !crate::order::is_order_isomorphism(c.lattice().poset(), centre_lattice.poset(), &table) {
        return Err(Error::IsoFailure("I ↦ max(I) is not bijective onto the center".into()));
    }
    crate::order::check_hom(c.lattice(), &centre_lattice, &table)?;
    Ok(table.into_iter().map(|k| members[k]).collect())
}

/// Checks the properties every completion must have: `⇓` is a homomorphism,
/// `C(N)` is normal and compact regular, and every element is complemented.
pub fn check_completion(n: &FinDistLattice, c: &Completion) -> Result<()> {
    crate::order::check_hom(n, c.lattice(), c.doubledown_table())?;
    let cl = c.lattice();
    if let NormalityCertificate::NotNormal { a, b } = is_normal(cl) {
        return Err(Error::NotNormal(cl.name(a).to_owned(), cl.name(b).to_owned()));
    }
    if !is_compact_regular(cl) {
        return Err(Error::NotCompactRegular("C(N)".into()));
    }
    if center(cl).count_ones(..) != cl.len() {
        return Err(Error::NotCompactRegular("C(N) has uncomplemented elements".into()));
    }
    Ok(())
}

/// A pair of distinct homs `f ⊑ g`, if one exists.
pub fn hom_order_violation(l: &FinDistLattice, m: &FinDistLattice) -> Option<(Vec<Elem>, Vec<Elem>)> {
    let homs = lattice_homs(l, m);
    for f in &homs {
        for g in &homs {
            if f != g && f.iter().zip(g).all(|(&x, &y)| m.leq(x, y)) {
                return Some((f.clone(), g.clone()));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::order::{enumerate_distributive_lattices, find_isomorphism};

    fn corpus() -> Vec<FinDistLattice> {
        (1..=4).flat_map(enumerate_distributive_lattices).collect()
    }

    /// Direct search over all separator pairs.
    fn normal_brute(l: &FinDistLattice) -> bool {
        l.elements().all(|a| {
            l.elements().all(|b| {
                l.join(a, b) != l.top()
                    || l.elements().any(|x| {
                        l.elements().any(|y| {
                            l.meet(x, y) == l.bottom()
                                && l.join(x, b) == l.top()
                                && l.join(a, y) == l.top()
                        })
                    })
            })
        })
    }

    #[test]
    fn well_inside_examples() {
        let c = fixtures::chain3();
        assert_eq!(well_inside(&c, 0, 0).unwrap(), Some(2));
        assert_eq!(well_inside(&c, 0, 1).unwrap(), Some(2));
        assert_eq!(well_inside(&c, 0, 2).unwrap(), Some(0));
        assert_eq!(well_inside(&c, 1, 1).unwrap(), None);
        let b4 = fixtures::bool4();
        for a in b4.elements() {
            let w = well_inside(&b4, a, a).unwrap().unwrap();
            assert_eq!(Some(w), b4.complement(a));
        }
        assert!(matches!(well_inside(&c, 7, 0), Err(Error::UnknownElement(_))));
    }

    #[test]
    fn table_agrees_with_search() {
        for l in corpus() {
            let wi = WellInside::new(&l);
            for a in l.elements() {
                for b in l.elements() {
                    let w = well_inside(&l, a, b).unwrap();
                    assert_eq!(wi.holds(a, b), w.is_some());
                    if let Some(c) = w {
                        assert_eq!(l.meet(a, c), l.bottom());
                        assert_eq!(l.join(b, c), l.top());
                    }
                }
            }
        }
    }

    #[test]
    fn normality_examples() {
        let c = fixtures::chain3();
        match is_normal(&c) {
            NormalityCertificate::Normal { witnesses } => assert_eq!(witnesses.len(), 5),
            other => panic!("{other:?}"),
        }
        let b4 = fixtures::bool4();
        let cert = is_normal(&b4);
        cert.check(&b4).unwrap();
        let (p, q) = (b4.index_of("p").unwrap(), b4.index_of("q").unwrap());
        let w = cert.witness(p, q).unwrap();
        assert_eq!((w.a_sep, w.b_sep), (b4.complement(q).unwrap(), b4.complement(p).unwrap()));

        let l = fixtures::lambda5();
        let cert = is_normal(&l);
        cert.check(&l).unwrap();
        let (xa, xb) = (l.index_of("{x,a}").unwrap(), l.index_of("{x,b}").unwrap());
        assert_eq!(cert, NormalityCertificate::NotNormal { a: xa, b: xb });
    }

    #[test]
    fn normality_matches_brute_force() {
        for l in corpus() {
            let cert = is_normal(&l);
            cert.check(&l).unwrap();
            assert_eq!(cert.is_normal(), normal_brute(&l));
        }
    }

    #[test]
    fn interpolation() {
        let c = fixtures::chain3();
        assert_eq!(interpolate(&c, 0, 2).unwrap(), 0);
        assert!(matches!(interpolate(&c, 1, 1), Err(Error::NotWellInside(..))));
        let b4 = fixtures::bool4();
        let p = b4.index_of("p").unwrap();
        assert_eq!(interpolate(&b4, p, p).unwrap(), p);
        assert!(matches!(interpolate(&fixtures::lambda5(), 0, 0), Err(Error::NotNormal(..))));
        for l in corpus().iter().filter(|l| is_normal(l).is_normal()) {
            let wi = WellInside::new(l);
            for a in l.elements() {
                for b in wi.above(a).ones() {
                    let c = interpolate(l, a, b).unwrap();
                    assert!(wi.holds(a, c) && wi.holds(c, b));
                }
            }
        }
    }

    #[test]
    fn witness_combination() {
        for l in corpus() {
            for a1 in l.elements() {
                for b1 in l.elements() {
                    let Some(w1) = well_inside(&l, a1, b1).unwrap() else { continue };
                    for a2 in l.elements() {
                        for b2 in l.elements() {
                            let Some(w2) = well_inside(&l, a2, b2).unwrap() else { continue };
                            let c = l.meet(w1, w2);
                            assert_eq!(l.meet(l.join(a1, a2), c), l.bottom());
                            assert_eq!(l.join(l.join(b1, b2), c), l.top());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn completion_of_chain3() {
        let c = fixtures::chain3();
        let comp = complete_c(&c).unwrap();
        assert_eq!(comp.lattice().len(), 2);
        let names: Vec<String> = comp.ideals().iter().map(|i| i.name(&c)).collect();
        assert_eq!(names, ["{0}", "{0,m,1}"]);
        assert_eq!(comp.doubledown_table(), &[0, 0, 1]);
        check_completion(&c, &comp).unwrap();
    }

    #[test]
    fn completion_of_boolean_is_itself() {
        let b4 = fixtures::bool4();
        let comp = complete_c(&b4).unwrap();
        let table = completion_onto_center(&b4, &comp).unwrap();
        assert!(crate::order::is_order_isomorphism(comp.lattice().poset(), b4.poset(), &table));
        for a in b4.elements() {
            let i = comp.ideal(comp.doubledown(a));
            assert_eq!(sup_inverse(&b4, i).unwrap(), a);
        }
        let p = b4.index_of("p").unwrap();
        assert_eq!(sup_inverse(&b4, &Ideal::principal(&b4, p)).unwrap(), p);
    }

    #[test]
    fn completion_is_idempotent_on_chain3() {
        let c1 = complete_c(&fixtures::chain3()).unwrap();
        let c2 = complete_c(c1.lattice()).unwrap();
        assert!(find_isomorphism(c1.lattice(), c2.lattice()).is_some());
    }

    #[test]
    fn completion_rejects_non_normal() {
        assert!(matches!(complete_c(&fixtures::lambda5()), Err(Error::NotNormal(..))));
    }

    #[test]
    fn c_on_hom_examples() {
        let c = Arc::new(fixtures::chain3());
        let id = c_on_hom(&LatticeHom::identity(c.clone())).unwrap();
        assert_eq!(id.table(), &[0, 1]);

        let f = fixtures::chain3_to_bool2();
        let cf = c_on_hom(&f).unwrap();
        // C(CHAIN3) = {↓0, ↓1} and C(BOOL2) = {↓0, ↓1}.
        assert_eq!(cf.table(), &[0, 1]);
        assert!(cf.pointwise_leq(&cf));
    }

    #[test]
    fn raw_image_breaks_c_on_hom() {
        let b2 = Arc::new(fixtures::bool2());
        let b4 = Arc::new(fixtures::bool4());
        let f = LatticeHom::new(b2, b4.clone(), vec![0, b4.top()]).unwrap();
        assert!(c_on_hom(&f).is_ok());
        let mutated = crate::mutation::with_mutation(Some(Mutation::RawImage), || c_on_hom(&f));
        assert!(mutated.is_err());
    }

    #[test]
    fn center_examples() {
        let c = fixtures::chain3();
        assert_eq!(center(&c), c.poset().set_of([0, 2]));
        let b4 = fixtures::bool4();
        assert_eq!(center(&b4).count_ones(..), 4);
        let l = fixtures::lambda5();
        assert_eq!(l.poset().set_name(&center(&l)), "{{},{x,a,b}}");
    }

    #[test]
    fn compact_regular_examples() {
        assert!(!is_compact_regular(&fixtures::chain3()));
        assert!(is_compact_regular(&fixtures::bool4()));
        assert!(!is_compact_regular(&fixtures::lambda5()));
        let c = fixtures::chain3();
        let r = sup_inverse(&c, &Ideal::principal(&c, 0));
        assert!(matches!(r, Err(Error::NotCompactRegular(_))));
    }

    #[test]
    fn compact_regular_is_boolean() {
        for l in corpus() {
            assert_eq!(is_compact_regular(&l), l.is_boolean());
        }
    }

    #[test]
    fn doubledown_is_a_hom_on_normal_corpus() {
        for l in corpus().iter().filter(|l| is_normal(l).is_normal()) {
            let comp = complete_c(l).unwrap();
            check_completion(l, &comp).unwrap();
            completion_onto_center(l, &comp).unwrap();
        }
    }
}
