use crate::error::{Error, Result};
use crate::mutation::{self, Mutation};

use super::lattice::{FinDistLattice, LatticeHom};
use super::poset::{Elem, ElemSet, FinPoset};

/// Down-closure of a subset of a lattice's carrier.
pub fn downclose(l: &FinDistLattice, s: &ElemSet) -> Result<ElemSet> {
    check_subset(l.poset(), s)?;
    Ok(l.poset().downclose(s))
}

fn check_subset(p: &FinPoset, s: &ElemSet) -> Result<()> {
    match s.ones().find(|&a| a >= p.len()) {
        Some(a) => Err(Error::UnknownElement(format!("#{a}"))),
        None => Ok(()),
    }
}

/// Down-closed, contains bottom, closed under binary join.
pub fn is_ideal(l: &FinDistLattice, s: &ElemSet) -> bool {
    let has_bottom = mutation::is_active(Mutation::DropIdealBottom) || s.contains(l.bottom());
    has_bottom
        && l.poset().is_down_closed(s)
        && s.ones().all(|a| s.ones().all(|b| s.contains(l.join(a, b))))
}

/// An ideal of a finite distributive lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    members: ElemSet,
}

impl Ideal {
    pub fn new(l: &FinDistLattice, members: ElemSet) -> Result<Self> {
        check_subset(l.poset(), &members)?;
        let mut members = members;
        members.grow(l.len());
        if !is_ideal(l, &members) {
            return Err(Error::NotAnIdeal(l.poset().set_name(&members)));
        }
        Ok(Ideal { members })
    }

    pub fn principal(l: &FinDistLattice, a: Elem) -> Self {
        Ideal { members: l.poset().down_set(a).clone() }
    }

    pub fn members(&self) -> &ElemSet {
        &self.members
    }

    pub fn contains(&self, a: Elem) -> bool {
        self.members.contains(a)
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Greatest member; every ideal of a finite lattice is principal.
    pub fn max(&self, l: &FinDistLattice) -> Option<Elem> {
        l.poset().greatest_in(&self.members)
    }

    pub fn name(&self, l: &FinDistLattice) -> String {
        l.poset().set_name(&self.members)
    }
}

/// Every ideal of `l`, smallest first.
///
/// A non-empty ideal of a finite lattice contains the join of its members,
/// so it is the principal ideal of that join; the only other subset that can
/// pass [`is_ideal`] is the empty set. The candidates are therefore the empty
/// set and the principal ideals, each still filtered through [`is_ideal`].
pub fn ideals(l: &FinDistLattice) -> Vec<Ideal> {
    let mut out: Vec<Ideal> = std::iter::once(l.poset().empty_set())
        .chain(l.elements().map(|a| l.poset().down_set(a).clone()))
        .filter(|s| is_ideal(l, s))
        .map(|members| Ideal { members })
        .collect();
    out.sort_by(|a, b| {
        a.members
            .count_ones(..)
            .cmp(&b.members.count_ones(..))
            .then_with(|| a.members.cmp(&b.members))
    });
    out.dedup();
    out
}

/// `↓{ a ∨ b | a ∈ I, b ∈ J }`
pub fn ideal_join(l: &FinDistLattice, i: &ElemSet, j: &ElemSet) -> ElemSet {
    let mut joins = l.poset().empty_set();
    for a in i.ones() {
        for b in j.ones() {
            joins.insert(l.join(a, b));
        }
    }
    l.poset().downclose(&joins)
}

/// The lattice of ideals of `l` under inclusion, together with the ideals themselves.
#[derive(Clone, Debug)]
pub struct IdealLattice {
    pub lattice: FinDistLattice,
    pub ideals: Vec<Ideal>,
}

/// Builds `idl(l)`: meet is intersection and join is [`ideal_join`]; both
/// tables are checked against the inclusion order.
pub fn ideal_lattice(l: &FinDistLattice) -> Result<IdealLattice> {
    let ideals = ideals(l);
    let lattice = lattice_of_ideals(l, &ideals)?;
    Ok(IdealLattice { lattice, ideals })
}

pub(crate) fn lattice_of_ideals(l: &FinDistLattice, ideals: &[Ideal]) -> Result<FinDistLattice> {
    let names = ideals.iter().map(|i| i.name(l)).collect();
    let poset = FinPoset::from_leq_unchecked(names, |a, b| ideals[a].is_subset(&ideals[b]));
    let k = ideals.len();
    let pos = |s: &ElemSet| ideals.iter().position(|i| i.members == *s);
    let mut meet = vec![0; k * k];
    let mut join = vec![0; k * k];
    for a in 0..k {
        for b in 0..k {
            let mut m = ideals[a].members.clone();
            m.intersect_with(&ideals[b].members);
            let j = ideal_join(l, &ideals[a].members, &ideals[b].members);
            meet[a * k + b] = pos(&m).ok_or_else(|| {
                Error::NotALattice(ideals[a].name(l), ideals[b].name(l), "meet among the ideals")
            })?;
            join[a * k + b] = pos(&j).ok_or_else(|| {
                Error::NotALattice(ideals[a].name(l), ideals[b].name(l), "join among the ideals")
            })?;
        }
    }
    FinDistLattice::from_tables(poset, meet, join)
}

/// `↓∃_f(I)`: the ideal generated by the image of `I`.
pub fn direct_image_ideal(f: &LatticeHom, i: &Ideal) -> Result<Ideal> {
    if i.members.len() != f.dom().len() {
        return Err(Error::DomainMismatch(format!(
            "ideal over {} elements, hom domain has {}",
            i.members.len(),
            f.dom().len()
        )));
    }
    let image = f.image(&i.members);
    Ideal::new(f.cod(), f.cod().poset().downclose(&image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mutation::with_mutation;
    use std::sync::Arc;

    fn subset_scan(l: &FinDistLattice) -> Vec<ElemSet> {
        let n = l.len();
        let mut out: Vec<ElemSet> = (0u32..1 << n)
            .map(|mask| l.poset().set_of((0..n).filter(|&i| mask >> i & 1 == 1)))
            .filter(|s| is_ideal(l, s))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn downclose_examples() {
        let c = fixtures::chain3();
        let m = c.poset().set_of([1]);
        assert_eq!(downclose(&c, &m).unwrap(), c.poset().set_of([0, 1]));
        assert_eq!(downclose(&c, &c.poset().empty_set()).unwrap(), c.poset().empty_set());

        let l = fixtures::lambda5();
        let xa = l.index_of("{x,a}").unwrap();
        let got = downclose(&l, &l.poset().set_of([xa])).unwrap();
        let brute = l.poset().set_of(l.elements().filter(|&b| l.leq(b, xa)));
        assert_eq!(got, brute);
        assert_eq!(l.poset().set_name(&got), "{{},{x},{x,a}}");
    }

    #[test]
    fn ideal_examples() {
        let c = fixtures::chain3();
        assert!(is_ideal(&c, &c.poset().set_of([0, 1])));
        assert!(!is_ideal(&c, &c.poset().set_of([0, 2])));
        assert!(!is_ideal(&c, &c.poset().empty_set()));

        let b2 = fixtures::bool2();
        let idl = ideal_lattice(&b2).unwrap();
        assert_eq!(idl.lattice.len(), 2);
        assert_eq!(idl.ideals[0], Ideal::principal(&b2, 0));
        assert_eq!(idl.ideals[1], Ideal::principal(&b2, 1));
    }

    #[test]
    fn ideal_enumeration_matches_subset_scan() {
        for l in (1..=4).flat_map(crate::order::enumerate_distributive_lattices) {
            let mut fast: Vec<ElemSet> = ideals(&l).into_iter().map(|i| i.members).collect();
            fast.sort();
            assert_eq!(fast, subset_scan(&l));
            ideal_lattice(&l).unwrap().lattice.validate().unwrap();
        }
    }

    #[test]
    fn dropping_bottom_admits_empty_ideal() {
        let c = fixtures::chain3();
        with_mutation(Some(Mutation::DropIdealBottom), || {
            assert!(is_ideal(&c, &c.poset().empty_set()));
            assert_eq!(ideals(&c).len(), 4);
            assert_eq!(subset_scan(&c).len(), 4);
        });
    }

    #[test]
    fn direct_image_examples() {
        let c = Arc::new(fixtures::chain3());
        let id = LatticeHom::identity(c.clone());
        let down_m = Ideal::principal(&c, 1);
        assert_eq!(direct_image_ideal(&id, &down_m).unwrap(), down_m);

        let f = fixtures::chain3_to_bool2();
        let b2 = f.cod().clone();
        assert_eq!(direct_image_ideal(&f, &down_m).unwrap(), Ideal::principal(&b2, 1));

        let wrong = Ideal::principal(&b2, 1);
        assert!(matches!(direct_image_ideal(&f, &wrong), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn constant_bottom_is_rejected_as_hom() {
        let c = Arc::new(fixtures::chain3());
        let b2 = Arc::new(fixtures::bool2());
        assert!(LatticeHom::new(c, b2, vec![0, 0, 0]).is_err());
    }
}
