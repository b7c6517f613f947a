use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::poset::{Elem, ElemSet, FinPoset};

/// A finite distributive lattice with precomputed meet and join tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FinDistLattice {
    poset: FinPoset,
    bottom: Elem,
    top: Elem,
    meet: Vec<Elem>,
    join: Vec<Elem>,
}

impl fmt::Debug for FinDistLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinDistLattice")
            .field("elements", &self.poset.names())
            .field("bottom", &self.name(self.bottom))
            .field("top", &self.name(self.top))
            .finish()
    }
}

impl FinDistLattice {
    /// Computes meets and joins by infimum/supremum search and checks distributivity.
    pub fn from_poset(poset: FinPoset) -> Result<Self> {
        let (meet, join) = inf_sup_tables(&poset)?;
        let lattice = Self::assemble(poset, meet, join);
        lattice.check_distributive()?;
        Ok(lattice)
    }

    /// Accepts externally computed tables after checking them against the order.
    pub fn from_tables(poset: FinPoset, meet: Vec<Elem>, join: Vec<Elem>) -> Result<Self> {
        let (inf, sup) = inf_sup_tables(&poset)?;
        let n = poset.len();
        for a in 0..n {
            for b in 0..n {
                if meet[a * n + b] != inf[a * n + b] {
                    return Err(Error::NotALattice(
                        poset.name(a).to_owned(),
                        poset.name(b).to_owned(),
                        "meet matching the supplied table",
                    ));
                }
                if join[a * n + b] != sup[a * n + b] {
                    return Err(Error::NotALattice(
                        poset.name(a).to_owned(),
                        poset.name(b).to_owned(),
                        "join matching the supplied table",
                    ));
                }
            }
        }
        let lattice = Self::assemble(poset, meet, join);
        lattice.check_distributive()?;
        Ok(lattice)
    }

    /// Trusts the caller's tables; used for sublattices of products.
    pub(crate) fn from_tables_unchecked(poset: FinPoset, meet: Vec<Elem>, join: Vec<Elem>) -> Self {
        Self::assemble(poset, meet, join)
    }

    fn assemble(poset: FinPoset, meet: Vec<Elem>, join: Vec<Elem>) -> Self {
        let n = poset.len();
        let bottom = (0..n).fold(0, |acc, a| meet[acc * n + a]);
        let top = (0..n).fold(0, |acc, a| join[acc * n + a]);
        FinDistLattice { poset, bottom, top, meet, join }
    }

    /// Recomputes everything from the order; the idempotent validation pass.
    pub fn validate(&self) -> Result<()> {
        let (inf, sup) = inf_sup_tables(&self.poset)?;
        if inf != self.meet || sup != self.join {
            return Err(Error::NotALattice(
                "tables".into(),
                "order".into(),
                "agreement between tables and order",
            ));
        }
        self.check_distributive()
    }

    fn check_distributive(&self) -> Result<()> {
        for a in self.elements() {
            for b in self.elements() {
                for c in b..self.len() {
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)) {
                        return Err(Error::NotDistributive(
                            self.name(a).to_owned(),
                            self.name(b).to_owned(),
                            self.name(c).to_owned(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        self.poset.elements()
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.len() + b]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.len() + b]
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.poset.leq(a, b)
    }

    pub fn name(&self, a: Elem) -> &str {
        self.poset.name(a)
    }

    pub fn index_of(&self, name: &str) -> Result<Elem> {
        self.poset.index_of(name)
    }

    pub fn join_all(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems.into_iter().fold(self.bottom, |acc, a| self.join(acc, a))
    }

    pub fn meet_all(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems.into_iter().fold(self.top, |acc, a| self.meet(acc, a))
    }

    /// Non-bottom elements that are not the join of the elements strictly below them.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&j| {
                j != self.bottom
                    && self.join_all(self.poset.down_set(j).ones().filter(|&b| b != j)) != j
            })
            .collect()
    }

    /// Elements with a complement.
    pub fn complemented(&self) -> ElemSet {
        let mut s = self.poset.empty_set();
        for a in self.elements() {
            if self.complement(a).is_some() {
                s.insert(a);
            }
        }
        s
    }

    /// The complement of `a`, unique in a distributive lattice.
    pub fn complement(&self, a: Elem) -> Option<Elem> {
        self.elements()
            .find(|&c| self.meet(a, c) == self.bottom && self.join(a, c) == self.top)
    }

    pub fn is_boolean(&self) -> bool {
        self.complemented().count_ones(..) == self.len()
    }

    /// The sublattice on `s`, which must contain bottom, top and be closed under meet and join.
    pub fn sublattice(&self, s: &ElemSet) -> Result<(FinDistLattice, Vec<Elem>)> {
        if !s.contains(self.bottom) || !s.contains(self.top) {
            return Err(Error::NotALattice(
                self.poset.set_name(s),
                "bounds".into(),
                "bottom and top inside the subset",
            ));
        }
        for a in s.ones() {
            for b in s.ones() {
                if !s.contains(self.meet(a, b)) || !s.contains(self.join(a, b)) {
                    return Err(Error::NotALattice(
                        self.name(a).to_owned(),
                        self.name(b).to_owned(),
                        "meet and join inside the subset",
                    ));
                }
            }
        }
        let (sub, members) = self.poset.restrict(s);
        let pos = |x: Elem| members.binary_search(&x).unwrap();
        let k = members.len();
        let mut meet = vec![0; k * k];
        let mut join = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                meet[i * k + j] = pos(self.meet(members[i], members[j]));
                join[i * k + j] = pos(self.join(members[i], members[j]));
            }
        }
        Ok((FinDistLattice::from_tables(sub, meet, join)?, members))
    }
}

/// Builds a lattice from a poset; fails with the witness pair or triple.
pub fn build_lattice(poset: FinPoset) -> Result<FinDistLattice> {
    if poset.is_empty() {
        return Err(Error::EmptyLattice);
    }
    FinDistLattice::from_poset(poset)
}

fn inf_sup_tables(poset: &FinPoset) -> Result<(Vec<Elem>, Vec<Elem>)> {
    let n = poset.len();
    if n == 0 {
        return Err(Error::EmptyLattice);
    }
    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    for a in 0..n {
        for b in a..n {
            let mut lower = poset.down_set(a).clone();
            lower.intersect_with(poset.down_set(b));
            let inf = poset.greatest_in(&lower).ok_or_else(|| {
                Error::NotALattice(poset.name(a).to_owned(), poset.name(b).to_owned(), "meet")
            })?;
            let mut upper = poset.up_set(a).clone();
            upper.intersect_with(poset.up_set(b));
            let sup = poset.least_in(&upper).ok_or_else(|| {
                Error::NotALattice(poset.name(a).to_owned(), poset.name(b).to_owned(), "join")
            })?;
            meet[a * n + b] = inf;
            meet[b * n + a] = inf;
            join[a * n + b] = sup;
            join[b * n + a] = sup;
        }
    }
    Ok((meet, join))
}

/// Checks that `map` preserves bottom, top, binary meets and binary joins.
pub fn check_hom(dom: &FinDistLattice, cod: &FinDistLattice, map: &[Elem]) -> Result<()> {
    if map.len() != dom.len() || map.iter().any(|&y| y >= cod.len()) {
        return Err(Error::DomainMismatch(format!(
            "map of length {} does not fit {} -> {} elements",
            map.len(),
            dom.len(),
            cod.len()
        )));
    }
    if map[dom.bottom()] != cod.bottom() {
        return Err(Error::NotAHom("bottom not preserved".into()));
    }
    if map[dom.top()] != cod.top() {
        return Err(Error::NotAHom("top not preserved".into()));
    }
    for a in dom.elements() {
        for b in a + 1..dom.len() {
            if map[dom.meet(a, b)] != cod.meet(map[a], map[b]) {
                return Err(Error::NotAHom(format!(
                    "meet of `{}` and `{}` not preserved",
                    dom.name(a),
                    dom.name(b)
                )));
            }
            if map[dom.join(a, b)] != cod.join(map[a], map[b]) {
                return Err(Error::NotAHom(format!(
                    "join of `{}` and `{}` not preserved",
                    dom.name(a),
                    dom.name(b)
                )));
            }
        }
    }
    Ok(())
}

/// A bounded-lattice homomorphism between two finite distributive lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeHom {
    dom: Arc<FinDistLattice>,
    cod: Arc<FinDistLattice>,
    map: Vec<Elem>,
}

impl LatticeHom {
    pub fn new(dom: Arc<FinDistLattice>, cod: Arc<FinDistLattice>, map: Vec<Elem>) -> Result<Self> {
        check_hom(&dom, &cod, &map)?;
        Ok(LatticeHom { dom, cod, map })
    }

    /// Looks up images by element name.
    pub fn from_names(
        dom: Arc<FinDistLattice>,
        cod: Arc<FinDistLattice>,
        pairs: &[(&str, &str)],
    ) -> Result<Self> {
        let mut map = vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            map[dom.index_of(x)?] = cod.index_of(y)?;
        }
        if let Some(a) = map.iter().position(|&y| y == usize::MAX) {
            return Err(Error::DomainMismatch(format!("no image for `{}`", dom.name(a))));
        }
        Self::new(dom, cod, map)
    }

    pub fn identity(l: Arc<FinDistLattice>) -> Self {
        let map = l.elements().collect();
        LatticeHom { dom: l.clone(), cod: l, map }
    }

    pub fn dom(&self) -> &Arc<FinDistLattice> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinDistLattice> {
        &self.cod
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a]
    }

    pub fn table(&self) -> &[Elem] {
        &self.map
    }

    /// `other ∘ self`
    pub fn then(&self, other: &LatticeHom) -> Result<LatticeHom> {
        if *self.cod != *other.dom {
            return Err(Error::DomainMismatch("composite of non-composable homs".into()));
        }
        Ok(LatticeHom {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            map: self.map.iter().map(|&a| other.map[a]).collect(),
        })
    }

    /// Pointwise order on parallel homs.
    pub fn pointwise_leq(&self, other: &LatticeHom) -> bool {
        self.map.iter().zip(&other.map).all(|(&a, &b)| self.cod.leq(a, b))
    }

    /// Direct image of a subset.
    pub fn image(&self, s: &ElemSet) -> ElemSet {
        self.cod.poset().set_of(s.ones().map(|a| self.map[a]))
    }
}

/// Every bounded-lattice homomorphism `dom -> cod`.
///
/// Images are chosen only for join-irreducibles of `dom`, in a linear
/// extension, with monotonicity and pairwise meet constraints pruning the
/// search; everything else is forced by joins.
pub fn lattice_homs(dom: &FinDistLattice, cod: &FinDistLattice) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    for_each_lattice_hom(dom, cod, |m| {
        out.push(m.to_vec());
        true
    });
    out
}

/// Calls `visit` on each homomorphism until it returns `false`.
pub fn for_each_lattice_hom(
    dom: &FinDistLattice,
    cod: &FinDistLattice,
    mut visit: impl FnMut(&[Elem]) -> bool,
) {
    let order: Vec<Elem> = {
        let jis = dom.join_irreducibles();
        dom.poset()
            .linear_extension()
            .into_iter()
            .filter(|j| jis.contains(j))
            .collect()
    };
    let mut images = vec![usize::MAX; dom.len()];
    let mut keep_going = true;
    hom_rec(dom, cod, &order, 0, &mut images, &mut visit, &mut keep_going);
}

fn extend_by_joins(dom: &FinDistLattice, cod: &FinDistLattice, order: &[Elem], images: &[Elem], x: Elem) -> Elem {
    cod.join_all(order.iter().filter(|&&j| dom.leq(j, x)).map(|&j| images[j]))
}

fn hom_rec(
    dom: &FinDistLattice,
    cod: &FinDistLattice,
    order: &[Elem],
    i: usize,
    images: &mut Vec<Elem>,
    visit: &mut dyn FnMut(&[Elem]) -> bool,
    keep_going: &mut bool,
) {
    if !*keep_going {
        return;
    }
    if i == order.len() {
        let map: Vec<Elem> = dom
            .elements()
            .map(|x| extend_by_joins(dom, cod, order, images, x))
            .collect();
        if check_hom(dom, cod, &map).is_ok() {
            *keep_going = visit(&map);
        }
        return;
    }
    let j = order[i];
    let assigned = &order[..i];
    let floor = cod.join_all(assigned.iter().filter(|&&k| dom.leq(k, j)).map(|&k| images[k]));
    for y in cod.elements() {
        if !cod.leq(floor, y) {
            continue;
        }
        let meets_ok = assigned.iter().all(|&k| {
            let m = dom.meet(j, k);
            let fm = cod.join_all(assigned.iter().filter(|&&l| dom.leq(l, m)).map(|&l| images[l]));
            cod.meet(y, images[k]) == fm
        });
        if meets_ok {
            images[j] = y;
            hom_rec(dom, cod, order, i + 1, images, visit, keep_going);
            images[j] = usize::MAX;
        }
    }
}

/// An order isomorphism `l -> m` (hence a lattice isomorphism), if any.
pub fn find_isomorphism(l: &FinDistLattice, m: &FinDistLattice) -> Option<Vec<Elem>> {
    find_order_isomorphism(l.poset(), m.poset())
}

pub fn find_order_isomorphism(p: &FinPoset, q: &FinPoset) -> Option<Vec<Elem>> {
    if p.len() != q.len() {
        return None;
    }
    let signature = |x: &FinPoset, a: Elem| (x.down_set(a).count_ones(..), x.up_set(a).count_ones(..));
    let mut sig_p: Vec<_> = p.elements().map(|a| signature(p, a)).collect();
    let mut sig_q: Vec<_> = q.elements().map(|a| signature(q, a)).collect();
    let order = p.linear_extension();
    let (sp, sq) = (sig_p.clone(), sig_q.clone());
    sig_p.sort();
    sig_q.sort();
    if sig_p != sig_q {
        return None;
    }
    let mut map = vec![usize::MAX; p.len()];
    let mut used = q.empty_set();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        p: &FinPoset,
        q: &FinPoset,
        order: &[Elem],
        i: usize,
        sp: &[(usize, usize)],
        sq: &[(usize, usize)],
        map: &mut Vec<Elem>,
        used: &mut ElemSet,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let a = order[i];
        for b in q.elements() {
            if used.contains(b) || sp[a] != sq[b] {
                continue;
            }
            let consistent = order[..i].iter().all(|&c| {
                p.leq(c, a) == q.leq(map[c], b) && p.leq(a, c) == q.leq(b, map[c])
            });
            if consistent {
                map[a] = b;
                used.insert(b);
                if rec(p, q, order, i + 1, sp, sq, map, used) {
                    return true;
                }
                used.set(b, false);
            }
        }
        map[a] = usize::MAX;
        false
    }
    rec(p, q, &order, 0, &sp, &sq, &mut map, &mut used).then_some(map)
}

/// Checks that `map` is a bijection that preserves and reflects the order.
pub fn is_order_isomorphism(p: &FinPoset, q: &FinPoset, map: &[Elem]) -> bool {
    if p.len() != q.len() || map.len() != p.len() {
        return false;
    }
    let mut hit = q.empty_set();
    for &b in map {
        if b >= q.len() || hit.put(b) {
            return false;
        }
    }
    p.elements()
        .all(|a| p.elements().all(|b| p.leq(a, b) == q.leq(map[a], map[b])))
}

/// Lattice of down-sets of `p` ordered by inclusion (Birkhoff).
pub fn downset_lattice(p: &FinPoset) -> FinDistLattice {
    let downsets = p.downsets();
    let names = downsets.iter().map(|s| p.set_name(s)).collect();
    let poset = FinPoset::from_leq_unchecked(names, |a, b| downsets[a].is_subset(&downsets[b]));
    FinDistLattice::from_poset(poset).expect("down-sets of a poset form a distributive lattice")
}

/// Pairwise non-isomorphic distributive lattices with exactly `k`
/// join-irreducibles, as down-set lattices of the posets on `k` points.
pub fn enumerate_distributive_lattices(k: usize) -> impl Iterator<Item = FinDistLattice> {
    super::poset::posets_up_to_iso(k)
        .into_iter()
        .map(|p| downset_lattice(&p))
}

/// Every distributive lattice with at most `n` elements, up to isomorphism.
pub fn distributive_lattices_up_to(n: usize) -> Vec<FinDistLattice> {
    super::poset::posets_with_downsets_at_most(n).iter().map(downset_lattice).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn small_distributive_lattice_counts() {
        // number of distributive lattices on n elements, n = 1..=8
        let known = [1, 1, 1, 2, 3, 5, 8, 15];
        let all = distributive_lattices_up_to(8);
        for (n, &want) in known.iter().enumerate() {
            assert_eq!(all.iter().filter(|l| l.len() == n + 1).count(), want, "size {}", n + 1);
        }
        assert_eq!(all.len(), known.iter().sum::<usize>());
        for k in 0..=4 {
            let by_ji: Vec<_> = all.iter().filter(|l| l.join_irreducibles().len() == k).collect();
            for l in enumerate_distributive_lattices(k).filter(|l| l.len() <= 8) {
                assert_eq!(by_ji.iter().filter(|m| find_isomorphism(&l, m).is_some()).count(), 1);
            }
        }
    }

    #[test]
    fn chain_lattice_ops() {
        let l = fixtures::chain3();
        let (z, m, o) = (0, 1, 2);
        assert_eq!(l.meet(m, o), m);
        assert_eq!(l.join(m, z), m);
        assert_eq!((l.bottom(), l.top()), (z, o));
    }

    #[test]
    fn lambda5_is_distributive() {
        let l = fixtures::lambda5();
        assert_eq!(l.len(), 5);
        l.validate().unwrap();
        let names: Vec<&str> = l.elements().map(|a| l.name(a)).collect();
        assert_eq!(names, ["{}", "{x}", "{x,a}", "{x,b}", "{x,a,b}"]);
    }

    #[test]
    fn diamond_is_not_distributive() {
        let err = build_lattice(fixtures::m3_poset()).unwrap_err();
        assert!(matches!(err, Error::NotDistributive(..)), "{err:?}");
    }

    #[test]
    fn missing_join_reported() {
        let p = FinPoset::build::<&str>(&["a", "b"], &[]).unwrap();
        assert!(matches!(build_lattice(p), Err(Error::NotALattice(_, _, "meet"))));
        let empty = FinPoset::build::<&str>(&[], &[]).unwrap();
        assert_eq!(build_lattice(empty), Err(Error::EmptyLattice));
    }

    #[test]
    fn corpus_shapes() {
        let k1: Vec<_> = enumerate_distributive_lattices(1).collect();
        assert_eq!(k1.len(), 1);
        assert_eq!(k1[0].len(), 2);

        let k2: Vec<_> = enumerate_distributive_lattices(2).collect();
        let mut sizes: Vec<usize> = k2.iter().map(|l| l.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 4]);
        assert!(k2.iter().any(|l| find_isomorphism(l, &fixtures::chain3()).is_some()));
        assert!(k2.iter().any(|l| find_isomorphism(l, &fixtures::bool4()).is_some()));

        let k3: Vec<_> = enumerate_distributive_lattices(3).collect();
        assert!(k3.iter().any(|l| find_isomorphism(l, &fixtures::lambda5()).is_some()));
    }

    #[test]
    fn corpus_is_pairwise_non_isomorphic_and_valid() {
        for k in 1..=4 {
            let ls: Vec<_> = enumerate_distributive_lattices(k).collect();
            for (i, a) in ls.iter().enumerate() {
                a.validate().unwrap();
                assert_eq!(a.join_irreducibles().len(), k);
                for b in &ls[i + 1..] {
                    assert!(find_isomorphism(a, b).is_none());
                }
            }
        }
    }

    #[test]
    fn hom_enumeration_matches_brute_force() {
        let ls: Vec<_> = (1..=3).flat_map(enumerate_distributive_lattices).collect();
        for a in &ls {
            for b in &ls {
                let mut fast = lattice_homs(a, b);
                fast.sort();
                let mut brute = Vec::new();
                let n = a.len();
                let total = b.len().pow(n as u32);
                for code in 0..total {
                    let mut c = code;
                    let map: Vec<Elem> = (0..n)
                        .map(|_| {
                            let y = c % b.len();
                            c /= b.len();
                            y
                        })
                        .collect();
                    if check_hom(a, b, &map).is_ok() {
                        brute.push(map);
                    }
                }
                brute.sort();
                assert_eq!(fast, brute);
            }
        }
    }

    #[test]
    fn boolean_homs_count_prime_filters() {
        // Homs BOOL4 -> BOOL2 correspond to the two atoms.
        assert_eq!(lattice_homs(&fixtures::bool4(), &fixtures::bool2()).len(), 2);
        assert_eq!(lattice_homs(&fixtures::bool2(), &fixtures::bool2()).len(), 1);
    }

    #[test]
    fn sublattice_of_center() {
        let l = fixtures::chain3();
        let c = l.complemented();
        let (sub, members) = l.sublattice(&c).unwrap();
        assert_eq!(members, vec![0, 2]);
        assert_eq!(sub.len(), 2);
    }
}
