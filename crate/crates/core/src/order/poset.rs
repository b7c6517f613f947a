use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Index of an element inside one carrier.
pub type Elem = usize;

/// A subset of a carrier, stored as a bitset sized to the carrier.
pub type ElemSet = FixedBitSet;

/// A finite partially ordered set with named elements.
///
/// Element identity is the index; names are only used for display and
/// serialization. Both the up-sets and down-sets of every element are kept.
#[derive(Clone, PartialEq, Eq)]
pub struct FinPoset {
    names: Vec<String>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

impl fmt::Debug for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<_> = self
            .strict_pairs()
            .map(|(a, b)| format!("{}<{}", self.names[a], self.names[b]))
            .collect();
        f.debug_struct("FinPoset")
            .field("elements", &self.names)
            .field("lt", &pairs)
            .finish()
    }
}

impl FinPoset {
    /// Builds the reflexive-transitive closure of `generating_pairs`.
    pub fn build<S: AsRef<str>>(elements: &[S], generating_pairs: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateElement(n.clone()));
            }
        }
        let lookup = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::UnknownElement(s.to_owned()))
        };
        let n = names.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter_mut().enumerate() {
            row.insert(a);
        }
        for (lo, hi) in generating_pairs {
            let (lo, hi) = (lookup(lo.as_ref())?, lookup(hi.as_ref())?);
            up[lo].insert(hi);
        }
        // Warshall on rows: if a <= k then everything above k is above a.
        for k in 0..n {
            let above_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&above_k);
                }
            }
        }
        for a in 0..n {
            for b in up[a].ones() {
                if a != b && up[b].contains(a) {
                    return Err(Error::Cycle(names[a].clone(), names[b].clone()));
                }
            }
        }
        Ok(Self::from_up_sets(names, up))
    }

    /// Builds a poset from an explicit order predicate, checking the axioms.
    pub fn from_leq(names: Vec<String>, leq: impl Fn(Elem, Elem) -> bool) -> Result<Self> {
        let n = names.len();
        let poset = Self::from_leq_unchecked(names, leq);
        for a in 0..n {
            if !poset.leq(a, a) {
                return Err(Error::NotAPartialOrder(format!(
                    "`{}` is not below itself",
                    poset.names[a]
                )));
            }
            for b in poset.up[a].ones() {
                if a != b && poset.leq(b, a) {
                    return Err(Error::Cycle(poset.names[a].clone(), poset.names[b].clone()));
                }
                if !poset.up[b].is_subset(&poset.up[a]) {
                    return Err(Error::NotAPartialOrder(format!(
                        "not transitive through `{}` <= `{}`",
                        poset.names[a], poset.names[b]
                    )));
                }
            }
        }
        Ok(poset)
    }

    pub(crate) fn from_leq_unchecked(names: Vec<String>, leq: impl Fn(Elem, Elem) -> bool) -> Self {
        let n = names.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter_mut().enumerate() {
            for b in 0..n {
                if leq(a, b) {
                    row.insert(b);
                }
            }
        }
        Self::from_up_sets(names, up)
    }

    fn from_up_sets(names: Vec<String>, up: Vec<FixedBitSet>) -> Self {
        let n = names.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter().enumerate() {
            for b in row.ones() {
                down[b].insert(a);
            }
        }
        FinPoset { names, up, down }
    }

    /// Discrete order on the given names.
    pub fn discrete(names: Vec<String>) -> Self {
        Self::from_leq_unchecked(names, |a, b| a == b)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<Elem> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownElement(name.to_owned()))
    }

    /// `{ b | a <= b }`
    pub fn up_set(&self, a: Elem) -> &ElemSet {
        &self.up[a]
    }

    /// `{ b | b <= a }`
    pub fn down_set(&self, a: Elem) -> &ElemSet {
        &self.down[a]
    }

    pub fn empty_set(&self) -> ElemSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> ElemSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_of(&self, elems: impl IntoIterator<Item = Elem>) -> ElemSet {
        let mut s = self.empty_set();
        s.extend(elems);
        s
    }

    /// Smallest down-closed superset of `s`.
    pub fn downclose(&self, s: &ElemSet) -> ElemSet {
        let mut out = self.empty_set();
        for a in s.ones() {
            out.union_with(&self.down[a]);
        }
        out
    }

    pub fn is_down_closed(&self, s: &ElemSet) -> bool {
        s.ones().all(|a| self.down[a].is_subset(s))
    }

    /// Pairs `(a, b)` with `a < b`.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        self.elements()
            .flat_map(move |a| self.up[a].ones().filter(move |&b| b != a).map(move |b| (a, b)))
    }

    /// Covering pairs `(a, b)`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        self.strict_pairs()
            .filter(|&(a, b)| {
                !self
                    .elements()
                    .any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b))
            })
            .collect()
    }

    /// Elements ordered so that `a < b` implies `a` comes first.
    pub fn linear_extension(&self) -> Vec<Elem> {
        let mut order: Vec<Elem> = self.elements().collect();
        order.sort_by_key(|&a| (self.down[a].count_ones(..), a));
        order
    }

    /// Greatest element of `s`, when `s` has one.
    pub fn greatest_in(&self, s: &ElemSet) -> Option<Elem> {
        s.ones().find(|&g| s.is_subset(&self.down[g]))
    }

    /// Least element of `s`, when `s` has one.
    pub fn least_in(&self, s: &ElemSet) -> Option<Elem> {
        s.ones().find(|&g| s.is_subset(&self.up[g]))
    }

    /// All down-closed subsets, in order of increasing size and then bit pattern.
    pub fn downsets(&self) -> Vec<ElemSet> {
        let order = self.linear_extension();
        let mut out = Vec::new();
        let mut current = self.empty_set();
        self.downsets_rec(&order, 0, &mut current, &mut out);
        out.sort_by(|a, b| a.count_ones(..).cmp(&b.count_ones(..)).then_with(|| a.cmp(b)));
        out
    }

    fn downsets_rec(&self, order: &[Elem], i: usize, current: &mut ElemSet, out: &mut Vec<ElemSet>) {
        if i == order.len() {
            out.push(current.clone());
            return;
        }
        let a = order[i];
        self.downsets_rec(order, i + 1, current, out);
        let mut strictly_below = self.down[a].clone();
        strictly_below.set(a, false);
        if strictly_below.is_subset(current) {
            current.insert(a);
            self.downsets_rec(order, i + 1, current, out);
            current.set(a, false);
        }
    }

    /// Induced sub-poset on `s`, with the embedding into `self`.
    pub fn restrict(&self, s: &ElemSet) -> (FinPoset, Vec<Elem>) {
        let members: Vec<Elem> = s.ones().collect();
        let names = members.iter().map(|&a| self.names[a].clone()).collect();
        let sub = FinPoset::from_leq_unchecked(names, |i, j| self.leq(members[i], members[j]));
        (sub, members)
    }

    /// Renders a subset as `{a,b,...}` using element names in index order.
    pub fn set_name(&self, s: &ElemSet) -> String {
        let inner: Vec<&str> = s.ones().map(|a| self.name(a)).collect();
        format!("{{{}}}", inner.join(","))
    }
}

/// Checks that `map` is an order-preserving function `dom -> cod`.
pub fn check_monotone(dom: &FinPoset, cod: &FinPoset, map: &[Elem]) -> Result<()> {
    if map.len() != dom.len() || map.iter().any(|&y| y >= cod.len()) {
        return Err(Error::DomainMismatch(format!(
            "map of length {} does not fit {} -> {} elements",
            map.len(),
            dom.len(),
            cod.len()
        )));
    }
    for (a, b) in dom.strict_pairs() {
        if !cod.leq(map[a], map[b]) {
            return Err(Error::NotMonotone(format!(
                "`{}` <= `{}` but `{}` !<= `{}`",
                dom.name(a),
                dom.name(b),
                cod.name(map[a]),
                cod.name(map[b])
            )));
        }
    }
    Ok(())
}

/// An order-preserving map between finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    map: Vec<Elem>,
}

impl MonotoneMap {
    pub fn new(dom: &FinPoset, cod: &FinPoset, map: Vec<Elem>) -> Result<Self> {
        check_monotone(dom, cod, &map)?;
        Ok(MonotoneMap { map })
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a]
    }

    pub fn table(&self) -> &[Elem] {
        &self.map
    }
}

/// Every monotone map `dom -> cod`, enumerated along a linear extension of `dom`.
pub fn monotone_maps(dom: &FinPoset, cod: &FinPoset) -> Vec<Vec<Elem>> {
    let order = dom.linear_extension();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; dom.len()];
    fn rec(
        dom: &FinPoset,
        cod: &FinPoset,
        order: &[Elem],
        i: usize,
        map: &mut Vec<Elem>,
        out: &mut Vec<Vec<Elem>>,
    ) {
        if i == order.len() {
            out.push(map.clone());
            return;
        }
        let a = order[i];
        for y in cod.elements() {
            let ok = dom
                .down_set(a)
                .ones()
                .filter(|&b| b != a)
                .all(|b| cod.leq(map[b], y));
            if ok {
                map[a] = y;
                rec(dom, cod, order, i + 1, map, out);
            }
        }
        map[a] = usize::MAX;
    }
    rec(dom, cod, &order, 0, &mut map, &mut out);
    out
}

/// Every partial order on `k` labelled points `0..k`, up to isomorphism.
///
/// Each class is represented by the lexicographically least strict-order
/// matrix over all relabellings.
pub fn posets_up_to_iso(k: usize) -> Vec<FinPoset> {
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (0..k).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let perms = permutations(k);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let rel = |a: usize, b: usize| -> bool {
            a == b || pairs.iter().position(|&p| p == (a, b)).is_some_and(|i| mask >> i & 1 == 1)
        };
        let partial_order = (0..k).all(|a| {
            (0..k).all(|b| {
                (a == b || !(rel(a, b) && rel(b, a)))
                    && (0..k).all(|c| !(rel(a, b) && rel(b, c)) || rel(a, c))
            })
        });
        if !partial_order {
            continue;
        }
        let canon = canonical_matrix(k, &perms, rel);
        if seen.insert(canon.clone()) {
            out.push(poset_from_matrix(k, &canon));
        }
    }
    out
}

fn canonical_matrix(k: usize, perms: &[Vec<usize>], rel: impl Fn(usize, usize) -> bool) -> Vec<bool> {
    perms
        .iter()
        .map(|p| {
            let mut bits = Vec::with_capacity(k * k);
            for a in 0..k {
                for b in 0..k {
                    bits.push(rel(p[a], p[b]));
                }
            }
            bits
        })
        .min()
        .unwrap_or_default()
}

fn poset_from_matrix(k: usize, canon: &[bool]) -> FinPoset {
    let names = (0..k).map(|i| format!("j{i}")).collect();
    FinPoset::from_leq_unchecked(names, |a, b| canon[a * k + b])
}

/// Posets up to isomorphism with at most `max_downsets` down-sets.
///
/// Grown one maximal element at a time; adding an element never removes a
/// down-set, so branches past the bound are pruned.
pub fn posets_with_downsets_at_most(max_downsets: usize) -> Vec<FinPoset> {
    let mut out = vec![FinPoset::from_leq_unchecked(Vec::new(), |_, _| false)];
    let mut level = out.clone();
    while !level.is_empty() {
        let k = level[0].len() + 1;
        let perms = permutations(k);
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for p in &level {
            for below in p.downsets() {
                let rel = |a: usize, b: usize| {
                    a == b
                        || match (a == k - 1, b == k - 1) {
                            (false, false) => p.leq(a, b),
                            (false, true) => below.contains(a),
                            _ => false,
                        }
                };
                let canon = canonical_matrix(k, &perms, rel);
                if seen.insert(canon.clone()) {
                    let q = poset_from_matrix(k, &canon);
                    if q.downsets().len() <= max_downsets {
                        next.push(q);
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    fn heap(n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n <= 1 {
            out.push(current.clone());
            return;
        }
        for i in 0..n - 1 {
            heap(n - 1, current, out);
            if n.is_multiple_of(2) {
                current.swap(i, n - 1);
            } else {
                current.swap(0, n - 1);
            }
        }
        heap(n - 1, current, out);
    }
    heap(k, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_infers_transitive_pair() {
        let p = FinPoset::build(&["0", "m", "1"], &[("0", "m"), ("m", "1")]).unwrap();
        assert!(p.leq(0, 2));
        assert!(!p.leq(2, 0));
        assert_eq!(p.strict_pairs().count(), 3);
    }

    #[test]
    fn singleton() {
        let p = FinPoset::build::<&str>(&["a"], &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.leq(0, 0));
    }

    #[test]
    fn two_cycle_rejected() {
        let err = FinPoset::build(&["x", "y"], &[("x", "y"), ("y", "x")]).unwrap_err();
        assert!(matches!(err, Error::Cycle(..)));
    }

    #[test]
    fn dangling_and_duplicate_ids() {
        assert_eq!(
            FinPoset::build(&["x"], &[("x", "z")]).unwrap_err(),
            Error::UnknownElement("z".into())
        );
        assert!(matches!(
            FinPoset::build::<&str>(&["x", "x"], &[]).unwrap_err(),
            Error::DuplicateElement(_)
        ));
    }

    #[test]
    fn from_leq_rejects_non_transitive() {
        let names = vec!["a".to_string(), "b".into(), "c".into()];
        let err = FinPoset::from_leq(names, |a, b| a == b || (a, b) == (0, 1) || (a, b) == (1, 2));
        assert!(matches!(err, Err(Error::NotAPartialOrder(_))));
    }

    #[test]
    fn poset_counts_up_to_iso() {
        // OEIS A000112.
        let counts: Vec<usize> = (0..=4).map(|k| posets_up_to_iso(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16]);
    }

    #[test]
    fn downsets_of_lambda() {
        let p = FinPoset::build(&["x", "a", "b"], &[("x", "a"), ("x", "b")]).unwrap();
        let names: Vec<String> = p.downsets().iter().map(|s| p.set_name(s)).collect();
        assert_eq!(names, vec!["{}", "{x}", "{x,a}", "{x,b}", "{x,a,b}"]);
    }

    #[test]
    fn monotone_maps_chain_to_chain() {
        let c2 = FinPoset::build(&["0", "1"], &[("0", "1")]).unwrap();
        let c3 = FinPoset::build(&["0", "m", "1"], &[("0", "m"), ("m", "1")]).unwrap();
        // Monotone maps from a 2-chain to a 3-chain are pairs y0 <= y1.
        assert_eq!(monotone_maps(&c2, &c3).len(), 6);
        for m in monotone_maps(&c2, &c3) {
            assert!(MonotoneMap::new(&c2, &c3, m).is_ok());
        }
    }
}
