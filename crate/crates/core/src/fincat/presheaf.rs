//! Contravariant functors from a finite category into sets, posets or lattices.
//!
//! For `f: b → a` the restriction `map(f)` sends `value(a)` to `value(b)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::order::{check_hom, check_monotone, Elem, FinDistLattice, FinPoset};

use super::category::{FinCategory, MorId, ObjId};

/// What a presheaf can take values in.
pub trait Carrier: Clone + fmt::Debug + Eq + Send + Sync + 'static {
    fn size(&self) -> usize;
    fn leq(&self, a: Elem, b: Elem) -> bool;
    fn element_name(&self, a: Elem) -> &str;
    /// Checks that `map` is a morphism `dom → cod` of the carrier's kind.
    fn check_map(dom: &Self, cod: &Self, map: &[Elem]) -> Result<()>;
}

/// A finite set, ordered discretely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSet {
    names: Vec<String>,
}

impl FinSet {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(Error::DuplicateElement(n.clone()));
            }
        }
        Ok(FinSet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
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
}

fn check_range(dom: usize, cod: usize, map: &[Elem]) -> Result<()> {
    if map.len() != dom {
        return Err(Error::DomainMismatch(format!("map has {} entries, domain {dom}", map.len())));
    }
    match map.iter().find(|&&y| y >= cod) {
        Some(y) => Err(Error::UnknownElement(format!("#{y}"))),
        None => Ok(()),
    }
}

impl Carrier for FinSet {
    fn size(&self) -> usize {
        self.len()
    }

    fn leq(&self, a: Elem, b: Elem) -> bool {
        a == b
    }

    fn element_name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    fn check_map(dom: &Self, cod: &Self, map: &[Elem]) -> Result<()> {
        check_range(dom.len(), cod.len(), map)
    }
}

impl Carrier for FinPoset {
    fn size(&self) -> usize {
        self.len()
    }

    fn leq(&self, a: Elem, b: Elem) -> bool {
        FinPoset::leq(self, a, b)
    }

    fn element_name(&self, a: Elem) -> &str {
        self.name(a)
    }

    fn check_map(dom: &Self, cod: &Self, map: &[Elem]) -> Result<()> {
        check_range(dom.len(), cod.len(), map)?;
        check_monotone(dom, cod, map)
    }
}

impl Carrier for FinDistLattice {
    fn size(&self) -> usize {
        self.len()
    }

    fn leq(&self, a: Elem, b: Elem) -> bool {
        FinDistLattice::leq(self, a, b)
    }

    fn element_name(&self, a: Elem) -> &str {
        self.name(a)
    }

    fn check_map(dom: &Self, cod: &Self, map: &[Elem]) -> Result<()> {
        check_range(dom.len(), cod.len(), map)?;
        check_hom(dom, cod, map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf<V> {
    base: Arc<FinCategory>,
    values: Vec<Arc<V>>,
    maps: Vec<Vec<Elem>>,
}

pub type LatPresheaf = Presheaf<FinDistLattice>;
pub type PosPresheaf = Presheaf<FinPoset>;
pub type SetPresheaf = Presheaf<FinSet>;

impl<V: Carrier> Presheaf<V> {
    /// `maps` is indexed by morphism; an empty entry for an identity is filled in.
    pub fn new(base: Arc<FinCategory>, values: Vec<Arc<V>>, maps: Vec<Vec<Elem>>) -> Result<Self> {
        let p = Self::new_unchecked(base, values, maps);
        p.validate()?;
        Ok(p)
    }

    pub(crate) fn new_unchecked(
        base: Arc<FinCategory>,
        values: Vec<Arc<V>>,
        mut maps: Vec<Vec<Elem>>,
    ) -> Self {
        maps.resize(base.num_morphisms(), Vec::new());
        for o in base.objects() {
            let id = base.identity(o);
            if maps[id].is_empty() && o < values.len() {
                maps[id] = (0..values[o].size()).collect();
            }
        }
        Presheaf { base, values, maps }
    }

    /// Every object takes the value `v`; every restriction is the identity.
    pub fn constant(base: Arc<FinCategory>, v: Arc<V>) -> Self {
        let values = vec![v; base.num_objects()];
        let maps = base.morphisms().map(|_| (0..values[0].size()).collect()).collect();
        Presheaf { base, values, maps }
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.base;
        if self.values.len() != c.num_objects() {
            return Err(Error::NotAFunctor(format!(
                "{} values for {} objects",
                self.values.len(),
                c.num_objects()
            )));
        }
        for f in c.morphisms() {
            V::check_map(self.value(c.cod(f)), self.value(c.dom(f)), &self.maps[f])
                .map_err(|e| Error::NotAFunctor(format!("restriction along `{}`: {e}", c.mor_name(f))))?;
        }
        for o in c.objects() {
            if self.maps[c.identity(o)].iter().enumerate().any(|(x, &y)| x != y) {
                return Err(Error::NotAFunctor(format!("identity of `{}`", c.object_name(o))));
            }
        }
        for (g, f) in c.composable_pairs() {
            let gf = c.compose(g, f).unwrap();
            let (mg, mf) = (&self.maps[g], &self.maps[f]);
            if let Some(x) = (0..self.value(c.cod(g)).size()).find(|&x| mf[mg[x]] != self.maps[gf][x]) {
                return Err(Error::NotAFunctor(format!(
                    "restriction along `{}` differs from `{}` then `{}` at `{}`",
                    c.mor_name(gf),
                    c.mor_name(g),
                    c.mor_name(f),
                    self.value(c.cod(g)).element_name(x)
                )));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn value(&self, o: ObjId) -> &Arc<V> {
        &self.values[o]
    }

    pub fn values(&self) -> &[Arc<V>] {
        &self.values
    }

    pub fn map(&self, f: MorId) -> &[Elem] {
        &self.maps[f]
    }

    pub fn maps(&self) -> &[Vec<Elem>] {
        &self.maps
    }

    #[inline]
    pub fn restrict(&self, f: MorId, x: Elem) -> Elem {
        self.maps[f][x]
    }

    /// Total number of elements across all objects.
    pub fn total_size(&self) -> usize {
        self.values.iter().map(|v| v.size()).sum()
    }
}
