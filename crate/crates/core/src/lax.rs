//! Lax limits of finite diagrams and the tilde construction on presheaves.
//!
//! Both are cut out of a product by inequalities `m(x_src) ≤ x_dst` and share
//! one depth-first family search. A diagram `D: J → K` is stored as a
//! presheaf on `J^op`, so a morphism `α: i → j` of `J` appears as a
//! restriction from `value(i)` to `value(j)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{
    require_natural, slice, validate_transformation, Carrier, FinCategory, MorId, ObjId, Presheaf,
    TransData,
};
use crate::mutation::{self, Mutation};
use crate::ndl::{is_normal, CoverWitness, NormalityCertificate};
use crate::order::{Elem, FinDistLattice, FinPoset};

/// Refuse to materialize more families than this.
pub const MAX_FAMILIES: usize = 4096;

/// `map(x[src]) ≤ x[dst]`
#[derive(Clone, Copy, Debug)]
pub(crate) struct Constraint<'a> {
    pub src: usize,
    pub dst: usize,
    pub map: &'a [Elem],
}

/// All families over `carriers` satisfying `constraints`, in lexicographic order.
pub(crate) fn enumerate_families<V: Carrier>(
    carriers: &[&V],
    constraints: &[Constraint<'_>],
    cap: usize,
) -> Result<Vec<Vec<Elem>>> {
    let k = carriers.len();
    let mut by_last: Vec<Vec<Constraint<'_>>> = vec![Vec::new(); k];
    for c in constraints {
        by_last[c.src.max(c.dst)].push(*c);
    }
    let mut out = Vec::new();
    let mut current = vec![0; k];
    family_rec(carriers, &by_last, 0, &mut current, &mut out, cap)?;
    Ok(out)
}

fn family_rec<V: Carrier>(
    carriers: &[&V],
    by_last: &[Vec<Constraint<'_>>],
    pos: usize,
    current: &mut Vec<Elem>,
    out: &mut Vec<Vec<Elem>>,
    cap: usize,
) -> Result<()> {
    if pos == carriers.len() {
        if out.len() == cap {
            return Err(Error::TooLarge(format!("more than {cap} families")));
        }
        out.push(current.clone());
        return Ok(());
    }
    for x in 0..carriers[pos].size() {
        current[pos] = x;
        let ok = by_last[pos].iter().all(|c| {
            carriers[c.dst].leq(c.map[current[c.src]], current[c.dst])
        });
        if ok {
            family_rec(carriers, by_last, pos + 1, current, out, cap)?;
        }
    }
    Ok(())
}

fn family_name<V: Carrier>(carriers: &[&V], family: &[Elem]) -> String {
    let parts: Vec<&str> = family.iter().zip(carriers).map(|(&x, c)| c.element_name(x)).collect();
    format!("({})", parts.join(","))
}

/// Carriers that can be rebuilt from a set of families ordered componentwise.
pub trait FamilyCarrier: Carrier {
    fn from_families(parts: &[&Self], families: &[Vec<Elem>], lookup: &HashMap<Vec<Elem>, Elem>) -> Result<Self>;
}

fn family_poset<V: Carrier>(parts: &[&V], families: &[Vec<Elem>]) -> FinPoset {
    let names = families.iter().map(|f| family_name(parts, f)).collect();
    FinPoset::from_leq_unchecked(names, |i, j| {
        families[i].iter().zip(&families[j]).zip(parts).all(|((&x, &y), c)| c.leq(x, y))
    })
}

impl FamilyCarrier for FinPoset {
    fn from_families(parts: &[&Self], families: &[Vec<Elem>], _: &HashMap<Vec<Elem>, Elem>) -> Result<Self> {
        Ok(family_poset(parts, families))
    }
}

impl FamilyCarrier for FinDistLattice {
    /// Meets and joins are taken pointwise; a family set not closed under them is rejected.
    fn from_families(parts: &[&Self], families: &[Vec<Elem>], lookup: &HashMap<Vec<Elem>, Elem>) -> Result<Self> {
        let n = families.len();
        if n == 0 {
            return Err(Error::EmptyLattice);
        }
        let poset = family_poset(parts, families);
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        let mut scratch = vec![0; parts.len()];
        for i in 0..n {
            for j in i..n {
                for (op, table) in [(0, &mut meet), (1, &mut join)] {
                    for (t, c) in parts.iter().enumerate() {
                        let (x, y) = (families[i][t], families[j][t]);
                        scratch[t] = if op == 0 { c.meet(x, y) } else { c.join(x, y) };
                    }
                    let k = *lookup.get(&scratch).ok_or_else(|| {
                        Error::NotALattice(
                            poset.name(i).to_owned(),
                            poset.name(j).to_owned(),
                            if op == 0 { "pointwise meet" } else { "pointwise join" },
                        )
                    })?;
                    table[i * n + j] = k;
                    table[j * n + i] = k;
                }
            }
        }
        Ok(FinDistLattice::from_tables_unchecked(poset, meet, join))
    }
}

fn build_carrier<V: FamilyCarrier>(parts: &[&V], families: &[Vec<Elem>]) -> Result<(V, HashMap<Vec<Elem>, Elem>)> {
    let lookup: HashMap<Vec<Elem>, Elem> =
        families.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    let carrier = V::from_families(parts, families, &lookup)?;
    Ok((carrier, lookup))
}

/// A covariant functor `J → K`, held as a presheaf on `J^op`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram<V> {
    index: Arc<FinCategory>,
    functor: Presheaf<V>,
}

impl<V: Carrier> Diagram<V> {
    /// `maps[α]` is `D(α): D(dom α) → D(cod α)`.
    pub fn new(index: Arc<FinCategory>, values: Vec<Arc<V>>, maps: Vec<Vec<Elem>>) -> Result<Self> {
        let functor = Presheaf::new(Arc::new(index.opposite()), values, maps)?;
        Ok(Diagram { index, functor })
    }

    /// Reads a presheaf on `B` as a diagram over `B^op`.
    pub fn from_presheaf(p: Presheaf<V>) -> Self {
        Diagram { index: Arc::new(p.base().opposite()), functor: p }
    }

    pub fn index(&self) -> &Arc<FinCategory> {
        &self.index
    }

    pub fn value(&self, j: ObjId) -> &Arc<V> {
        self.functor.value(j)
    }

    pub fn map(&self, alpha: MorId) -> &[Elem] {
        self.functor.map(alpha)
    }

    fn constraints(&self) -> Vec<Constraint<'_>> {
        self.index
            .morphisms()
            .filter(|&m| !self.index.is_identity(m))
            .map(|m| Constraint { src: self.index.dom(m), dst: self.index.cod(m), map: self.map(m) })
            .collect()
    }
}

/// Families `(x_j)` with `D(α)x_i ≤ x_j`, ordered componentwise.
#[derive(Clone, Debug)]
pub struct LaxLimit<V> {
    families: Vec<Vec<Elem>>,
    carrier: Arc<V>,
    lookup: HashMap<Vec<Elem>, Elem>,
}

impl<V> LaxLimit<V> {
    pub fn carrier(&self) -> &Arc<V> {
        &self.carrier
    }

    pub fn families(&self) -> &[Vec<Elem>] {
        &self.families
    }

    pub fn index_of(&self, family: &[Elem]) -> Option<Elem> {
        self.lookup.get(family).copied()
    }

    /// `π_j`
    pub fn projection(&self, j: ObjId) -> Vec<Elem> {
        self.families.iter().map(|f| f[j]).collect()
    }
}

pub fn lax_limit<V: FamilyCarrier>(d: &Diagram<V>) -> Result<LaxLimit<V>> {
    let parts: Vec<&V> = d.functor.values().iter().map(|v| v.as_ref()).collect();
    let families = enumerate_families(&parts, &d.constraints(), MAX_FAMILIES)?;
    let (carrier, lookup) = build_carrier(&parts, &families)?;
    Ok(LaxLimit { families, carrier: Arc::new(carrier), lookup })
}

impl LaxLimit<FinDistLattice> {
    /// Separates every cover by pushing separators in the initial value
    /// along `!^j`, then checks the resulting families.
    pub fn normality_by_recipe(&self, d: &Diagram<FinDistLattice>) -> Result<NormalityCertificate> {
        let j = d.index();
        let zero = j.initial_object().ok_or(Error::NoInitialObject)?;
        let bang: Vec<MorId> = j.objects().map(|t| j.hom(zero, t)[0]).collect();
        let d0 = d.value(zero);
        let cert0 = is_normal(d0);
        let l = self.carrier.as_ref();
        let push = |x0: Elem| -> Result<Elem> {
            let family: Vec<Elem> = j.objects().map(|t| d.map(bang[t])[x0]).collect();
            self.index_of(&family)
                .ok_or_else(|| Error::NotNormal(d0.name(x0).to_owned(), "pushed family".into()))
        };
        let mut witnesses = Vec::new();
        for a in l.elements() {
            for b in l.elements() {
                if l.join(a, b) != l.top() {
                    continue;
                }
                let (a0, b0) = (self.families[a][zero], self.families[b][zero]);
                let w0 = cert0.witness(a0, b0).ok_or_else(|| {
                    Error::NotNormal(d0.name(a0).to_owned(), d0.name(b0).to_owned())
                })?;
                let (a_sep, b_sep) = (push(w0.a_sep)?, push(w0.b_sep)?);
                witnesses.push(CoverWitness { a, b, a_sep, b_sep });
            }
        }
        let cert = NormalityCertificate::Normal { witnesses };
        cert.check(l)?;
        Ok(cert)
    }

    /// The pointwise join of any two members is again a member, and it is
    /// their join in the limit.
    pub fn joins_are_pointwise(&self, d: &Diagram<FinDistLattice>) -> bool {
        let l = self.carrier.as_ref();
        l.elements().all(|x| {
            l.elements().all(|y| {
                let joined: Vec<Elem> = self.families[x]
                    .iter()
                    .zip(&self.families[y])
                    .enumerate()
                    .map(|(j, (&a, &b))| d.value(j).join(a, b))
                    .collect();
                self.index_of(&joined) == Some(l.join(x, y))
            })
        })
    }
}

/// `F̃` together with the family each element stands for.
#[derive(Clone, Debug)]
pub struct Tilde<V> {
    source: Arc<Presheaf<V>>,
    presheaf: Arc<Presheaf<V>>,
    families: Vec<Vec<Vec<Elem>>>,
    lookup: Vec<HashMap<Vec<Elem>, Elem>>,
}

impl<V: Carrier> Tilde<V> {
    pub fn source(&self) -> &Arc<Presheaf<V>> {
        &self.source
    }

    pub fn presheaf(&self) -> &Arc<Presheaf<V>> {
        &self.presheaf
    }

    /// Morphisms into `a`, in coordinate order.
    pub fn coordinates(&self, a: ObjId) -> &[MorId] {
        self.source.base().arrows_into(a)
    }

    pub fn families(&self, a: ObjId) -> &[Vec<Elem>] {
        &self.families[a]
    }

    pub fn family(&self, a: ObjId, x: Elem) -> &[Elem] {
        &self.families[a][x]
    }

    pub fn index_of(&self, a: ObjId, family: &[Elem]) -> Option<Elem> {
        self.lookup[a].get(family).copied()
    }

    fn position(&self, a: ObjId, f: MorId) -> usize {
        self.coordinates(a).iter().position(|&g| g == f).expect("arrow into a")
    }
}

/// Coordinates and constraints `F(g)x_f ≤ x_{fg}` of `F̃(a)`.
fn tilde_constraints<V: Carrier>(f: &Presheaf<V>, a: ObjId) -> Vec<Constraint<'_>> {
    let c = f.base();
    let coords = c.arrows_into(a);
    let pos = |m: MorId| coords.iter().position(|&x| x == m).unwrap();
    let mut out = Vec::new();
    for (i, &fm) in coords.iter().enumerate() {
        for &g in c.arrows_into(c.dom(fm)) {
            if c.is_identity(g) {
                continue;
            }
            let fg = c.compose(fm, g).unwrap();
            out.push(Constraint { src: i, dst: pos(fg), map: f.map(g) });
        }
    }
    out
}

/// Families `(x_f)_{f: b → a}`, `x_f ∈ F(b)`, with `F(g)x_f ≤ x_{fg}`.
pub fn tilde<V: FamilyCarrier>(f: &Arc<Presheaf<V>>) -> Result<Tilde<V>> {
    let c = f.base();
    let skip = mutation::is_active(Mutation::SkipLaxInequality);
    let mut families = Vec::new();
    let mut lookup = Vec::new();
    let mut values = Vec::new();
    for a in c.objects() {
        let parts: Vec<&V> = c.arrows_into(a).iter().map(|&m| f.value(c.dom(m)).as_ref()).collect();
        let constraints = if skip { Vec::new() } else { tilde_constraints(f, a) };
        let fams = enumerate_families(&parts, &constraints, MAX_FAMILIES)?;
        let (carrier, lk) = build_carrier(&parts, &fams)?;
        values.push(Arc::new(carrier));
        families.push(fams);
        lookup.push(lk);
    }
    let mut maps = Vec::with_capacity(c.num_morphisms());
    for h in c.morphisms() {
        let (a2, a) = (c.dom(h), c.cod(h));
        let positions: Vec<usize> = c
            .arrows_into(a2)
            .iter()
            .map(|&f2| {
                let hf = c.compose(h, f2).unwrap();
                c.arrows_into(a).iter().position(|&m| m == hf).unwrap()
            })
            .collect();
        let map = families[a]
            .iter()
            .map(|fam| {
                let image: Vec<Elem> = positions.iter().map(|&p| fam[p]).collect();
                lookup[a2].get(&image).copied().ok_or_else(|| {
                    Error::NotAFunctor(format!("restriction along `{}` leaves the families", c.mor_name(h)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        maps.push(map);
    }
    let presheaf = Arc::new(Presheaf::new(c.clone(), values, maps)?);
    Ok(Tilde { source: f.clone(), presheaf, families, lookup })
}

/// `F̃(a)` recomputed as the lax limit over `(C/a)^op` of `F` composed with the projection.
pub fn tilde_via_slice<V: FamilyCarrier>(f: &Presheaf<V>, a: ObjId) -> Result<LaxLimit<V>> {
    let c = f.base();
    let s = slice(c, a);
    let values = s.arrow.iter().map(|&m| f.value(c.dom(m)).clone()).collect();
    let maps = s.underlying.iter().map(|&g| f.map(g).to_vec()).collect();
    let over_slice = Presheaf::new(Arc::new(s.category), values, maps)?;
    lax_limit(&Diagram::from_presheaf(over_slice))
}

/// Checks that the direct and slice descriptions of `F̃(a)` are the same families.
pub fn check_tilde_vs_slice<V: FamilyCarrier>(t: &Tilde<V>) -> Result<()> {
    for a in t.source.base().objects() {
        let via = tilde_via_slice(&t.source, a)?;
        if via.families() != t.families(a) {
            return Err(Error::IsoFailure(format!(
                "tilde and slice lax limit differ at `{}`",
                t.source.base().object_name(a)
            )));
        }
    }
    Ok(())
}

/// `ε_a(x) = (F(f)x)_{f: b → a}`
pub fn epsilon<V: Carrier>(t: &Tilde<V>) -> Result<TransData<V>> {
    let f = &t.source;
    let c = f.base();
    let components = c
        .objects()
        .map(|a| {
            (0..f.value(a).size())
                .map(|x| {
                    let fam: Vec<Elem> = t.coordinates(a).iter().map(|&m| f.restrict(m, x)).collect();
                    t.index_of(a, &fam).ok_or_else(|| {
                        Error::NotLax {
                            morphism: c.object_name(a).to_owned(),
                            element: f.value(a).element_name(x).to_owned(),
                        }
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    TransData::new(f.clone(), t.presheaf.clone(), components)
}

/// `μ_a(y) = y_{id_a}`
pub fn mu<V: Carrier>(t: &Tilde<V>) -> Result<TransData<V>> {
    let c = t.source.base();
    let components = c
        .objects()
        .map(|a| {
            let p = t.position(a, c.identity(a));
            t.families(a).iter().map(|fam| fam[p]).collect()
        })
        .collect();
    TransData::new(t.presheaf.clone(), t.source.clone(), components)
}

/// `φ̃_a(x)_f = φ_b(x_f)`
pub fn tilde_on_lax<V: Carrier>(phi: &TransData<V>, t1: &Tilde<V>, t2: &Tilde<V>) -> Result<TransData<V>> {
    if phi.source() != t1.source() || phi.target() != t2.source() {
        return Err(Error::DomainMismatch("transformation does not match the tilde presheaves".into()));
    }
    validate_transformation(phi)?;
    let c = t1.source.base();
    let components = c
        .objects()
        .map(|a| {
            let doms: Vec<ObjId> = t1.coordinates(a).iter().map(|&m| c.dom(m)).collect();
            t1.families(a)
                .iter()
                .map(|fam| {
                    let image: Vec<Elem> =
                        fam.iter().zip(&doms).map(|(&x, &b)| phi.apply(b, x)).collect();
                    t2.index_of(a, &image).ok_or_else(|| Error::NotLax {
                        morphism: c.object_name(a).to_owned(),
                        element: family_name(
                            &doms.iter().map(|&b| t1.source.value(b).as_ref()).collect::<Vec<_>>(),
                            fam,
                        ),
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    TransData::new(t1.presheaf.clone(), t2.presheaf.clone(), components)
}

/// `ψ^α = μ ∘ α ∘ ε`
pub fn psi<V: Carrier>(alpha: &TransData<V>, t1: &Tilde<V>, t2: &Tilde<V>) -> Result<TransData<V>> {
    if alpha.source() != t1.presheaf() || alpha.target() != t2.presheaf() {
        return Err(Error::DomainMismatch("transformation does not match the tilde presheaves".into()));
    }
    require_natural(alpha)?;
    epsilon(t1)?.then(alpha)?.then(&mu(t2)?)
}

/// Checks `μ ∘ ε = id` and `ε ∘ μ ⊑ id`.
pub fn check_unit_counit<V: Carrier>(t: &Tilde<V>) -> Result<()> {
    let (e, m) = (epsilon(t)?, mu(t)?);
    require_natural(&e)?;
    validate_transformation(&m)?;
    if e.then(&m)? != TransData::identity(t.source.clone()) {
        return Err(Error::IsoFailure("μ ∘ ε is not the identity".into()));
    }
    if !m.then(&e)?.pointwise_leq(&TransData::identity(t.presheaf.clone())) {
        return Err(Error::IsoFailure("ε ∘ μ is not below the identity".into()));
    }
    Ok(())
}

/// `ψ(φ̃) = φ`
pub fn check_psi_of_tilde<V: Carrier>(phi: &TransData<V>, t1: &Tilde<V>, t2: &Tilde<V>) -> Result<()> {
    let back = psi(&tilde_on_lax(phi, t1, t2)?, t1, t2)?;
    if back != *phi {
        return Err(Error::IsoFailure("ψ of tilde differs from the original transformation".into()));
    }
    Ok(())
}

/// `tilde(ψ(α)) ⊑ α`
pub fn check_tilde_of_psi<V: Carrier>(alpha: &TransData<V>, t1: &Tilde<V>, t2: &Tilde<V>) -> Result<()> {
    let round = tilde_on_lax(&psi(alpha, t1, t2)?, t1, t2)?;
    if !round.pointwise_leq(alpha) {
        return Err(Error::IsoFailure("tilde of ψ is not below the original transformation".into()));
    }
    Ok(())
}

/// `ψ(id) = id`
pub fn check_psi_identity<V: Carrier>(t: &Tilde<V>) -> Result<()> {
    if psi(&TransData::identity(t.presheaf.clone()), t, t)? != TransData::identity(t.source.clone()) {
        return Err(Error::IsoFailure("ψ of the identity is not the identity".into()));
    }
    Ok(())
}

/// `ψ(β) ∘ ψ(α) ⊑ ψ(β ∘ α)`
pub fn check_psi_composition<V: Carrier>(
    alpha: &TransData<V>,
    beta: &TransData<V>,
    t1: &Tilde<V>,
    t2: &Tilde<V>,
    t3: &Tilde<V>,
) -> Result<()> {
    let left = psi(alpha, t1, t2)?.then(&psi(beta, t2, t3)?)?;
    let right = psi(&alpha.then(beta)?, t1, t3)?;
    if !left.pointwise_leq(&right) {
        return Err(Error::IsoFailure("ψ(β)ψ(α) is not below ψ(βα)".into()));
    }
    Ok(())
}

/// Given lax `φ_i: F_i → G_i` and natural `α: F̃1 → F̃2`, `β: G̃1 → G̃2` with
/// `β φ̃1 = φ̃2 α`, checks `ψ^β φ1 ⊑ φ2 ψ^α`.
#[allow(clippy::too_many_arguments)]
pub fn check_lax_naturality<V: Carrier>(
    phi1: &TransData<V>,
    phi2: &TransData<V>,
    alpha: &TransData<V>,
    beta: &TransData<V>,
    tf1: &Tilde<V>,
    tf2: &Tilde<V>,
    tg1: &Tilde<V>,
    tg2: &Tilde<V>,
) -> Result<()> {
    let lhs_sq = tilde_on_lax(phi1, tf1, tg1)?.then(beta)?;
    let rhs_sq = alpha.then(&tilde_on_lax(phi2, tf2, tg2)?)?;
    if lhs_sq != rhs_sq {
        return Err(Error::DomainMismatch("the square β φ̃1 = φ̃2 α does not commute".into()));
    }
    let left = phi1.then(&psi(beta, tg1, tg2)?)?;
    let right = psi(alpha, tf1, tf2)?.then(phi2)?;
    if !left.pointwise_leq(&right) {
        return Err(Error::IsoFailure("ψ^β φ1 is not below φ2 ψ^α".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{enumerate_transformations, Mode};
    use crate::fixtures;
    use crate::order::{find_order_isomorphism, is_order_isomorphism};

    fn arrow_diagram() -> Diagram<FinDistLattice> {
        let j = Arc::new(FinCategory::arrow());
        let h = j.mor_index("h").unwrap();
        let f = fixtures::chain3_to_bool2();
        let mut maps = vec![Vec::new(); 3];
        maps[h] = f.table().to_vec();
        Diagram::new(j, vec![f.dom().clone(), f.cod().clone()], maps).unwrap()
    }

    #[test]
    fn lax_limit_over_arrow() {
        let d = arrow_diagram();
        let lim = lax_limit(&d).unwrap();
        let names: Vec<&str> = lim.carrier().elements().map(|x| lim.carrier().name(x)).collect();
        assert_eq!(names, ["(0,0)", "(0,1)", "(m,1)", "(1,1)"]);
        // a 4-chain
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(lim.carrier().leq(x, y), x <= y);
            }
        }
        // lax cone law D(h)π_o0 ≤ π_o1
        let (p0, p1) = (lim.projection(0), lim.projection(1));
        for (x, y) in p0.iter().zip(&p1) {
            assert!(d.value(1).leq(d.map(2)[*x], *y));
        }
        let cert = lim.normality_by_recipe(&d).unwrap();
        assert!(cert.is_normal());
        assert!(lim.joins_are_pointwise(&d));
    }

    #[test]
    fn lax_limit_oracle() {
        // Product filtered by the inequality.
        let d = arrow_diagram();
        let lim = lax_limit(&d).unwrap();
        let mut expected = Vec::new();
        for x in 0..3 {
            for y in 0..2 {
                if d.value(1).leq(d.map(2)[x], y) {
                    expected.push(vec![x, y]);
                }
            }
        }
        assert_eq!(lim.families(), expected.as_slice());
    }

    #[test]
    fn trivial_diagram() {
        let j = Arc::new(FinCategory::terminal());
        let b4 = Arc::new(fixtures::bool4());
        let d = Diagram::new(j, vec![b4.clone()], vec![]).unwrap();
        let lim = lax_limit(&d).unwrap();
        let id: Vec<Elem> = b4.elements().collect();
        assert!(is_order_isomorphism(lim.carrier().poset(), b4.poset(), &id));
    }

    #[test]
    fn recipe_needs_initial_object() {
        let j = Arc::new(FinCategory::discrete(2));
        let b2 = Arc::new(fixtures::bool2());
        let d = Diagram::new(j, vec![b2.clone(), b2], vec![]).unwrap();
        let lim = lax_limit(&d).unwrap();
        assert_eq!(lim.normality_by_recipe(&d), Err(Error::NoInitialObject));
    }

    #[test]
    fn non_functorial_diagram_rejected() {
        let j = Arc::new(FinCategory::walking_idempotent());
        let s = Arc::new(fixtures::chain3());
        let e = j.mor_index("e").unwrap();
        let mut maps = vec![Vec::new(); 2];
        maps[e] = vec![0, 0, 2];
        assert!(Diagram::new(j.clone(), vec![s.clone()], maps).is_ok());
        let b4 = Arc::new(fixtures::bool4());
        let mut maps = vec![Vec::new(); 2];
        maps[e] = vec![0, 2, 1, 3];
        assert!(matches!(Diagram::new(j, vec![b4], maps), Err(Error::NotAFunctor(_))));
    }

    #[test]
    fn tilde_of_f_ar() {
        let f = Arc::new(fixtures::f_ar());
        let t = tilde(&f).unwrap();
        let v1 = t.presheaf().value(1);
        let names: Vec<&str> = v1.elements().map(|x| v1.name(x)).collect();
        // coordinates at o1: h, id_o1 (sorted by name); x_h ∈ BOOL2, x_id ∈ CHAIN3
        assert_eq!(t.coordinates(1).iter().map(|&m| f.base().mor_name(m)).collect::<Vec<_>>(), ["h", "id_o1"]);
        assert_eq!(names, ["(0,0)", "(1,0)", "(1,m)", "(1,1)"]);
        assert_eq!(t.presheaf().value(0).len(), 2);
        // restriction along h keeps x_h
        let h = f.base().mor_index("h").unwrap();
        assert_eq!(t.presheaf().map(h), &[0, 1, 1, 1]);
        check_tilde_vs_slice(&t).unwrap();
    }

    #[test]
    fn tilde_on_trivial_base_is_identity() {
        let b4 = Arc::new(fixtures::bool4());
        let f = Arc::new(Presheaf::constant(Arc::new(FinCategory::terminal()), b4.clone()));
        let t = tilde(&f).unwrap();
        let id: Vec<Elem> = b4.elements().collect();
        assert!(is_order_isomorphism(t.presheaf().value(0).poset(), b4.poset(), &id));
    }

    #[test]
    fn epsilon_mu_on_f_ar() {
        let f = Arc::new(fixtures::f_ar());
        let t = tilde(&f).unwrap();
        let e = epsilon(&t).unwrap();
        let m = mu(&t).unwrap();
        // ε(x) = (F(h)x, x) in coordinate order (h, id)
        let fam: Vec<&[Elem]> = (0..3).map(|x| t.family(1, e.apply(1, x))).collect();
        assert_eq!(fam, [&[0, 0][..], &[1, 1][..], &[1, 2][..]]);
        assert_eq!(validate_transformation(&e).unwrap(), Mode::Natural);
        assert_eq!(validate_transformation(&m).unwrap(), Mode::Lax);
        // ε∘μ(x_h = 1, x_id = 0) = (0, 0)
        let y = t.index_of(1, &[1, 0]).unwrap();
        assert_eq!(t.family(1, e.apply(1, m.apply(1, y))), &[0, 0]);
        check_unit_counit(&t).unwrap();
    }

    #[test]
    fn adjunction_on_f_ar() {
        let f = Arc::new(fixtures::f_ar());
        let t = tilde(&f).unwrap();
        check_psi_identity(&t).unwrap();
        let tt = tilde(t.presheaf()).unwrap();
        let m = mu(&t).unwrap();
        let tm = tilde_on_lax(&m, &tt, &t).unwrap();
        assert_eq!(validate_transformation(&tm).unwrap(), Mode::Natural);
        assert_eq!(psi(&tm, &tt, &t).unwrap(), m);

        let alphas = enumerate_transformations(t.presheaf(), t.presheaf(), Mode::Natural, None, usize::MAX);
        assert!(alphas.len() > 1);
        for a in &alphas {
            check_tilde_of_psi(a, &t, &t).unwrap();
            for b in &alphas {
                check_psi_composition(a, b, &t, &t, &t).unwrap();
            }
        }
    }

    #[test]
    fn tilde_is_injective_and_monotone() {
        let f = Arc::new(fixtures::f_ar());
        let g = Arc::new(fixtures::a_const_bool2());
        let (tf, tg) = (tilde(&f).unwrap(), tilde(&g).unwrap());
        let laxes = enumerate_transformations(&f, &g, Mode::Lax, None, usize::MAX);
        assert!(laxes.len() >= 2);
        let tildes: Vec<_> = laxes.iter().map(|p| tilde_on_lax(p, &tf, &tg).unwrap()).collect();
        for (i, p) in laxes.iter().enumerate() {
            check_psi_of_tilde(p, &tf, &tg).unwrap();
            for (j, q) in laxes.iter().enumerate() {
                assert_eq!(i == j, tildes[i] == tildes[j]);
                if p.pointwise_leq(q) {
                    assert!(tildes[i].pointwise_leq(&tildes[j]));
                }
            }
        }
    }

    #[test]
    fn skip_mutation_breaks_slice_agreement() {
        let f = Arc::new(fixtures::f_ar());
        let t = with_skip(|| tilde(&f)).unwrap();
        assert!(check_tilde_vs_slice(&t).is_err());
        assert!(find_order_isomorphism(t.presheaf().value(1).poset(), tilde(&f).unwrap().presheaf().value(1).poset()).is_none());
    }

    fn with_skip<R>(f: impl FnOnce() -> R) -> R {
        crate::mutation::with_mutation(Some(Mutation::SkipLaxInequality), f)
    }
}
