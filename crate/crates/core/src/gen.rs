//! Seeded random instances: categories, presheaves, diagrams and transformations.
//!
//! Everything is drawn from small fixed corpora with a caller-supplied RNG,
//! so a seed determines the instance. Constructions whose tilde values would
//! exceed [`Bounds::max_tilde`] are redrawn.

use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fincat::{
    enumerate_transformations, validate_category, Carrier, FinCategory, FinSet, LatPresheaf, Mode,
    MorId, PosPresheaf, Presheaf, RawCategory, SetPresheaf, TransData,
};
use crate::lax::{tilde, Diagram, Tilde};
use crate::ndl::is_normal;
use crate::order::{
    downset_lattice, enumerate_distributive_lattices, for_each_lattice_hom, lattice_homs, monotone_maps, posets_up_to_iso,
    Elem, FinDistLattice, FinPoset,
};

/// Size limits for generated instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_objects: usize,
    /// Including identities.
    pub max_morphisms: usize,
    pub max_lattice: usize,
    pub max_set: usize,
    pub max_tilde: usize,
}

impl Bounds {
    pub const LIMIT_OBJECTS: usize = 4;
    pub const LIMIT_LATTICE: usize = 8;

    pub fn new(max_objects: usize, max_lattice: usize) -> Result<Self> {
        if !(1..=Self::LIMIT_OBJECTS).contains(&max_objects) {
            return Err(Error::Config(format!(
                "max objects must be between 1 and {}, got {max_objects}",
                Self::LIMIT_OBJECTS
            )));
        }
        if !(1..=Self::LIMIT_LATTICE).contains(&max_lattice) {
            return Err(Error::Config(format!(
                "max lattice size must be between 1 and {}, got {max_lattice}",
                Self::LIMIT_LATTICE
            )));
        }
        Ok(Bounds { max_objects, max_morphisms: 8, max_lattice, max_set: 3, max_tilde: 96 })
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::new(3, 6).unwrap()
    }
}

const ATTEMPTS: usize = 64;

fn raw(objects: &[&str], morphisms: &[(&str, &str, &str)], compose: &[(&str, &str, &str)]) -> RawCategory {
    let s = |t: &(&str, &str, &str)| (t.0.to_owned(), t.1.to_owned(), t.2.to_owned());
    RawCategory {
        objects: objects.iter().map(|o| o.to_string()).collect(),
        morphisms: morphisms.iter().map(s).collect(),
        compose: compose.iter().map(s).collect(),
    }
}

/// Hand-written shapes that thin and free categories miss.
fn special_categories() -> &'static [FinCategory] {
    static CATS: OnceLock<Vec<FinCategory>> = OnceLock::new();
    CATS.get_or_init(|| {
        let raws = [
            raw(&["o0"], &[("e", "o0", "o0")], &[("e", "e", "e")]),
            raw(&["o0"], &[("g", "o0", "o0")], &[("g", "g", "id_o0")]),
            raw(
                &["o0"],
                &[("e", "o0", "o0"), ("f", "o0", "o0")],
                &[("e", "e", "e"), ("f", "f", "f"), ("e", "f", "e"), ("f", "e", "f")],
            ),
            raw(
                &["o0"],
                &[("g", "o0", "o0"), ("g2", "o0", "o0")],
                &[("g", "g", "g2"), ("g", "g2", "id_o0"), ("g2", "g", "id_o0"), ("g2", "g2", "g")],
            ),
            // idempotent on the target of an arrow: o0 stays initial
            raw(
                &["o0", "o1"],
                &[("h", "o0", "o1"), ("e", "o1", "o1")],
                &[("e", "e", "e"), ("e", "h", "h")],
            ),
            // idempotent on the source of an arrow
            raw(
                &["o0", "o1"],
                &[("e", "o0", "o0"), ("h", "o0", "o1"), ("k", "o0", "o1")],
                &[("e", "e", "e"), ("h", "e", "k"), ("k", "e", "k")],
            ),
        ];
        raws.iter().map(|r| validate_category(r).expect("special category")).collect()
    })
}

fn random_free<R: Rng + ?Sized>(rng: &mut R, n: usize, max_morphisms: usize) -> Option<FinCategory> {
    let names: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for _ in 0..rng.gen_range(0..=2usize) {
                edges.push((format!("u{}", edges.len()), names[i].clone(), names[j].clone()));
            }
        }
    }
    let objs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let es: Vec<(&str, &str, &str)> = edges.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
    let c = FinCategory::free_on_dag(&objs, &es).ok()?;
    (c.num_morphisms() <= max_morphisms).then_some(c)
}

fn random_thin<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FinCategory {
    let posets = posets_up_to_iso(n);
    let p = posets.choose(rng).expect("posets exist");
    let named = FinPoset::from_leq((0..n).map(|i| format!("o{i}")).collect(), |a, b| p.leq(a, b)).unwrap();
    FinCategory::thin(&named)
}

/// A random finite category within the bounds.
pub fn random_category<R: Rng + ?Sized>(rng: &mut R, bounds: &Bounds) -> FinCategory {
    loop {
        let n = rng.gen_range(1..=bounds.max_objects);
        let c = match rng.gen_range(0..4) {
            0 => Some(random_thin(rng, n)),
            1 => random_free(rng, n, bounds.max_morphisms),
            2 => special_categories().choose(rng).cloned(),
            _ => Some(FinCategory::discrete(n)),
        };
        if let Some(c) = c {
            if c.num_objects() <= bounds.max_objects && c.num_morphisms() <= bounds.max_morphisms {
                return c;
            }
        }
    }
}

/// A random category with an initial object.
pub fn random_category_with_initial<R: Rng + ?Sized>(rng: &mut R, bounds: &Bounds) -> FinCategory {
    loop {
        let c = random_category(rng, bounds);
        if c.initial_object().is_some() {
            return c;
        }
    }
}

/// Distributive lattices with at most [`Bounds::LIMIT_LATTICE`] elements:
/// all with up to four join-irreducibles, plus the longer chains.
pub fn lattice_corpus() -> &'static [FinDistLattice] {
    static CORPUS: OnceLock<Vec<FinDistLattice>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut out: Vec<FinDistLattice> = (0..=4)
            .flat_map(enumerate_distributive_lattices)
            .filter(|l| l.len() <= Bounds::LIMIT_LATTICE)
            .collect();
        for n in 5..Bounds::LIMIT_LATTICE {
            let p = FinPoset::from_leq((0..n).map(|i| format!("j{i}")).collect(), |a, b| a <= b).unwrap();
            out.push(downset_lattice(&p));
        }
        out.sort_by_key(|l| l.len());
        out
    })
}

fn lattices(max: usize, normal_only: bool) -> Vec<Arc<FinDistLattice>> {
    lattice_corpus()
        .iter()
        .filter(|l| l.len() <= max && (!normal_only || is_normal(l).is_normal()))
        .map(|l| Arc::new(l.clone()))
        .collect()
}

fn booleans(max: usize) -> Vec<Arc<FinDistLattice>> {
    (0..=3)
        .map(crate::fixtures::boolean)
        .filter(|l| l.len() <= max)
        .map(Arc::new)
        .collect()
}

/// Chooses restriction maps by depth-first search over `candidates(dom value, cod value)`
/// so that composites are respected.
fn random_functor<V: Carrier, R: Rng + ?Sized>(
    rng: &mut R,
    c: &Arc<FinCategory>,
    values: Vec<Arc<V>>,
    candidates: &dyn Fn(&V, &V) -> Vec<Vec<Elem>>,
) -> Option<Presheaf<V>> {
    let order: Vec<MorId> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
    let mut options: Vec<Vec<Vec<Elem>>> = order
        .iter()
        .map(|&m| candidates(&values[c.cod(m)], &values[c.dom(m)]))
        .collect();
    for o in options.iter_mut() {
        o.shuffle(rng);
    }
    let mut maps: Vec<Option<Vec<Elem>>> = vec![None; c.num_morphisms()];
    for o in c.objects() {
        maps[c.identity(o)] = Some((0..values[o].size()).collect());
    }
    let mut budget = 20_000usize;
    if functor_rec(c, &order, &options, 0, &mut maps, &mut budget) {
        let maps = maps.into_iter().map(|m| m.unwrap()).collect();
        Presheaf::new(c.clone(), values, maps).ok()
    } else {
        None
    }
}

fn functor_rec(
    c: &FinCategory,
    order: &[MorId],
    options: &[Vec<Vec<Elem>>],
    k: usize,
    maps: &mut Vec<Option<Vec<Elem>>>,
    budget: &mut usize,
) -> bool {
    if k == order.len() {
        return true;
    }
    let m = order[k];
    for cand in &options[k] {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        maps[m] = Some(cand.clone());
        let consistent = c.composable_pairs().all(|(g, f)| {
            let gf = c.compose(g, f).unwrap();
            match (&maps[g], &maps[f], &maps[gf]) {
                (Some(mg), Some(mf), Some(mgf)) => mg.iter().zip(mgf).all(|(&y, &z)| mf[y] == z),
                _ => true,
            }
        });
        if consistent && functor_rec(c, order, options, k + 1, maps, budget) {
            return true;
        }
    }
    maps[m] = None;
    false
}

fn random_lattice_presheaf_from<R: Rng + ?Sized>(
    rng: &mut R,
    c: &Arc<FinCategory>,
    pool: &[Arc<FinDistLattice>],
) -> LatPresheaf {
    for _ in 0..ATTEMPTS {
        let values: Vec<Arc<FinDistLattice>> =
            c.objects().map(|_| pool.choose(rng).unwrap().clone()).collect();
        if let Some(p) = random_functor(rng, c, values, &|d, t| lattice_homs(d, t)) {
            return p;
        }
    }
    Presheaf::constant(c.clone(), pool.choose(rng).unwrap().clone())
}

/// Lattice-valued presheaf over `c`.
pub fn random_lattice_presheaf<R: Rng + ?Sized>(rng: &mut R, c: &Arc<FinCategory>, bounds: &Bounds) -> LatPresheaf {
    random_lattice_presheaf_from(rng, c, &lattices(bounds.max_lattice, false))
}

/// Presheaf of normal lattices over `c`.
pub fn random_ndl_presheaf<R: Rng + ?Sized>(rng: &mut R, c: &Arc<FinCategory>, bounds: &Bounds) -> LatPresheaf {
    random_lattice_presheaf_from(rng, c, &lattices(bounds.max_lattice, true))
}

/// Presheaf of finite Boolean algebras over `c`.
pub fn random_boolean_presheaf<R: Rng + ?Sized>(rng: &mut R, c: &Arc<FinCategory>, bounds: &Bounds) -> LatPresheaf {
    random_lattice_presheaf_from(rng, c, &booleans(bounds.max_lattice))
}

fn fits<V: crate::lax::FamilyCarrier>(p: &Arc<Presheaf<V>>, bounds: &Bounds) -> Option<Tilde<V>> {
    // A generous product bound first, to avoid enumerating huge products.
    let c = p.base();
    let product_ok = c.objects().all(|a| {
        c.arrows_into(a)
            .iter()
            .try_fold(1usize, |acc, &f| acc.checked_mul(p.value(c.dom(f)).size()))
            .is_some_and(|n| n <= 1 << 16)
    });
    if !product_ok {
        return None;
    }
    let t = tilde(p).ok()?;
    t.presheaf().values().iter().all(|v| v.size() <= bounds.max_tilde).then_some(t)
}

/// A random base with a lattice presheaf drawn by `draw`, redrawn until its
/// tilde fits within the bounds.
fn with_small_tilde<R: Rng + ?Sized>(
    rng: &mut R,
    bounds: &Bounds,
    draw: &dyn Fn(&mut R, &Arc<FinCategory>, &Bounds) -> LatPresheaf,
) -> (Arc<LatPresheaf>, Tilde<FinDistLattice>) {
    for _ in 0..ATTEMPTS {
        let c = Arc::new(random_category(rng, bounds));
        let p = Arc::new(draw(rng, &c, bounds));
        if let Some(t) = fits(&p, bounds) {
            return (p, t);
        }
    }
    let p = Arc::new(draw(rng, &Arc::new(FinCategory::arrow()), bounds));
    let t = tilde(&p).expect("tilde over the arrow");
    (p, t)
}

/// A lattice presheaf with its tilde.
pub fn random_presheaf_with_tilde<R: Rng + ?Sized>(rng: &mut R, bounds: &Bounds) -> (Arc<LatPresheaf>, Tilde<FinDistLattice>) {
    with_small_tilde(rng, bounds, &|r, c, b| random_lattice_presheaf(r, c, b))
}

/// A presheaf of finite Boolean algebras whose tilde fits the bounds.
pub fn random_kr_presheaf<R: Rng + ?Sized>(rng: &mut R, bounds: &Bounds) -> Arc<LatPresheaf> {
    with_small_tilde(rng, bounds, &|r, c, b| random_boolean_presheaf(r, c, b)).0
}

/// Two Boolean presheaves over one base.
pub fn random_kr_pair<R: Rng + ?Sized>(rng: &mut R, bounds: &Bounds) -> (Arc<LatPresheaf>, Arc<LatPresheaf>) {
    let (a, _) = with_small_tilde(rng, bounds, &|r, c, b| random_boolean_presheaf(r, c, b));
    for _ in 0..ATTEMPTS {
        let b = Arc::new(random_boolean_presheaf(rng, a.base(), bounds));
        if fits(&b, bounds).is_some() {
            return (a, b);
        }
    }
    (a.clone(), a)
}

/// Presheaf of normal lattices whose tilde and `C`-tilde stay small.
pub fn random_ndl_presheaf_small<R: Rng + ?Sized>(rng: &mut R, bounds: &Bounds) -> Arc<LatPresheaf> {
    with_small_tilde(rng, bounds, &|r, c, b| random_ndl_presheaf(r, c, b)).0
}

/// `F`, `G` over one base with their tildes.
pub struct PresheafPair {
    pub f: Arc<LatPresheaf>,
    pub g: Arc<LatPresheaf>,
    pub tf: Tilde<FinDistLattice>,
    pub tg: Tilde<FinDistLattice>,
}

pub fn random_presheaf_pair<R: Rng + ?Sized>(rng: &mut R, bounds: &Bounds) -> PresheafPair {
    loop {
        let (f, tf) = random_presheaf_with_tilde(rng, bounds);
        for _ in 0..ATTEMPTS {
            let g = Arc::new(random_lattice_presheaf(rng, f.base(), bounds));
            if let Some(tg) = fits(&g, bounds) {
                return PresheafPair { f, g, tf, tg };
            }
        }
    }
}

/// Reservoir sample of `k` homomorphisms among the first `scan` enumerated.
pub fn sample_lattice_homs<R: Rng + ?Sized>(
    rng: &mut R,
    dom: &FinDistLattice,
    cod: &FinDistLattice,
    k: usize,
    scan: usize,
) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = Vec::with_capacity(k);
    let mut seen = 0usize;
    for_each_lattice_hom(dom, cod, |m| {
        if out.len() < k {
            out.push(m.to_vec());
        } else {
            let r = rng.gen_range(0..=seen);
            if r < k {
                out[r] = m.to_vec();
            }
        }
        seen += 1;
        seen < scan
    });
    out
}

/// A random transformation of the given mode, if one exists.
pub fn random_transformation<R: Rng + ?Sized>(
    rng: &mut R,
    f: &Arc<LatPresheaf>,
    g: &Arc<LatPresheaf>,
    mode: Mode,
) -> Option<TransData<FinDistLattice>> {
    let c = f.base();
    let candidates = c
        .objects()
        .map(|a| {
            let mut homs = sample_lattice_homs(rng, f.value(a), g.value(a), 64, 4096);
            homs.shuffle(rng);
            homs
        })
        .collect();
    enumerate_transformations(f, g, mode, Some(candidates), 1).pop()
}

/// A diagram of normal lattices over an index category with an initial object.
pub fn random_ndl_diagram<R: Rng + ?Sized>(rng: &mut R, bounds: &Bounds) -> Diagram<FinDistLattice> {
    let j = random_category_with_initial(rng, bounds);
    let op = Arc::new(j.opposite());
    Diagram::from_presheaf(random_ndl_presheaf(rng, &op, bounds))
}

fn functions(n: usize, m: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..m).map(move |y| {
                    let mut g = f.clone();
                    g.push(y);
                    g
                })
            })
            .collect();
    }
    out
}

/// Set-valued presheaf with `|A(a)| ≤ max_set`.
pub fn random_set_presheaf<R: Rng + ?Sized>(rng: &mut R, bounds: &Bounds) -> SetPresheaf {
    loop {
        let c = Arc::new(random_category(rng, bounds));
        for _ in 0..8 {
            let values: Vec<Arc<FinSet>> = c
                .objects()
                .map(|_| {
                    let n = rng.gen_range(0..=bounds.max_set);
                    Arc::new(FinSet::new((0..n).map(|i| format!("s{i}")).collect()).unwrap())
                })
                .collect();
            if let Some(p) = random_functor(rng, &c, values, &|d, t| functions(d.len(), t.len())) {
                if powerset_fits(&p, bounds) {
                    return p;
                }
            }
        }
    }
}

fn powerset_fits(p: &SetPresheaf, bounds: &Bounds) -> bool {
    let c = p.base();
    c.objects().all(|a| {
        c.arrows_into(a)
            .iter()
            .map(|&f| 1usize << p.value(c.dom(f)).len())
            .try_fold(1usize, |acc, n| acc.checked_mul(n))
            .is_some_and(|n| n <= 1 << 16)
    }) && bounds.max_set <= 6
}

/// Poset-valued presheaf with at most three points per value.
pub fn random_poset_presheaf<R: Rng + ?Sized>(rng: &mut R, bounds: &Bounds) -> PosPresheaf {
    let pool: Vec<Arc<FinPoset>> = (1..=3.min(bounds.max_lattice))
        .flat_map(posets_up_to_iso)
        .map(Arc::new)
        .collect();
    loop {
        let c = Arc::new(random_category(rng, bounds));
        for _ in 0..8 {
            let values: Vec<Arc<FinPoset>> = c.objects().map(|_| pool.choose(rng).unwrap().clone()).collect();
            if let Some(p) = random_functor(rng, &c, values, &|d, t| monotone_maps(d, t)) {
                return p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::validate_transformation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bounds_validation() {
        assert!(matches!(Bounds::new(0, 6), Err(Error::Config(_))));
        assert!(matches!(Bounds::new(3, 0), Err(Error::Config(_))));
        assert!(Bounds::new(3, 6).is_ok());
    }

    #[test]
    fn categories_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = Bounds::default();
        for _ in 0..200 {
            let c = random_category(&mut rng, &b);
            assert!(c.num_objects() <= 3 && c.num_morphisms() <= 8);
            let i = random_category_with_initial(&mut rng, &b);
            assert!(i.initial_object().is_some());
        }
    }

    #[test]
    fn presheaves_are_valid_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let b = Bounds::default();
        for _ in 0..30 {
            let (f, t) = random_presheaf_with_tilde(&mut rng, &b);
            f.validate().unwrap();
            assert!(f.values().iter().all(|v| v.len() <= 6));
            assert!(t.presheaf().values().iter().all(|v| v.len() <= b.max_tilde));
            let k = random_kr_presheaf(&mut rng, &b);
            assert!(k.values().iter().all(|v| v.is_boolean()));
            let s = random_set_presheaf(&mut rng, &b);
            assert!(s.values().iter().all(|v| v.len() <= 3));
            random_poset_presheaf(&mut rng, &b).validate().unwrap();
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let b = Bounds::default();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..10).map(|_| random_presheaf_with_tilde(&mut rng, &b).0).collect::<Vec<_>>()
        };
        assert_eq!(run(3), run(3));
    }

    #[test]
    fn random_lax_transformations_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = Bounds::default();
        let mut found = 0;
        for _ in 0..20 {
            let pair = random_presheaf_pair(&mut rng, &b);
            if let Some(t) = random_transformation(&mut rng, &pair.f, &pair.g, Mode::Lax) {
                validate_transformation(&t).unwrap();
                found += 1;
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn ndl_diagrams_have_initial_objects() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let d = random_ndl_diagram(&mut rng, &Bounds::default());
            assert!(d.index().initial_object().is_some());
        }
    }
}
