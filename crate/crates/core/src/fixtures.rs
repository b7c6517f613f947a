//! Small named lattices, categories and presheaves used throughout the tests.

use std::sync::Arc;

use crate::fincat::{FinCategory, LatPresheaf, Presheaf};
use crate::order::{downset_lattice, FinDistLattice, FinPoset, LatticeHom};

fn lattice(elements: &[&str], covers: &[(&str, &str)]) -> FinDistLattice {
    let p = FinPoset::build(elements, covers).expect("fixture poset");
    FinDistLattice::from_poset(p).expect("fixture lattice")
}

/// `0 < m < 1`
pub fn chain3() -> FinDistLattice {
    lattice(&["0", "m", "1"], &[("0", "m"), ("m", "1")])
}

pub fn bool2() -> FinDistLattice {
    lattice(&["0", "1"], &[("0", "1")])
}

/// The square `0 < p, q < 1`.
pub fn bool4() -> FinDistLattice {
    lattice(&["0", "p", "q", "1"], &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")])
}

/// Down-sets of `x < a`, `x < b`.
pub fn lambda5() -> FinDistLattice {
    let p = FinPoset::build(&["x", "a", "b"], &[("x", "a"), ("x", "b")]).unwrap();
    downset_lattice(&p)
}

/// The diamond with three atoms; a lattice, but not distributive.
pub fn m3_poset() -> FinPoset {
    FinPoset::build(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
    )
    .unwrap()
}

/// Subsets of an `n`-element set.
pub fn boolean(n: usize) -> FinDistLattice {
    downset_lattice(&FinPoset::discrete((0..n).map(|i| format!("p{i}")).collect()))
}

/// `0 ↦ 0`, `m ↦ 1`, `1 ↦ 1`
pub fn chain3_to_bool2() -> LatticeHom {
    LatticeHom::from_names(
        Arc::new(chain3()),
        Arc::new(bool2()),
        &[("0", "0"), ("m", "1"), ("1", "1")],
    )
    .unwrap()
}

/// Over the arrow `h: o0 → o1`: `o1 ↦ CHAIN3`, `o0 ↦ BOOL2`, restriction [`chain3_to_bool2`].
pub fn f_ar() -> LatPresheaf {
    let c = Arc::new(FinCategory::arrow());
    let h = c.mor_index("h").unwrap();
    let f = chain3_to_bool2();
    let mut maps = vec![Vec::new(); c.num_morphisms()];
    maps[h] = f.table().to_vec();
    Presheaf::new(c, vec![f.cod().clone(), f.dom().clone()], maps).unwrap()
}

/// Over the arrow: `o1 ↦ BOOL4`, `o0 ↦ BOOL2`, restriction `p ↦ 1`, `q ↦ 0`.
pub fn a_ar() -> LatPresheaf {
    let c = Arc::new(FinCategory::arrow());
    let h = c.mor_index("h").unwrap();
    let b4 = Arc::new(bool4());
    let b2 = Arc::new(bool2());
    let f = LatticeHom::from_names(b4, b2, &[("0", "0"), ("p", "1"), ("q", "0"), ("1", "1")]).unwrap();
    let mut maps = vec![Vec::new(); c.num_morphisms()];
    maps[h] = f.table().to_vec();
    Presheaf::new(c, vec![f.cod().clone(), f.dom().clone()], maps).unwrap()
}

/// Constant `BOOL2` over the arrow.
pub fn a_const_bool2() -> LatPresheaf {
    Presheaf::constant(Arc::new(FinCategory::arrow()), Arc::new(bool2()))
}

/// Constant `BOOL4` over the walking idempotent.
pub fn idempotent_const_bool4() -> LatPresheaf {
    Presheaf::constant(Arc::new(FinCategory::walking_idempotent()), Arc::new(bool4()))
}
