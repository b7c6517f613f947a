//! Finite posets, distributive lattices, lattice homomorphisms and ideals.

mod ideal;
mod lattice;
mod poset;

pub use ideal::{
    direct_image_ideal, downclose, ideal_join, ideal_lattice, ideals, is_ideal, Ideal, IdealLattice,
};
pub(crate) use ideal::lattice_of_ideals;
pub use lattice::{
    build_lattice, check_hom, downset_lattice, distributive_lattices_up_to, enumerate_distributive_lattices, find_isomorphism,
    find_order_isomorphism, for_each_lattice_hom, is_order_isomorphism, lattice_homs,
    FinDistLattice, LatticeHom,
};
pub use poset::{check_monotone, monotone_maps, posets_up_to_iso, posets_with_downsets_at_most, Elem, ElemSet, FinPoset, MonotoneMap};
