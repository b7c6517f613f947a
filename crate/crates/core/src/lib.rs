//! Finite normal distributive lattices, their round-ideal completion, and
//! lax presheaves of such lattices over finite categories.
//!
//! The modules build on each other from the bottom up: [`order`] supplies
//! posets, lattices and ideals; [`ndl`] the well-inside relation and the
//! completion `C`; [`fincat`] categories and presheaves; [`lax`] lax limits
//! and the tilde construction; [`internal`] the pointwise descriptions of
//! internal constructions; [`equivalence`] the fixed-point correspondence.
//! [`gen`] and [`search`] drive randomized checks of all of it.

pub mod equivalence;
pub mod error;
pub mod fincat;
pub mod fixtures;
pub mod gen;
pub mod internal;
pub mod lax;
pub mod mutation;
pub mod ndl;
pub mod order;
pub mod search;

pub use error::{Error, Result};
pub use mutation::{with_mutation, Mutation};
