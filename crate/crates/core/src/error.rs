use thiserror::Error;

/// Errors raised by construction and validation across the crate.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("order relation is cyclic: `{0}` <= `{1}` <= `{0}`")]
    Cycle(String, String),
    #[error("order relation is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("the empty poset carries no lattice structure")]
    EmptyLattice,
    #[error("`{0}` and `{1}` have no {2}")]
    NotALattice(String, String, &'static str),
    #[error("distributivity fails at ({0}, {1}, {2})")]
    NotDistributive(String, String, String),
    #[error("not a lattice homomorphism: {0}")]
    NotAHom(String),
    #[error("not a monotone map: {0}")]
    NotMonotone(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("lattice is not normal: cover ({0}, {1}) admits no separating pair")]
    NotNormal(String, String),
    #[error("`{0}` is not well inside `{1}`")]
    NotWellInside(String, String),
    #[error("lattice is not compact regular: {0}")]
    NotCompactRegular(String),
    #[error("not a round ideal: {0}")]
    NotRoundIdeal(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("identity law fails: {0}")]
    Identity(String),
    #[error("associativity fails: {0}")]
    Associativity(String),
    #[error("composition table is not closed: {0}")]
    MissingComposite(String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("not lax natural: square at `{morphism}` fails on `{element}`")]
    NotLax { morphism: String, element: String },
    #[error("not natural: square at `{morphism}` fails on `{element}`")]
    NotNatural { morphism: String, element: String },
    #[error("index category has no initial object")]
    NoInitialObject,
    #[error("isomorphism check failed: {0}")]
    IsoFailure(String),
    #[error("construction too large: {0}")]
    TooLarge(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
