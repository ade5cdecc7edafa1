use thiserror::Error;

use crate::verify::CommutativityWitness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("lattice must have at least one dimension and every extent must be positive, got {0:?}")]
    InvalidLattice(Vec<usize>),

    #[error("alphabet size must be positive")]
    EmptyAlphabet,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("neighbourhood must be a nonempty list of distinct offsets")]
    InvalidNeighbourhood,

    #[error("region must be a nonempty list of distinct offsets")]
    InvalidRegion,

    #[error("state {state} is outside the alphabet 0..{size}")]
    StateOutOfRange { state: u32, size: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("rule table of arity {arity_in}->{arity_out} has wrong shape")]
    ArityMismatch { arity_in: usize, arity_out: usize },

    #[error("rule table over {size}^{arity} inputs is too large to tabulate")]
    TableTooLarge { size: usize, arity: usize },

    #[error("lattice extent {extent} along axis {axis} must exceed the neighbourhood diameter {diameter}")]
    LatticeTooSmall { axis: usize, extent: usize, diameter: i64 },

    #[error("cell order is not a permutation of all {cells} cells")]
    NotAPermutation { cells: usize },

    #[error("interaction table is not translation commutative at offset {:?}", .0.offset)]
    NotCommutative(Box<CommutativityWitness>),

    #[error("interaction table has not been validated as translation commutative")]
    Unvalidated,

    #[error("rule table is not a bijection")]
    NotBijective,

    #[error("alphabets differ: {0} vs {1}")]
    AlphabetMismatch(usize, usize),

    #[error("region configurations are not compatible: {0}")]
    Incompatible(String),

    #[error("two region configurations match at the same anchor (indices {0} and {1})")]
    AnchorAmbiguity(usize, usize),

    #[error("invalid colouring: {0}")]
    InvalidColouring(String),

    #[error("clock registers are inconsistent: {0}")]
    InconsistentClock(String),

    #[error("search space of {count} exceeds the ceiling {ceiling}")]
    CeilingExceeded { count: u128, ceiling: u128 },

    #[error("{0}")]
    Invalid(String),
}
