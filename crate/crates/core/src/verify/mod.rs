//! Decision procedures for the properties closed automata depend on.
//!
//! Each check is exhaustive over a finite set that is sufficient by
//! translation invariance, and returns a witness on failure so the
//! counterexample can be replayed.

mod colouring;
mod commutativity;
mod regions;
mod reversibility;

pub use colouring::{check_colouring, check_tile_fits};
pub use commutativity::{check_translation_commutative, replay_witness, CommutativityReport, CommutativityWitness};
pub use regions::{
    check_compatible, check_intersectable, CompatibilityReport, IntersectionWitness, PairWitness, Region, RegionConfig,
};
pub use reversibility::{check_bijection, invert_cca, invert_table};
