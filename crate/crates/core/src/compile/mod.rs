//! Constructions that produce closed automata.
//!
//! - [`ca_to_cca`]: any traditional automaton, simulated with a scratch
//!   register per cell.
//! - [`rca_to_rcca`]: a reversible automaton given its forward and reverse
//!   rules, simulated reversibly by difference addition.
//! - [`partitioned_to_cca`] and [`margolus_cca`]: block rules selected by a
//!   control register.
//! - [`coloured_to_cca`]: colour-scheduled updates driven by a per-cell
//!   clock.

mod coloured;
mod partitioned;
mod product;
mod two_register;

pub use coloured::{coloured_to_cca, ColourSchedule, ColouredCca};
pub use partitioned::{margolus_cca, margolus_initial, partitioned_to_cca};
pub use product::{AdditionRelation, ProductAlphabet};
pub use two_register::{ca_to_cca, rca_to_rcca};
