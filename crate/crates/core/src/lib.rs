//! Closed cellular automata.
//!
//! A closed cellular automaton evolves in two phases per step. In the
//! interaction phase a table `f: Σ^N → Σ^N` is applied around every cell,
//! one neighbourhood at a time, rewriting the cells in place. In the update
//! phase a table `g: Σ → Σ` is applied to every cell on its own. The
//! interaction phase has a well-defined result only when every two
//! translates of `f` commute, which this crate checks exhaustively.
//!
//! The crate provides:
//!
//! - the shared vocabulary of lattices, configurations and rule tables
//!   ([`lattice`], [`rule`]);
//! - traditional and closed automata with their global steps and the
//!   reduction of a closed automaton to a traditional one ([`automata`]);
//! - decision procedures with witnesses: translation commutativity,
//!   reversibility and inversion, region compatibility, colourings
//!   ([`verify`]);
//! - constructions that compile other models into closed automata
//!   ([`compile`]);
//! - exhaustive search for closed automata realising a global map
//!   ([`search`]).
//!
//! Lattices are finite periodic tori. Every result holds on the torus it was
//! computed on.
//!
//! ```
//! use cca::automata::TraditionalCa;
//! use cca::compile::{ca_to_cca, ProductAlphabet};
//! use cca::lattice::Configuration;
//! use cca::rule::Alphabet;
//!
//! let bits = Alphabet::new(2)?;
//! let shift = TraditionalCa::shift_right(bits.clone())?;
//! let closed = ca_to_cca(&shift)?;
//!
//! let registers = ProductAlphabet::new(&[2, 2])?;
//! let first = Configuration::ring_from_str(bits.clone(), "0011")?;
//! let scratch = Configuration::ring_from_str(bits, "0000")?;
//! let next = closed.step(&registers.pack_configs(&[&first, &scratch])?)?;
//! assert_eq!(registers.project(&next, 0)?, shift.step(&first)?);
//! # Ok::<(), cca::Error>(())
//! ```

pub mod automata;
pub mod compile;
mod error;
pub mod lattice;
pub mod rule;
pub mod search;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/closed-automata.md")]
    mod closed_automata {}
    #[doc = include_str!("../../../book/src/commutativity.md")]
    mod commutativity {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
    #[doc = include_str!("../../../book/src/reversibility.md")]
    mod reversibility {}
    #[doc = include_str!("../../../book/src/partitioned.md")]
    mod partitioned {}
    #[doc = include_str!("../../../book/src/coloured.md")]
    mod coloured {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/files.md")]
    mod files {}
}
