//! Exhaustive search for closed automata realising a given global map.
//!
//! Candidates are every (interaction, update) table pair over a small
//! alphabet and neighbourhood, in lexicographic table order, optionally
//! restricted to bijections. Candidates whose interaction is not
//! translation commutative are dropped before the global map is compared,
//! since the commutativity check is cheap next to an exhaustive pass over
//! configurations.
//!
//! Searches run on finite rings. An empty result is evidence that no
//! closed automaton of the searched shape realises the target; it is not a
//! proof about the infinite lattice, where wrap-around is unavailable.

use std::fmt;
use std::time::{Duration, Instant};

use itertools::Itertools;

use crate::automata::{step_cca_cells, ClosedCa};
use crate::error::{Error, Result};
use crate::lattice::{CellPoint, Configuration, Lattice, Neighbourhood, Stencil};
use crate::rule::{increment, row_count, Alphabet, RuleTable, State};
use crate::verify::check_translation_commutative;

/// Default bound on the number of candidates a search may enumerate.
pub const DEFAULT_CANDIDATE_CEILING: u128 = 1_000_000_000;

/// Default bound on the configurations compared per lattice.
pub const DEFAULT_CONFIGURATION_CEILING: u128 = 10_000_000;

/// The global map a search tries to realise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetMap {
    /// `σ(x, t+1) = σ(x − e₀, t)`: everything moves one cell along the first
    /// axis.
    ShiftRight,
    Identity,
    /// Explicit maps, one per lattice: `images[r]` is the rank of the image
    /// of the configuration of rank `r` (see [`Configuration::rank`]).
    Explicit(Vec<ExplicitMap>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitMap {
    pub dims: Vec<usize>,
    pub images: Vec<u128>,
}

impl TargetMap {
    /// The image of `c`, or `None` when an explicit target does not cover
    /// this lattice.
    pub fn apply(&self, c: &Configuration) -> Option<Configuration> {
        match self {
            TargetMap::ShiftRight => Some(c.translate(&CellPoint::unit(c.lattice().dim(), 0))),
            TargetMap::Identity => Some(c.clone()),
            TargetMap::Explicit(maps) => {
                let m = maps.iter().find(|m| m.dims == c.lattice().dims())?;
                let image = *m.images.get(usize::try_from(c.rank()).ok()?)?;
                Some(Configuration::from_rank(c.lattice().clone(), c.alphabet().clone(), image))
            }
        }
    }
}

impl fmt::Display for TargetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetMap::ShiftRight => write!(f, "shift-right"),
            TargetMap::Identity => write!(f, "identity"),
            TargetMap::Explicit(maps) => write!(f, "explicit map on {} lattice(s)", maps.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub alphabet: Alphabet,
    pub neigh: Neighbourhood,
    pub require_reversible: bool,
    pub target: TargetMap,
    pub lattices: Vec<Lattice>,
    pub candidate_ceiling: u128,
    pub configuration_ceiling: u128,
}

impl SearchSpec {
    /// A one-dimensional search over the given ring sizes with default
    /// ceilings.
    pub fn rings(
        alphabet: Alphabet,
        neigh: Neighbourhood,
        require_reversible: bool,
        target: TargetMap,
        rings: &[usize],
    ) -> Result<Self> {
        let lattices = rings.iter().map(|&n| Lattice::ring(n)).collect::<Result<Vec<_>>>()?;
        Ok(SearchSpec {
            alphabet,
            neigh,
            require_reversible,
            target,
            lattices,
            candidate_ceiling: DEFAULT_CANDIDATE_CEILING,
            configuration_ceiling: DEFAULT_CONFIGURATION_CEILING,
        })
    }

    fn check(&self) -> Result<()> {
        if self.lattices.is_empty() {
            return Err(Error::Invalid("a search needs at least one lattice".into()));
        }
        for lat in &self.lattices {
            lat.check_supports(&self.neigh)?;
        }
        Ok(())
    }

    /// Number of (interaction, update) pairs the search enumerates, or
    /// `None` if it overflows.
    pub fn candidate_count(&self) -> Option<u128> {
        let q = self.alphabet.size() as u128;
        let rows = q.checked_pow(u32::try_from(self.neigh.len()).ok()?)?;
        if self.require_reversible {
            Some(factorial(rows)?.checked_mul(factorial(q)?)?)
        } else {
            let interactions = q.checked_pow(u32::try_from(rows.checked_mul(self.neigh.len() as u128)?).ok()?)?;
            interactions.checked_mul(q.checked_pow(u32::try_from(q).ok()?)?)
        }
    }
}

fn factorial(n: u128) -> Option<u128> {
    (1..=n).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub candidates_examined: u128,
    pub commutative_count: u128,
    pub matches: Vec<ClosedCa>,
    pub elapsed: Duration,
    pub target: TargetMap,
    pub lattices: Vec<Lattice>,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rings: Vec<String> = self.lattices.iter().map(|l| format!("{:?}", l.dims())).collect();
        writeln!(f, "target {}", self.target)?;
        writeln!(f, "lattices {}", rings.join(" "))?;
        writeln!(f, "candidates {}", self.candidates_examined)?;
        writeln!(f, "commutative {}", self.commutative_count)?;
        writeln!(f, "matches {}", self.matches.len())?;
        writeln!(f, "elapsed_ms {}", self.elapsed.as_millis())?;
        write!(
            f,
            "note: finite-lattice evidence only, not a proof; the result covers the listed lattices and nothing beyond them"
        )
    }
}

/// Lexicographic stream of interaction tables.
fn interaction_tables(
    alphabet: &Alphabet,
    arity: usize,
    bijective: bool,
) -> Result<Box<dyn Iterator<Item = RuleTable>>> {
    let q = alphabet.size();
    let rows = row_count(q, arity)?;
    let alphabet = alphabet.clone();
    if bijective {
        Ok(Box::new((0..rows).permutations(rows).map(move |perm| {
            let entries = perm.iter().flat_map(|&r| tuple(r, q, arity)).collect();
            RuleTable::from_entries(alphabet.clone(), arity, arity, entries).expect("valid permutation table")
        })))
    } else {
        let mut digits = vec![0 as State; rows * arity];
        let mut done = false;
        Ok(Box::new(std::iter::from_fn(move || {
            if done {
                return None;
            }
            let t = RuleTable::from_entries(alphabet.clone(), arity, arity, digits.clone()).expect("valid table");
            done = !increment(&mut digits, q);
            Some(t)
        })))
    }
}

fn tuple(mut r: usize, q: usize, arity: usize) -> Vec<State> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = (r % q) as State;
        r /= q;
    }
    t
}

fn update_tables(alphabet: &Alphabet, bijective: bool) -> Vec<RuleTable> {
    let q = alphabet.size();
    let images: Vec<Vec<State>> = if bijective {
        (0..q as State).permutations(q).collect()
    } else {
        (0..q).map(|_| 0..q as State).multi_cartesian_product().collect()
    };
    images.into_iter().map(|img| RuleTable::unary(alphabet.clone(), &img).expect("valid update")).collect()
}

struct Enumeration {
    tables: Box<dyn Iterator<Item = RuleTable>>,
    updates: Vec<RuleTable>,
    alphabet: Alphabet,
    neigh: Neighbourhood,
    examined: u128,
    commutative: u128,
}

impl Enumeration {
    fn new(spec: &SearchSpec) -> Result<Self> {
        spec.check()?;
        let count = spec.candidate_count().unwrap_or(u128::MAX);
        if count > spec.candidate_ceiling {
            return Err(Error::CeilingExceeded { count, ceiling: spec.candidate_ceiling });
        }
        Ok(Enumeration {
            tables: interaction_tables(&spec.alphabet, spec.neigh.len(), spec.require_reversible)?,
            updates: update_tables(&spec.alphabet, spec.require_reversible),
            alphabet: spec.alphabet.clone(),
            neigh: spec.neigh.clone(),
            examined: 0,
            commutative: 0,
        })
    }

    /// Next interaction table that passes the commutativity check, paired
    /// with every update, as validated automata.
    fn next_batch(&mut self) -> Option<Vec<ClosedCa>> {
        let u = self.updates.len() as u128;
        for table in self.tables.by_ref() {
            self.examined += u;
            let ok = check_translation_commutative(&table, &self.neigh, &self.alphabet).map(|r| r.ok).unwrap_or(false);
            if !ok {
                continue;
            }
            self.commutative += u;
            let batch = self
                .updates
                .iter()
                .map(|g| {
                    ClosedCa::unvalidated(self.alphabet.clone(), self.neigh.clone(), table.clone(), g.clone())
                        .and_then(ClosedCa::validate)
                        .expect("checked commutative")
                })
                .collect();
            return Some(batch);
        }
        None
    }
}

/// Every validated closed automaton of the spec's shape, in lexicographic
/// (interaction, update) order.
pub fn enumerate_ccas(spec: &SearchSpec) -> Result<impl Iterator<Item = ClosedCa>> {
    let mut e = Enumeration::new(spec)?;
    Ok(std::iter::from_fn(move || e.next_batch()).flatten())
}

/// Global-map comparison against a target over one lattice, with the
/// stencil and scratch buffers reused across configurations.
struct MapCheck<'a> {
    lattice: &'a Lattice,
    target_images: Vec<Vec<State>>,
}

impl<'a> MapCheck<'a> {
    fn new(target: &TargetMap, lattice: &'a Lattice, alphabet: &Alphabet, ceiling: u128) -> Result<Self> {
        let count = Configuration::space_size(lattice, alphabet).unwrap_or(u128::MAX);
        if count > ceiling {
            return Err(Error::CeilingExceeded { count, ceiling });
        }
        let target_images = Configuration::all(lattice, alphabet)
            .map(|c| {
                target.apply(&c).map(Configuration::into_cells).ok_or_else(|| {
                    Error::Invalid(format!("target {target} does not cover lattice {:?}", lattice.dims()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MapCheck { lattice, target_images })
    }

    /// Rank of the first configuration where `cca` and the target differ.
    fn first_mismatch(&self, cca: &ClosedCa) -> Option<u128> {
        let stencil = Stencil::new(self.lattice, cca.neighbourhood().offsets());
        let q = cca.alphabet().size() as u128;
        let n = self.lattice.cell_count();
        let mut cells = vec![0 as State; n];
        for (rank, image) in self.target_images.iter().enumerate() {
            let mut r = rank as u128;
            for c in cells.iter_mut().rev() {
                *c = (r % q) as State;
                r /= q;
            }
            step_cca_cells(cca, &stencil, &mut cells);
            if &cells != image {
                return Some(rank as u128);
            }
        }
        None
    }
}

/// The first configuration (in rank order) on which one step of `cca`
/// differs from the target, if any.
pub fn global_map_witness(
    cca: &ClosedCa,
    target: &TargetMap,
    lattice: &Lattice,
    ceiling: u128,
) -> Result<Option<Configuration>> {
    if !cca.is_validated() {
        return Err(Error::Unvalidated);
    }
    lattice.check_supports(cca.neighbourhood())?;
    let check = MapCheck::new(target, lattice, cca.alphabet(), ceiling)?;
    Ok(check.first_mismatch(cca).map(|r| Configuration::from_rank(lattice.clone(), cca.alphabet().clone(), r)))
}

/// Whether one step of `cca` equals the target on every configuration of
/// `lattice`.
pub fn global_map_equals(cca: &ClosedCa, target: &TargetMap, lattice: &Lattice) -> Result<bool> {
    Ok(global_map_witness(cca, target, lattice, DEFAULT_CONFIGURATION_CEILING)?.is_none())
}

/// Runs the exhaustive search. A match must realise the target on every
/// lattice of the spec. Matches are listed in enumeration order.
pub fn find_global_map(spec: &SearchSpec) -> Result<SearchReport> {
    let started = Instant::now();
    let checks = spec
        .lattices
        .iter()
        .map(|lat| MapCheck::new(&spec.target, lat, &spec.alphabet, spec.configuration_ceiling))
        .collect::<Result<Vec<_>>>()?;
    let mut e = Enumeration::new(spec)?;
    let mut matches = Vec::new();
    while let Some(batch) = e.next_batch() {
        for cca in batch {
            if checks.iter().all(|c| c.first_mismatch(&cca).is_none()) {
                matches.push(cca);
            }
        }
    }
    Ok(SearchReport {
        candidates_examined: e.examined,
        commutative_count: e.commutative,
        matches,
        elapsed: started.elapsed(),
        target: spec.target.clone(),
        lattices: spec.lattices.clone(),
    })
}
