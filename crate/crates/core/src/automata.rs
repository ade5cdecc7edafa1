//! Traditional and closed cellular automata and their global evolution.
//!
//! A [`TraditionalCa`] maps each cell's neighbourhood to the cell's next
//! state. A [`ClosedCa`] splits a step into two phases: an interaction phase
//! that applies a neighbourhood-to-neighbourhood table around every cell in
//! turn, rewriting the cells in place, and an update phase that applies a
//! single-cell table everywhere. The interaction phase is only well defined
//! when the table is translation commutative, so a `ClosedCa` refuses to
//! step until that has been checked.

use crate::error::{Error, Result};
use crate::lattice::{CellPoint, Configuration, Lattice, Neighbourhood, Stencil};
use crate::rule::{row_count, Alphabet, RuleTable, State};
use crate::verify::check_translation_commutative;

/// A cellular automaton with a local transition rule `Σ^N → Σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraditionalCa {
    alphabet: Alphabet,
    neigh: Neighbourhood,
    rule: RuleTable,
}

impl TraditionalCa {
    pub fn new(alphabet: Alphabet, neigh: Neighbourhood, rule: RuleTable) -> Result<Self> {
        if rule.arity_in() != neigh.len() || rule.arity_out() != 1 {
            return Err(Error::ArityMismatch { arity_in: rule.arity_in(), arity_out: rule.arity_out() });
        }
        if rule.alphabet().size() != alphabet.size() {
            return Err(Error::AlphabetMismatch(alphabet.size(), rule.alphabet().size()));
        }
        Ok(TraditionalCa { alphabet, neigh, rule })
    }

    /// Tabulates `f` over the neighbourhood.
    pub fn from_fn(alphabet: Alphabet, neigh: Neighbourhood, f: impl Fn(&[State]) -> State) -> Result<Self> {
        let rule = RuleTable::from_fn(alphabet.clone(), neigh.len(), 1, |t| vec![f(t)])?;
        Self::new(alphabet, neigh, rule)
    }

    /// `σ(x, t+1) = σ(x−1, t)` on a one-dimensional lattice.
    pub fn shift_right(alphabet: Alphabet) -> Result<Self> {
        Self::from_fn(alphabet, Neighbourhood::line(&[-1])?, |t| t[0])
    }

    /// `σ(x, t+1) = σ(x+1, t)`.
    pub fn shift_left(alphabet: Alphabet) -> Result<Self> {
        Self::from_fn(alphabet, Neighbourhood::line(&[1])?, |t| t[0])
    }

    /// The identity rule over the single-cell neighbourhood of dimension `dim`.
    pub fn identity(alphabet: Alphabet, dim: usize) -> Result<Self> {
        Self::from_fn(alphabet, Neighbourhood::new(vec![CellPoint::origin(dim)])?, |t| t[0])
    }

    /// Binary radius-1 majority.
    pub fn majority() -> Result<Self> {
        Self::from_fn(Alphabet::new(2)?, Neighbourhood::line(&[-1, 0, 1])?, |t| u32::from(t.iter().sum::<State>() >= 2))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn neighbourhood(&self) -> &Neighbourhood {
        &self.neigh
    }

    pub fn rule(&self) -> &RuleTable {
        &self.rule
    }

    pub fn step(&self, c: &Configuration) -> Result<Configuration> {
        step_ca(self, c)
    }
}

/// A closed cellular automaton: interaction table `Σ^N → Σ^N` and update
/// table `Σ → Σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedCa {
    alphabet: Alphabet,
    neigh: Neighbourhood,
    interaction: RuleTable,
    update: RuleTable,
    validated: bool,
}

impl ClosedCa {
    /// Builds a closed automaton and checks that the interaction is
    /// translation commutative. A failing check returns
    /// [`Error::NotCommutative`] with a witness.
    pub fn new(alphabet: Alphabet, neigh: Neighbourhood, interaction: RuleTable, update: RuleTable) -> Result<Self> {
        Self::unvalidated(alphabet, neigh, interaction, update)?.validate()
    }

    /// Builds a closed automaton without running the commutativity check.
    /// [`step_cca`] refuses it until [`validate`](Self::validate) succeeds.
    pub fn unvalidated(
        alphabet: Alphabet,
        neigh: Neighbourhood,
        interaction: RuleTable,
        update: RuleTable,
    ) -> Result<Self> {
        let n = neigh.len();
        if interaction.arity_in() != n || interaction.arity_out() != n {
            return Err(Error::ArityMismatch { arity_in: interaction.arity_in(), arity_out: interaction.arity_out() });
        }
        if update.arity_in() != 1 || update.arity_out() != 1 {
            return Err(Error::ArityMismatch { arity_in: update.arity_in(), arity_out: update.arity_out() });
        }
        for t in [&interaction, &update] {
            if t.alphabet().size() != alphabet.size() {
                return Err(Error::AlphabetMismatch(alphabet.size(), t.alphabet().size()));
            }
        }
        Ok(ClosedCa { alphabet, neigh, interaction, update, validated: false })
    }

    pub fn validate(mut self) -> Result<Self> {
        if !self.validated {
            let report = check_translation_commutative(&self.interaction, &self.neigh, &self.alphabet)?;
            if let Some(w) = report.witness {
                return Err(Error::NotCommutative(Box::new(w)));
            }
            self.validated = true;
        }
        Ok(self)
    }

    /// Identity interaction and update.
    pub fn identity(alphabet: Alphabet, neigh: Neighbourhood) -> Result<Self> {
        let interaction = RuleTable::identity(alphabet.clone(), neigh.len())?;
        let update = RuleTable::identity(alphabet.clone(), 1)?;
        Self::new(alphabet, neigh, interaction, update)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn neighbourhood(&self) -> &Neighbourhood {
        &self.neigh
    }

    pub fn interaction(&self) -> &RuleTable {
        &self.interaction
    }

    pub fn update(&self) -> &RuleTable {
        &self.update
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn step(&self, c: &Configuration) -> Result<Configuration> {
        step_cca(self, c)
    }

    /// Applies the interaction at base cell `base` only.
    pub fn interact_at(&self, c: &Configuration, base: &CellPoint) -> Result<Configuration> {
        let input = c.read_region(base, &self.neigh)?;
        check_states(&self.alphabet, &input)?;
        c.write_region(base, &self.neigh, self.interaction.apply(&input))
    }
}

fn check_states(alphabet: &Alphabet, states: &[State]) -> Result<()> {
    states.iter().try_for_each(|&s| alphabet.check(s))
}

fn check_config(alphabet: &Alphabet, c: &Configuration) -> Result<()> {
    if c.alphabet().size() != alphabet.size() {
        return Err(Error::AlphabetMismatch(alphabet.size(), c.alphabet().size()));
    }
    Ok(())
}

#[inline]
pub(crate) fn step_ca_cells(rule: &RuleTable, stencil: &Stencil, src: &[State], dst: &mut [State]) {
    let q = rule.alphabet().size();
    for (x, out) in dst.iter_mut().enumerate() {
        let idx = stencil.at(x).iter().fold(0usize, |acc, &i| acc * q + src[i] as usize);
        *out = rule.row(idx)[0];
    }
}

#[inline]
pub(crate) fn interact_cells(table: &RuleTable, stencil: &Stencil, x: usize, cells: &mut [State]) {
    let q = table.alphabet().size();
    let support = stencil.at(x);
    let idx = support.iter().fold(0usize, |acc, &i| acc * q + cells[i] as usize);
    for (&i, &v) in support.iter().zip(table.row(idx)) {
        cells[i] = v;
    }
}

/// One interaction phase in row-major order followed by the update phase,
/// in place.
#[inline]
pub(crate) fn step_cca_cells(cca: &ClosedCa, stencil: &Stencil, cells: &mut [State]) {
    for x in 0..cells.len() {
        interact_cells(&cca.interaction, stencil, x, cells);
    }
    let update = cca.update.entries();
    for s in cells.iter_mut() {
        *s = update[*s as usize];
    }
}

/// One synchronous step: `new[x] = rule(c[x + N])` for every cell.
pub fn step_ca(ca: &TraditionalCa, c: &Configuration) -> Result<Configuration> {
    check_config(&ca.alphabet, c)?;
    c.lattice().check_supports(&ca.neigh)?;
    let stencil = Stencil::new(c.lattice(), ca.neigh.offsets());
    let mut out = vec![0; c.cells().len()];
    step_ca_cells(&ca.rule, &stencil, c.cells(), &mut out);
    Ok(Configuration::from_parts_unchecked(c.lattice().clone(), c.alphabet().clone(), out))
}

/// Applies the interaction at every cell exactly once, in `order` (a
/// permutation of row-major cell indices). Each application rewrites the
/// cells of its neighbourhood before the next one reads.
///
/// This does not require a validated automaton, so it can exhibit the order
/// dependence of a table that is not translation commutative.
pub fn interaction_phase(cca: &ClosedCa, c: &Configuration, order: &[usize]) -> Result<Configuration> {
    check_config(&cca.alphabet, c)?;
    c.lattice().check_supports(&cca.neigh)?;
    let n = c.cells().len();
    let mut seen = vec![false; n];
    if order.len() != n || !order.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true)) {
        return Err(Error::NotAPermutation { cells: n });
    }
    let stencil = Stencil::new(c.lattice(), cca.neigh.offsets());
    let mut cells = c.cells().to_vec();
    for &x in order {
        interact_cells(&cca.interaction, &stencil, x, &mut cells);
    }
    Ok(Configuration::from_parts_unchecked(c.lattice().clone(), c.alphabet().clone(), cells))
}

/// The update phase alone: the update table applied to every cell.
pub fn update_phase(cca: &ClosedCa, c: &Configuration) -> Result<Configuration> {
    check_config(&cca.alphabet, c)?;
    let update = cca.update.entries();
    let cells = c.cells().iter().map(|&s| update[s as usize]).collect();
    Ok(Configuration::from_parts_unchecked(c.lattice().clone(), c.alphabet().clone(), cells))
}

/// One global step `G∘F`: the interaction phase in row-major order, then
/// the update phase.
pub fn step_cca(cca: &ClosedCa, c: &Configuration) -> Result<Configuration> {
    if !cca.validated {
        return Err(Error::Unvalidated);
    }
    check_config(&cca.alphabet, c)?;
    c.lattice().check_supports(&cca.neigh)?;
    let stencil = Stencil::new(c.lattice(), cca.neigh.offsets());
    let mut cells = c.cells().to_vec();
    step_cca_cells(cca, &stencil, &mut cells);
    Ok(Configuration::from_parts_unchecked(c.lattice().clone(), c.alphabet().clone(), cells))
}

/// The union of all translates of `neigh` that contain the origin,
/// expressed relative to the origin: the difference set `{n − m}`, sorted.
pub fn extended_neighbourhood(neigh: &Neighbourhood) -> Neighbourhood {
    let mut diffs: Vec<CellPoint> =
        neigh.offsets().iter().flat_map(|n| neigh.offsets().iter().map(move |m| n - m)).collect();
    diffs.sort();
    diffs.dedup();
    Neighbourhood::new(diffs).expect("difference set of a neighbourhood is a neighbourhood")
}

/// The traditional automaton over the extended neighbourhood with the same
/// global map as `cca`.
///
/// Each rule entry is computed on a scratch lattice: the extended
/// neighbourhood assignment is embedded around a centre cell, every
/// interaction translate covering the centre is applied, then the update.
/// Translates that miss the centre can be deferred past these by
/// commutativity and never touch the centre, so they are not needed.
pub fn reduce_to_ca(cca: &ClosedCa) -> Result<TraditionalCa> {
    if !cca.validated {
        return Err(Error::Unvalidated);
    }
    let ext = extended_neighbourhood(&cca.neigh);
    let dim = ext.dim();
    let extents: Vec<usize> = ext.diameters().iter().map(|&d| 4 * d as usize + 1).collect();
    let scratch = Lattice::new(extents.clone())?;
    scratch.check_supports(&ext)?;
    let centre = CellPoint::new(extents.iter().map(|&e| (e / 2) as i64).collect::<Vec<_>>());

    let ext_cells: Vec<usize> = ext.offsets().iter().map(|o| scratch.index(&(&centre + o))).collect();
    let stencil = Stencil::new(&scratch, cca.neigh.offsets());
    let bases: Vec<usize> = cca.neigh.offsets().iter().map(|n| scratch.index(&(&centre - n))).collect();
    let centre_index = scratch.index(&centre);
    debug_assert_eq!(centre.dim(), dim);

    row_count(cca.alphabet.size(), ext.len())?;
    let mut cells = vec![0 as State; scratch.cell_count()];
    let rule = RuleTable::from_fn(cca.alphabet.clone(), ext.len(), 1, |assignment| {
        cells.iter_mut().for_each(|s| *s = 0);
        for (&i, &s) in ext_cells.iter().zip(assignment) {
            cells[i] = s;
        }
        for &b in &bases {
            interact_cells(&cca.interaction, &stencil, b, &mut cells);
        }
        vec![cca.update.entries()[cells[centre_index] as usize]]
    })?;
    TraditionalCa::new(cca.alphabet.clone(), ext, rule)
}
