use crate::automata::ClosedCa;
use crate::error::{Error, Result};
use crate::lattice::{CellPoint, Configuration, Lattice, Neighbourhood};
use crate::rule::{increment, row_count, Alphabet, RuleTable, State};

/// Verdict of [`check_translation_commutative`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutativityReport {
    pub ok: bool,
    pub witness: Option<CommutativityWitness>,
}

/// An assignment on which the translates at `0` and `offset` do not commute.
///
/// `region` is the sorted union `N ∪ (N + offset)`, and the three state
/// vectors are indexed like it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutativityWitness {
    pub offset: CellPoint,
    pub region: Vec<CellPoint>,
    pub assignment: Vec<State>,
    /// Translate at the origin applied first, then the one at `offset`.
    pub base_first: Vec<State>,
    /// Translate at `offset` applied first, then the one at the origin.
    pub offset_first: Vec<State>,
}

fn apply_at(f: &RuleTable, slots: &[usize], cells: &mut [State]) {
    let q = f.alphabet().size();
    let idx = slots.iter().fold(0usize, |acc, &i| acc * q + cells[i] as usize);
    for (&i, &v) in slots.iter().zip(f.row(idx)) {
        cells[i] = v;
    }
}

/// Decides whether every pair of translates of `f` commute.
///
/// By translation invariance it is enough to compare the translate at the
/// origin with the translate at each offset `δ` that overlaps it, and since
/// the pair `(0, −δ)` is the pair `(δ, 0)` moved by `−δ`, only offsets
/// greater than the origin in lexicographic order are scanned. For each,
/// every assignment of `N ∪ (N + δ)` is tried in both orders. Offsets whose
/// translates are disjoint commute trivially.
///
/// The first failing assignment in scan order (offsets ascending, then
/// assignments in lexicographic order) is reported.
pub fn check_translation_commutative(
    f: &RuleTable,
    neigh: &Neighbourhood,
    alphabet: &Alphabet,
) -> Result<CommutativityReport> {
    let n = neigh.len();
    if f.arity_in() != n || f.arity_out() != n {
        return Err(Error::ArityMismatch { arity_in: f.arity_in(), arity_out: f.arity_out() });
    }
    if f.alphabet().size() != alphabet.size() {
        return Err(Error::AlphabetMismatch(alphabet.size(), f.alphabet().size()));
    }
    let q = alphabet.size();
    let origin = CellPoint::origin(neigh.dim());

    let mut deltas: Vec<CellPoint> = neigh
        .offsets()
        .iter()
        .flat_map(|a| neigh.offsets().iter().map(move |b| a - b))
        .filter(|d| *d > origin)
        .collect();
    deltas.sort();
    deltas.dedup();

    for delta in deltas {
        let shifted: Vec<CellPoint> = neigh.offsets().iter().map(|o| o + &delta).collect();
        let mut region: Vec<CellPoint> = neigh.offsets().iter().chain(&shifted).cloned().collect();
        region.sort();
        region.dedup();
        row_count(q, region.len())?;
        let slot = |p: &CellPoint| region.binary_search(p).expect("point lies in the union");
        let at_origin: Vec<usize> = neigh.offsets().iter().map(slot).collect();
        let at_delta: Vec<usize> = shifted.iter().map(slot).collect();

        let mut assignment = vec![0 as State; region.len()];
        let mut left = assignment.clone();
        let mut right = assignment.clone();
        loop {
            left.copy_from_slice(&assignment);
            apply_at(f, &at_origin, &mut left);
            apply_at(f, &at_delta, &mut left);
            right.copy_from_slice(&assignment);
            apply_at(f, &at_delta, &mut right);
            apply_at(f, &at_origin, &mut right);
            if left != right {
                let witness =
                    CommutativityWitness { offset: delta, region, assignment, base_first: left, offset_first: right };
                return Ok(CommutativityReport { ok: false, witness: Some(witness) });
            }
            if !increment(&mut assignment, q) {
                break;
            }
        }
    }
    Ok(CommutativityReport { ok: true, witness: None })
}

/// Replays a witness on a concrete torus just large enough to hold its
/// region, applying the two translates through the configuration-level
/// region reads and writes. Returns true when both orders reproduce the
/// recorded results and those results differ.
pub fn replay_witness(
    w: &CommutativityWitness,
    f: &RuleTable,
    neigh: &Neighbourhood,
    alphabet: &Alphabet,
) -> Result<bool> {
    let dim = neigh.dim();
    let lo: Vec<i64> = (0..dim).map(|a| w.region.iter().map(|p| p.coords()[a]).min().unwrap_or(0)).collect();
    let hi: Vec<i64> = (0..dim).map(|a| w.region.iter().map(|p| p.coords()[a]).max().unwrap_or(0)).collect();
    let lattice = Lattice::new(lo.iter().zip(&hi).map(|(l, h)| (h - l + 1) as usize).collect())?;
    let lo = CellPoint::new(lo);

    let mut start = Configuration::zeros(lattice, alphabet.clone());
    for (p, &s) in w.region.iter().zip(&w.assignment) {
        start = start.with_cell(&(p - &lo), s)?;
    }
    let update = RuleTable::identity(alphabet.clone(), 1)?;
    let raw = ClosedCa::unvalidated(alphabet.clone(), neigh.clone(), f.clone(), update)?;
    let base = -&lo;
    let other = &w.offset - &lo;

    let left = raw.interact_at(&raw.interact_at(&start, &base)?, &other)?;
    let right = raw.interact_at(&raw.interact_at(&start, &other)?, &base)?;
    let read = |c: &Configuration| -> Vec<State> { w.region.iter().map(|p| c.get(&(p - &lo))).collect() };
    Ok(read(&left) == w.base_first && read(&right) == w.offset_first && left != right)
}
