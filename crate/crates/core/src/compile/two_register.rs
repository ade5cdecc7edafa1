use crate::automata::{ClosedCa, TraditionalCa};
use crate::compile::{AdditionRelation, ProductAlphabet};
use crate::error::{Error, Result};
use crate::lattice::{CellPoint, Neighbourhood};
use crate::rule::{RuleTable, State};

fn swap_update(pa: &ProductAlphabet) -> Result<RuleTable> {
    RuleTable::from_fn(pa.alphabet().clone(), 1, 1, |t| {
        let r = pa.unpack(t[0]);
        vec![pa.pack(&[r[1], r[0]])]
    })
}

/// Simulates `ca` with two registers per cell.
///
/// The interaction at `x` evaluates the rule on the first registers of
/// `x + N` and stores the result in the second register of `x`, so no
/// translate ever writes what another reads. The update swaps the two
/// registers. The neighbourhood is the rule's, with the origin appended
/// when the rule does not read its own cell.
///
/// The first registers then follow `ca` exactly, whatever the second
/// registers start with.
pub fn ca_to_cca(ca: &TraditionalCa) -> Result<ClosedCa> {
    let q = ca.alphabet().size();
    let pa = ProductAlphabet::new(&[q, q])?;
    let dim = ca.neighbourhood().dim();
    let neigh = ca.neighbourhood().with_offset(CellPoint::origin(dim))?;
    let own = neigh.position(&CellPoint::origin(dim)).expect("origin was added");
    let reads = ca.neighbourhood().len();
    let rule = ca.rule();

    let interaction = RuleTable::from_fn(pa.alphabet().clone(), neigh.len(), neigh.len(), |t| {
        let firsts: Vec<State> = t[..reads].iter().map(|&s| pa.component(s, 0)).collect();
        let mut out = t.to_vec();
        out[own] = pa.pack(&[pa.component(t[own], 0), rule.apply1(&firsts)]);
        out
    })?;
    ClosedCa::new(pa.alphabet().clone(), neigh, interaction, swap_update(&pa)?)
}

/// Simulates a reversible automaton with a reversible closed automaton.
///
/// The first register holds `C(t)` and the second `C(t−1)`. The interaction
/// at `x` evaluates `forward` and `reverse` on the first registers and adds
/// `forward − reverse` into the second register of `x`, turning `C(t−1)`
/// into `C(t+1)`. The update swaps registers. Both tables are bijections,
/// since the interaction adds a quantity that does not depend on the
/// register it changes.
///
/// `forward` and `reverse` must be mutual inverses as global maps; that is
/// the caller's responsibility.
pub fn rca_to_rcca(forward: &TraditionalCa, reverse: &TraditionalCa, add: &AdditionRelation) -> Result<ClosedCa> {
    let q = forward.alphabet().size();
    if reverse.alphabet().size() != q {
        return Err(Error::AlphabetMismatch(q, reverse.alphabet().size()));
    }
    if add.size() != q {
        return Err(Error::AlphabetMismatch(q, add.size()));
    }
    let dim = forward.neighbourhood().dim();
    if reverse.neighbourhood().dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: reverse.neighbourhood().dim() });
    }
    let mut offsets = forward.neighbourhood().offsets().to_vec();
    for o in reverse.neighbourhood().offsets() {
        if !offsets.contains(o) {
            offsets.push(o.clone());
        }
    }
    let neigh = Neighbourhood::new(offsets)?.with_offset(CellPoint::origin(dim))?;
    let slots = |n: &Neighbourhood| -> Vec<usize> {
        n.offsets().iter().map(|o| neigh.position(o).expect("merged neighbourhood")).collect()
    };
    let fwd_slots = slots(forward.neighbourhood());
    let rev_slots = slots(reverse.neighbourhood());
    let own = neigh.position(&CellPoint::origin(dim)).expect("origin was added");

    let pa = ProductAlphabet::new(&[q, q])?;
    let interaction = RuleTable::from_fn(pa.alphabet().clone(), neigh.len(), neigh.len(), |t| {
        let read = |slots: &[usize]| -> Vec<State> { slots.iter().map(|&i| pa.component(t[i], 0)).collect() };
        let ahead = forward.rule().apply1(&read(&fwd_slots));
        let behind = reverse.rule().apply1(&read(&rev_slots));
        let r = pa.unpack(t[own]);
        let mut out = t.to_vec();
        out[own] = pa.pack(&[r[0], add.add(r[1], add.sub(ahead, behind))]);
        out
    })?;
    ClosedCa::new(pa.alphabet().clone(), neigh, interaction, swap_update(&pa)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::step_ca;
    use crate::lattice::{Configuration, Lattice};
    use crate::rule::Alphabet;
    use crate::verify::{check_bijection, invert_cca};

    fn bin() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn pack(first: &str, second: &str) -> Configuration {
        let pa = ProductAlphabet::new(&[2, 2]).unwrap();
        let a = Configuration::ring_from_str(bin(), first).unwrap();
        let b = Configuration::ring_from_str(bin(), second).unwrap();
        pa.pack_configs(&[&a, &b]).unwrap()
    }

    fn registers(c: &Configuration) -> (Configuration, Configuration) {
        let pa = ProductAlphabet::new(&[2, 2]).unwrap();
        (pa.project(c, 0).unwrap(), pa.project(c, 1).unwrap())
    }

    fn ring(s: &str) -> Configuration {
        Configuration::ring_from_str(bin(), s).unwrap()
    }

    #[test]
    fn shift_right_compiles() {
        let cca = ca_to_cca(&TraditionalCa::shift_right(bin()).unwrap()).unwrap();
        assert_eq!(cca.neighbourhood(), &Neighbourhood::line(&[-1, 0]).unwrap());
        let out = cca.step(&pack("0011", "0000")).unwrap();
        assert_eq!(registers(&out).0, ring("1001"));
    }

    #[test]
    fn interaction_phase_fills_second_registers() {
        // Hand simulation of the four applications in row-major order: each
        // copies the left neighbour's first register into its own second.
        let cca = ca_to_cca(&TraditionalCa::shift_right(bin()).unwrap()).unwrap();
        let mid = crate::automata::interaction_phase(&cca, &pack("0011", "0000"), &[0, 1, 2, 3]).unwrap();
        assert_eq!(registers(&mid), (ring("0011"), ring("1001")));
    }

    #[test]
    fn identity_compiles_to_fixed_first_registers() {
        let cca = ca_to_cca(&TraditionalCa::identity(bin(), 1).unwrap()).unwrap();
        for c in Configuration::all(&Lattice::ring(4).unwrap(), cca.alphabet()) {
            let out = cca.step(&c).unwrap();
            assert_eq!(registers(&out).0, registers(&c).0);
        }
    }

    #[test]
    fn reversible_shift_example() {
        let fwd = TraditionalCa::shift_right(bin()).unwrap();
        let rev = TraditionalCa::shift_left(bin()).unwrap();
        let cca = rca_to_rcca(&fwd, &rev, &AdditionRelation::identity(2).unwrap()).unwrap();
        assert!(check_bijection(cca.interaction()).unwrap());
        assert!(check_bijection(cca.update()).unwrap());
        let out = cca.step(&pack("0011", "0110")).unwrap();
        assert_eq!(registers(&out), (ring("1001"), ring("0011")));
        assert_eq!(step_ca(&fwd, &ring("0011")).unwrap(), ring("1001"));
    }

    #[test]
    fn identity_pair_swaps_registers() {
        let id = TraditionalCa::identity(bin(), 1).unwrap();
        let cca = rca_to_rcca(&id, &id, &AdditionRelation::identity(2).unwrap()).unwrap();
        let start = pack("0011", "0101");
        let once = cca.step(&start).unwrap();
        assert_eq!(registers(&once), (ring("0101"), ring("0011")));
        assert_eq!(cca.step(&once).unwrap(), start);
    }

    #[test]
    fn reversible_round_trip_on_ring_of_six() {
        let fwd = TraditionalCa::shift_right(bin()).unwrap();
        let rev = TraditionalCa::shift_left(bin()).unwrap();
        let cca = rca_to_rcca(&fwd, &rev, &AdditionRelation::identity(2).unwrap()).unwrap();
        let inv = invert_cca(&cca).unwrap();
        for c in Configuration::all(&Lattice::ring(6).unwrap(), cca.alphabet()).step_by(7) {
            let mut cur = c.clone();
            for _ in 0..8 {
                cur = cca.step(&cur).unwrap();
            }
            for _ in 0..8 {
                cur = inv.step(&cur).unwrap();
            }
            assert_eq!(cur, c);
        }
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let fwd = TraditionalCa::shift_right(bin()).unwrap();
        let rev = TraditionalCa::shift_left(Alphabet::new(3).unwrap()).unwrap();
        assert!(matches!(
            rca_to_rcca(&fwd, &rev, &AdditionRelation::identity(2).unwrap()),
            Err(Error::AlphabetMismatch(2, 3))
        ));
    }
}
