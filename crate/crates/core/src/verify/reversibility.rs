use crate::automata::ClosedCa;
use crate::error::{Error, Result};
use crate::rule::{RuleTable, State};

/// Whether `t` is a permutation of state tuples.
pub fn check_bijection(t: &RuleTable) -> Result<bool> {
    if t.arity_in() != t.arity_out() {
        return Err(Error::ArityMismatch { arity_in: t.arity_in(), arity_out: t.arity_out() });
    }
    Ok(t.is_permutation())
}

/// The inverse permutation table.
pub fn invert_table(t: &RuleTable) -> Result<RuleTable> {
    if !check_bijection(t)? {
        return Err(Error::NotBijective);
    }
    let n = t.arity_out();
    let mut entries = vec![0 as State; t.entries().len()];
    for i in 0..t.rows() {
        let j = t.index_of(t.row(i));
        entries[j * n..(j + 1) * n].copy_from_slice(&t.tuple_of(i));
    }
    RuleTable::from_entries(t.alphabet().clone(), n, n, entries)
}

/// The closed automaton whose step undoes one step of `cca`.
///
/// One step of `cca` is `G F`. The inverse `F⁻¹ G⁻¹` is written as
/// `G⁻¹ (G F⁻¹ G⁻¹)`: the update becomes `g⁻¹` and the interaction
/// becomes the conjugate `g ∘ f⁻¹ ∘ g⁻¹`, with `g` and `g⁻¹` applied to
/// every cell of the neighbourhood. Outside the neighbourhood the
/// conjugate is the identity, so it is again a local table, and it
/// inherits translation commutativity from `f`.
pub fn invert_cca(cca: &ClosedCa) -> Result<ClosedCa> {
    if !cca.is_validated() {
        return Err(Error::Unvalidated);
    }
    let f_inv = invert_table(cca.interaction())?;
    let g_inv = invert_table(cca.update())?;
    let g = cca.update().entries();
    let g_inv_map = g_inv.entries().to_vec();
    let n = cca.neighbourhood().len();
    let interaction = RuleTable::from_fn(cca.alphabet().clone(), n, n, |t| {
        let pre: Vec<State> = t.iter().map(|&s| g_inv_map[s as usize]).collect();
        f_inv.row(f_inv.index_of(&pre)).iter().map(|&s| g[s as usize]).collect()
    })?;
    ClosedCa::new(cca.alphabet().clone(), cca.neighbourhood().clone(), interaction, g_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Configuration, Lattice, Neighbourhood};
    use crate::rule::Alphabet;
    use proptest::prelude::*;

    fn bin() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    #[test]
    fn bijection_examples() {
        assert!(check_bijection(&RuleTable::identity(bin(), 2).unwrap()).unwrap());
        assert!(!check_bijection(&RuleTable::unary(bin(), &[0, 0]).unwrap()).unwrap());
        let swap = RuleTable::from_fn(bin(), 2, 2, |t| vec![t[1], t[0]]).unwrap();
        assert!(check_bijection(&swap).unwrap());
        let ca_rule = RuleTable::from_fn(bin(), 2, 1, |t| vec![t[0]]).unwrap();
        assert!(matches!(check_bijection(&ca_rule), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn inverse_examples() {
        let id = RuleTable::identity(bin(), 2).unwrap();
        assert_eq!(invert_table(&id).unwrap(), id);
        let swap = RuleTable::from_fn(bin(), 2, 2, |t| vec![t[1], t[0]]).unwrap();
        assert_eq!(invert_table(&swap).unwrap(), swap);
        let flip = RuleTable::unary(bin(), &[1, 0]).unwrap();
        assert_eq!(invert_table(&flip).unwrap(), flip);
        assert_eq!(invert_table(&RuleTable::unary(bin(), &[0, 0]).unwrap()), Err(Error::NotBijective));
    }

    #[test]
    fn identity_cca_inverts_to_itself() {
        let cca = ClosedCa::identity(bin(), Neighbourhood::line(&[0, 1]).unwrap()).unwrap();
        assert_eq!(invert_cca(&cca).unwrap(), cca);
    }

    #[test]
    fn non_reversible_cca_is_rejected() {
        let a = bin();
        let n = Neighbourhood::line(&[0]).unwrap();
        let cca = ClosedCa::new(
            a.clone(),
            n,
            RuleTable::identity(a.clone(), 1).unwrap(),
            RuleTable::unary(a, &[0, 0]).unwrap(),
        )
        .unwrap();
        assert_eq!(invert_cca(&cca), Err(Error::NotBijective));
    }

    #[test]
    fn conjugated_interaction_round_trips() {
        // Register layout 2x2: f adds first(x+1) into second(x), g swaps
        // registers and flips the first.
        let a = Alphabet::product(&[2, 2]).unwrap();
        let n = Neighbourhood::line(&[0, 1]).unwrap();
        let f = RuleTable::from_fn(a.clone(), 2, 2, |t| {
            let (x1, x2) = (t[0] / 2, t[0] % 2);
            vec![x1 * 2 + (x2 ^ (t[1] / 2)), t[1]]
        })
        .unwrap();
        let g = RuleTable::from_fn(a.clone(), 1, 1, |t| vec![(t[0] % 2) * 2 + (1 - t[0] / 2)]).unwrap();
        let cca = ClosedCa::new(a.clone(), n, f, g).unwrap();
        let inv = invert_cca(&cca).unwrap();
        for c in Configuration::all(&Lattice::ring(4).unwrap(), &a) {
            assert_eq!(inv.step(&cca.step(&c).unwrap()).unwrap(), c);
            assert_eq!(cca.step(&inv.step(&c).unwrap()).unwrap(), c);
        }
    }

    proptest! {
        #[test]
        fn double_inversion_is_identity(perm in Just((0u32..9).collect::<Vec<_>>()).prop_shuffle()) {
            let a = Alphabet::new(3).unwrap();
            let entries: Vec<State> = perm.iter().flat_map(|&i| [i / 3, i % 3]).collect();
            let t = RuleTable::from_entries(a, 2, 2, entries).unwrap();
            let inv = invert_table(&t).unwrap();
            prop_assert_eq!(invert_table(&inv).unwrap(), t.clone());
            for (input, out) in t.iter_rows() {
                prop_assert_eq!(inv.apply(out), input.as_slice());
            }
        }
    }
}
