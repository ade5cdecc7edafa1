use cca::automata::{extended_neighbourhood, reduce_to_ca, step_ca, step_cca, ClosedCa, TraditionalCa};
use cca::compile::{ca_to_cca, margolus_cca, margolus_initial, ProductAlphabet};
use cca::lattice::{Configuration, Lattice, Neighbourhood};
use cca::rule::{Alphabet, RuleTable};
use cca::search::{enumerate_ccas, global_map_equals, SearchSpec, TargetMap};
use cca::verify::{check_colouring, invert_cca};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bin() -> Alphabet {
    Alphabet::new(2).unwrap()
}

fn ring(s: &str) -> Configuration {
    Configuration::ring_from_str(bin(), s).unwrap()
}

fn swap() -> RuleTable {
    RuleTable::from_fn(bin(), 2, 2, |t| vec![t[1], t[0]]).unwrap()
}

#[test]
fn majority_examples() {
    let m = TraditionalCa::majority().unwrap();
    assert_eq!(step_ca(&m, &ring("0110")).unwrap(), ring("0110"));
    assert_eq!(step_ca(&m, &ring("0100")).unwrap(), ring("0000"));
}

#[test]
fn extended_neighbourhoods() {
    let n = |o: &[i64]| Neighbourhood::line(o).unwrap();
    assert_eq!(extended_neighbourhood(&n(&[0, 1])), n(&[-1, 0, 1]));
    assert_eq!(extended_neighbourhood(&n(&[-1, 0, 1])), n(&[-2, -1, 0, 1, 2]));
}

#[test]
fn majority_two_register_trajectories() {
    let m = TraditionalCa::majority().unwrap();
    let cca = ca_to_cca(&m).unwrap();
    let pa = ProductAlphabet::new(&[2, 2]).unwrap();
    let lat = Lattice::ring(12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let cells = (0..12).map(|_| rng.gen_range(0..4)).collect();
        let mut c = Configuration::new(lat.clone(), cca.alphabet().clone(), cells).unwrap();
        let mut direct = pa.project(&c, 0).unwrap();
        for _ in 0..10 {
            c = step_cca(&cca, &c).unwrap();
            direct = step_ca(&m, &direct).unwrap();
            assert_eq!(pa.project(&c, 0).unwrap(), direct);
        }
    }
}

#[test]
fn two_register_map_is_not_the_shift() {
    let cca = ca_to_cca(&TraditionalCa::shift_right(bin()).unwrap()).unwrap();
    assert!(!global_map_equals(&cca, &TargetMap::ShiftRight, &Lattice::ring(4).unwrap()).unwrap());
}

#[test]
fn reduced_shift_reproduces_shift_on_first_registers() {
    let shift = TraditionalCa::shift_right(bin()).unwrap();
    let reduced = reduce_to_ca(&ca_to_cca(&shift).unwrap()).unwrap();
    let pa = ProductAlphabet::new(&[2, 2]).unwrap();
    for c in Configuration::all(&Lattice::ring(4).unwrap(), reduced.alphabet()) {
        let next = step_ca(&reduced, &c).unwrap();
        assert_eq!(pa.project(&next, 0).unwrap(), step_ca(&shift, &pa.project(&c, 0).unwrap()).unwrap());
    }
}

#[test]
fn reduced_margolus_agrees_on_ring_of_four() {
    let cca = margolus_cca(&swap(), &RuleTable::identity(bin(), 2).unwrap()).unwrap();
    let ca = reduce_to_ca(&cca).unwrap();
    let mut count = 0;
    for c in Configuration::all(&Lattice::ring(4).unwrap(), cca.alphabet()) {
        assert_eq!(step_ca(&ca, &c).unwrap(), step_cca(&cca, &c).unwrap());
        count += 1;
    }
    assert_eq!(count, 8usize.pow(4));
}

#[test]
fn sampled_reversible_round_trips() {
    let spec =
        SearchSpec::rings(bin(), Neighbourhood::line(&[0, 1]).unwrap(), true, TargetMap::Identity, &[4]).unwrap();
    let all: Vec<ClosedCa> = enumerate_ccas(&spec).unwrap().collect();
    assert_eq!(all.len(), 8);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let cca = all.choose(&mut rng).unwrap();
        let inv = invert_cca(cca).unwrap();
        for c in Configuration::all(&Lattice::ring(4).unwrap(), &bin()) {
            assert_eq!(step_cca(&inv, &step_cca(cca, &c).unwrap()).unwrap(), c);
        }
    }
}

#[test]
fn margolus_inverse_restores_after_five_steps() {
    let cca = margolus_cca(&swap(), &swap()).unwrap();
    let inv = invert_cca(&cca).unwrap();
    for s1 in Configuration::all(&Lattice::ring(6).unwrap(), &bin()) {
        let start = margolus_initial(&s1).unwrap();
        let mut c = start.clone();
        for _ in 0..5 {
            c = step_cca(&cca, &c).unwrap();
        }
        for _ in 0..5 {
            c = step_cca(&inv, &c).unwrap();
        }
        assert_eq!(c, start);
    }
}

#[test]
fn colouring_examples() {
    let three = Neighbourhood::line(&[-1, 0, 1]).unwrap();
    assert!(check_colouring(&ring("10"), &three));
    let aba = Configuration::ring_from_str(Alphabet::new(2).unwrap(), "010").unwrap();
    assert!(!check_colouring(&aba, &three));
}
