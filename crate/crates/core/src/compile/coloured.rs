use crate::automata::{step_cca, ClosedCa};
use crate::compile::ProductAlphabet;
use crate::error::{Error, Result};
use crate::lattice::{CellPoint, Configuration, Neighbourhood};
use crate::rule::{Alphabet, RuleTable, State};
use crate::verify::{check_colouring, check_tile_fits};

/// A periodic colouring and the cyclic sequence of colour update rules.
///
/// Rule `i` is used at clock value `i`: it rewrites the `Σ1` state of every
/// cell whose colour is `rules[i].0`, reading the `Σ1` states at
/// `x + neigh`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourSchedule {
    tile: Configuration,
    neigh: Neighbourhood,
    rules: Vec<(State, RuleTable)>,
}

impl ColourSchedule {
    pub fn new(tile: Configuration, neigh: Neighbourhood, rules: Vec<(State, RuleTable)>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::InvalidColouring("the rule sequence is empty".into()));
        }
        if !check_colouring(&tile, &neigh) {
            return Err(Error::InvalidColouring("neighbouring cells share a colour".into()));
        }
        let q1 = rules[0].1.alphabet().size();
        for (colour, rule) in &rules {
            if !tile.cells().contains(colour) {
                return Err(Error::InvalidColouring(format!("colour {colour} does not appear in the tile")));
            }
            if rule.arity_in() != neigh.len() || rule.arity_out() != 1 {
                return Err(Error::ArityMismatch { arity_in: rule.arity_in(), arity_out: rule.arity_out() });
            }
            if rule.alphabet().size() != q1 {
                return Err(Error::AlphabetMismatch(q1, rule.alphabet().size()));
            }
        }
        Ok(ColourSchedule { tile, neigh, rules })
    }

    pub fn tile(&self) -> &Configuration {
        &self.tile
    }

    pub fn neighbourhood(&self) -> &Neighbourhood {
        &self.neigh
    }

    pub fn rules(&self) -> &[(State, RuleTable)] {
        &self.rules
    }

    pub fn period(&self) -> usize {
        self.rules.len()
    }

    pub fn colours(&self) -> usize {
        self.tile.alphabet().size()
    }

    pub fn cell_alphabet(&self) -> &Alphabet {
        self.rules[0].1.alphabet()
    }
}

/// A compiled coloured automaton. Cell states pack `(Σ1, colour, clock)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredCca {
    cca: ClosedCa,
    schedule: ColourSchedule,
    registers: ProductAlphabet,
}

/// Compiles a colour schedule into a closed automaton with a colour and a
/// clock register in every cell.
///
/// The interaction at `x` rewrites the `Σ1` register of `x` with the rule
/// for `x`'s clock value, but only when `x` has that rule's colour and every
/// cell in `x ± N` carries the same clock and a different colour. On a
/// properly coloured, synchronised configuration that guard reduces to the
/// colour test; on arbitrary states it stops two neighbours from firing
/// together, which keeps the table translation commutative. The
/// neighbourhood is `N ∪ −N ∪ {0}`, sorted. The update advances every
/// clock modulo the schedule period.
pub fn coloured_to_cca(schedule: &ColourSchedule) -> Result<ColouredCca> {
    let q1 = schedule.cell_alphabet().size();
    let period = schedule.period();
    let registers = ProductAlphabet::new(&[q1, schedule.colours(), period])?;

    let base = &schedule.neigh;
    let mut offsets: Vec<CellPoint> = base.offsets().iter().flat_map(|o| [o.clone(), -o]).collect();
    offsets.push(CellPoint::origin(base.dim()));
    offsets.sort();
    offsets.dedup();
    let neigh = Neighbourhood::new(offsets)?;
    let own = neigh.position(&CellPoint::origin(base.dim())).expect("origin included");
    let reads: Vec<usize> = base.offsets().iter().map(|o| neigh.position(o).expect("subset")).collect();

    let interaction = RuleTable::from_fn(registers.alphabet().clone(), neigh.len(), neigh.len(), |t| {
        let [_, colour, clock] = registers.unpack(t[own])[..] else { unreachable!() };
        let (scheduled, rule) = &schedule.rules[clock as usize];
        let fires = colour == *scheduled
            && t.iter()
                .enumerate()
                .filter(|&(k, _)| k != own)
                .all(|(_, &s)| registers.component(s, 2) == clock && registers.component(s, 1) != colour);
        let mut out = t.to_vec();
        if fires {
            let input: Vec<State> = reads.iter().map(|&k| registers.component(t[k], 0)).collect();
            out[own] = registers.pack(&[rule.apply1(&input), colour, clock]);
        }
        out
    })?;
    let update = RuleTable::from_fn(registers.alphabet().clone(), 1, 1, |t| {
        let r = registers.unpack(t[0]);
        vec![registers.pack(&[r[0], r[1], (r[2] + 1) % period as State])]
    })?;
    let cca = ClosedCa::new(registers.alphabet().clone(), neigh, interaction, update)?;
    Ok(ColouredCca { cca, schedule: schedule.clone(), registers })
}

impl ColouredCca {
    pub fn cca(&self) -> &ClosedCa {
        &self.cca
    }

    pub fn schedule(&self) -> &ColourSchedule {
        &self.schedule
    }

    pub fn registers(&self) -> &ProductAlphabet {
        &self.registers
    }

    /// Lays the tile over `sigma1`'s lattice and sets every clock to `clock`.
    pub fn initial(&self, sigma1: &Configuration, clock: State) -> Result<Configuration> {
        let lattice = sigma1.lattice();
        check_tile_fits(&self.schedule.tile, lattice)?;
        if clock as usize >= self.schedule.period() {
            return Err(Error::InconsistentClock(format!("clock {clock} exceeds the period")));
        }
        let cells = lattice
            .points()
            .zip(sigma1.cells())
            .map(|(p, &s)| self.registers.pack(&[s, self.schedule.tile.get(&p), clock]))
            .collect();
        Configuration::new(lattice.clone(), self.registers.alphabet().clone(), cells)
    }

    /// The `Σ1` registers.
    pub fn cell_states(&self, c: &Configuration) -> Result<Configuration> {
        self.registers.project(c, 0)
    }

    /// One step, after checking that colours follow the tile and all
    /// clocks agree.
    pub fn step(&self, c: &Configuration) -> Result<Configuration> {
        check_tile_fits(&self.schedule.tile, c.lattice())?;
        let mut clock = None;
        for (p, &s) in c.lattice().points().zip(c.cells()) {
            let [_, colour, t] = self.registers.unpack(s)[..] else { unreachable!() };
            if colour != self.schedule.tile.get(&p) {
                return Err(Error::InvalidColouring(format!("cell {p} has colour {colour} off the tile")));
            }
            match clock {
                None => clock = Some(t),
                Some(k) if k != t => {
                    return Err(Error::InconsistentClock(format!("cell {p} reads {t}, expected {k}")));
                }
                _ => {}
            }
        }
        step_cca(&self.cca, c)
    }
}
