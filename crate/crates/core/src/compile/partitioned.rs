use crate::automata::ClosedCa;
use crate::compile::ProductAlphabet;
use crate::error::{Error, Result};
use crate::lattice::{CellPoint, Configuration, Neighbourhood};
use crate::rule::{Alphabet, RuleTable, State};
use crate::verify::{check_compatible, RegionConfig};

/// Builds a closed automaton over `Σ1 × Σ2` from block rules selected by
/// control patterns.
///
/// Each entry of `set` pairs a control pattern `C_i` over a region `R_i`
/// with a table `f_i` on the `Σ1` registers of `R_i`. The
/// interaction at `x` looks at the control registers of `x + R_i`; when they
/// read `C_i` it applies `f_i` to the `Σ1` registers there. Control
/// registers are never written by the interaction. The update applies
/// `extra_update` to `Σ1` and `control_update` to `Σ2` of every cell.
///
/// The set must be compatible, so matched placements never overlap and the
/// interaction is translation commutative. The neighbourhood is the sorted
/// union of the regions.
pub fn partitioned_to_cca(
    set: &[(RegionConfig, RuleTable)],
    control_update: &RuleTable,
    extra_update: &RuleTable,
) -> Result<ClosedCa> {
    let q1 = extra_update.alphabet().size();
    let q2 = control_update.alphabet().size();
    for t in [control_update, extra_update] {
        if t.arity_in() != 1 || t.arity_out() != 1 {
            return Err(Error::ArityMismatch { arity_in: t.arity_in(), arity_out: t.arity_out() });
        }
    }

    let configs: Vec<RegionConfig> = set.iter().map(|(c, _)| c.clone()).collect();
    let report = check_compatible(&configs)?;
    if let Some(pw) = report.witness {
        return Err(Error::Incompatible(format!(
            "configuration {} meets configuration {} at offset {}",
            pw.first, pw.second, pw.witness.offset
        )));
    }
    for (c, f) in set {
        if c.states().iter().any(|&s| s as usize >= q2) {
            return Err(Error::Invalid(format!("control pattern {:?} leaves 0..{q2}", c.states())));
        }
        if f.arity_in() != c.region().len() || f.arity_out() != c.region().len() {
            return Err(Error::ArityMismatch { arity_in: f.arity_in(), arity_out: f.arity_out() });
        }
        if f.alphabet().size() != q1 {
            return Err(Error::AlphabetMismatch(q1, f.alphabet().size()));
        }
    }

    let dim = configs.first().map_or(1, |c| c.region().dim());
    if let Some(c) = configs.iter().find(|c| c.region().dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: c.region().dim() });
    }
    let mut offsets: Vec<CellPoint> = configs.iter().flat_map(|c| c.region().offsets().iter().cloned()).collect();
    offsets.sort();
    offsets.dedup();
    if offsets.is_empty() {
        offsets.push(CellPoint::origin(dim));
    }
    let neigh = Neighbourhood::new(offsets)?;
    let slots: Vec<Vec<usize>> = configs
        .iter()
        .map(|c| c.region().offsets().iter().map(|o| neigh.position(o).expect("union")).collect())
        .collect();

    let pa = ProductAlphabet::new(&[q1, q2])?;
    let interaction = RuleTable::try_from_fn(pa.alphabet().clone(), neigh.len(), neigh.len(), |t| {
        let mut matched = None;
        for (i, (cfg, s)) in configs.iter().zip(&slots).enumerate() {
            let hit = s.iter().zip(cfg.states()).all(|(&k, &want)| pa.component(t[k], 1) == want);
            if hit {
                if let Some(j) = matched {
                    return Err(Error::AnchorAmbiguity(j, i));
                }
                matched = Some(i);
            }
        }
        let mut out = t.to_vec();
        if let Some(i) = matched {
            let block: Vec<State> = slots[i].iter().map(|&k| pa.component(t[k], 0)).collect();
            let image = set[i].1.apply(&block);
            for (&k, &v) in slots[i].iter().zip(image) {
                out[k] = pa.pack(&[v, pa.component(t[k], 1)]);
            }
        }
        Ok(out)
    })?;
    let update = RuleTable::from_fn(pa.alphabet().clone(), 1, 1, |t| {
        let r = pa.unpack(t[0]);
        vec![pa.pack(&[extra_update.apply1(&[r[0]]), control_update.apply1(&[r[1]])])]
    })?;
    ClosedCa::new(pa.alphabet().clone(), neigh, interaction, update)
}

/// The Margolus partitioned automaton: `u` acts on pairs whose control
/// registers read `01`, `v` on pairs reading `23`, and the control update
/// `k → 3 − k` moves the matched pairs by one cell each step.
///
/// Started from [`margolus_initial`], even steps apply `u` to the pairs
/// `(2i, 2i+1)` and odd steps apply `v` to the pairs `(2i+1, 2i+2)`.
pub fn margolus_cca(u: &RuleTable, v: &RuleTable) -> Result<ClosedCa> {
    for t in [u, v] {
        if t.arity_in() != 2 || t.arity_out() != 2 {
            return Err(Error::ArityMismatch { arity_in: t.arity_in(), arity_out: t.arity_out() });
        }
    }
    let sigma1 = u.alphabet().clone();
    if v.alphabet().size() != sigma1.size() {
        return Err(Error::AlphabetMismatch(sigma1.size(), v.alphabet().size()));
    }
    let control = Alphabet::new(4)?;
    let set = [(RegionConfig::line("01")?, u.clone()), (RegionConfig::line("23")?, v.clone())];
    let control_update = RuleTable::unary(control, &[3, 2, 1, 0])?;
    let extra_update = RuleTable::identity(sigma1, 1)?;
    partitioned_to_cca(&set, &control_update, &extra_update)
}

/// Pairs a `Σ1` ring with the alternating `0101…` control pattern the
/// Margolus automaton expects. The ring length must be even.
pub fn margolus_initial(sigma1: &Configuration) -> Result<Configuration> {
    let lattice = sigma1.lattice();
    if lattice.dim() != 1 || !lattice.cell_count().is_multiple_of(2) {
        return Err(Error::Invalid(format!(
            "the Margolus automaton runs on a ring of even length, got {:?}",
            lattice.dims()
        )));
    }
    let pa = ProductAlphabet::new(&[sigma1.alphabet().size(), 4])?;
    let control = Configuration::new(
        lattice.clone(),
        Alphabet::new(4)?,
        (0..lattice.cell_count()).map(|i| (i % 2) as State).collect(),
    )?;
    pa.pack_configs(&[sigma1, &control])
}
