use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::CellPoint;
use crate::rule::State;

/// A finite, ordered set of offsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    offsets: Vec<CellPoint>,
}

impl Region {
    pub fn new(offsets: Vec<CellPoint>) -> Result<Self> {
        let Some(first) = offsets.first() else {
            return Err(Error::InvalidRegion);
        };
        if first.dim() == 0 || offsets.iter().any(|o| o.dim() != first.dim()) {
            return Err(Error::InvalidRegion);
        }
        let mut sorted = offsets.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != offsets.len() {
            return Err(Error::InvalidRegion);
        }
        Ok(Region { offsets })
    }

    /// The one-dimensional run `0, 1, …, len−1`.
    pub fn run(len: usize) -> Result<Self> {
        Self::new((0..len as i64).map(CellPoint::from).collect())
    }

    pub fn offsets(&self) -> &[CellPoint] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.offsets[0].dim()
    }

    fn sorted(&self) -> Vec<CellPoint> {
        let mut v = self.offsets.clone();
        v.sort();
        v
    }
}

/// An assignment of control states to the cells of a region.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegionConfig {
    region: Region,
    states: Vec<State>,
}

impl RegionConfig {
    pub fn new(region: Region, states: Vec<State>) -> Result<Self> {
        if states.len() != region.len() {
            return Err(Error::LengthMismatch { expected: region.len(), found: states.len() });
        }
        Ok(RegionConfig { region, states })
    }

    /// A configuration of the run `0..len` from a digit string, e.g. `"01"`.
    pub fn line(digits: &str) -> Result<Self> {
        let states = digits
            .chars()
            .map(|c| c.to_digit(36).ok_or_else(|| Error::Invalid(format!("bad state digit {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(Region::run(states.len())?, states)
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    /// `(offset, state)` pairs, placed at `at`.
    pub fn placed(&self, at: &CellPoint) -> impl Iterator<Item = (CellPoint, State)> + '_ {
        let at = at.clone();
        self.region.offsets.iter().zip(&self.states).map(move |(o, &s)| (&at + o, s))
    }
}

/// A placement `offset` of the second configuration that overlaps the
/// first non-trivially, and the merged assignment consistent with both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionWitness {
    pub offset: CellPoint,
    /// The union `R1 ∪ (offset + R2)` with its states, sorted by point.
    pub merged: Vec<(CellPoint, State)>,
}

impl IntersectionWitness {
    /// Checks the witness against the two configurations: the placements
    /// overlap without coinciding, and the merged assignment agrees with
    /// both and covers exactly their union.
    pub fn replays(&self, c1: &RegionConfig, c2: &RegionConfig) -> bool {
        let mut r1 = c1.region.sorted();
        let mut r2: Vec<CellPoint> = c2.region.offsets.iter().map(|o| &self.offset + o).collect();
        r2.sort();
        let overlaps = r1.iter().any(|p| r2.binary_search(p).is_ok());
        if r1 == r2 || !overlaps {
            return false;
        }
        let merged: BTreeMap<_, _> = self.merged.iter().cloned().collect();
        if merged.len() != self.merged.len() {
            return false;
        }
        let agrees = c1
            .placed(&CellPoint::origin(c1.region.dim()))
            .chain(c2.placed(&self.offset))
            .all(|(p, s)| merged.get(&p) == Some(&s));
        r1.append(&mut r2);
        r1.sort();
        r1.dedup();
        agrees && r1.len() == merged.len()
    }
}

/// Searches for a placement `x` with `R1 ≠ x + R2` and `R1 ∩ (x + R2)`
/// nonempty on which the two configurations agree.
///
/// Candidate placements are the differences `r1 − r2`, scanned from the
/// largest to the smallest in lexicographic order; the first consistent
/// one is returned.
pub fn check_intersectable(c1: &RegionConfig, c2: &RegionConfig) -> Result<Option<IntersectionWitness>> {
    let d = c1.region.dim();
    if c2.region.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: c2.region.dim() });
    }
    let r1 = c1.region.sorted();
    let mut candidates: Vec<CellPoint> =
        c1.region.offsets.iter().flat_map(|a| c2.region.offsets.iter().map(move |b| a - b)).collect();
    candidates.sort();
    candidates.dedup();

    let first: BTreeMap<CellPoint, State> = c1.placed(&CellPoint::origin(d)).collect();
    for x in candidates.into_iter().rev() {
        let mut r2: Vec<CellPoint> = c2.region.offsets.iter().map(|o| &x + o).collect();
        r2.sort();
        if r2 == r1 {
            continue;
        }
        let mut merged = first.clone();
        let mut consistent = true;
        for (p, s) in c2.placed(&x) {
            match merged.get(&p) {
                Some(&t) if t != s => {
                    consistent = false;
                    break;
                }
                _ => {
                    merged.insert(p, s);
                }
            }
        }
        if consistent {
            return Ok(Some(IntersectionWitness { offset: x, merged: merged.into_iter().collect() }));
        }
    }
    Ok(None)
}

/// Which pair of configurations intersects, by index into the input list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub first: usize,
    pub second: usize,
    pub witness: IntersectionWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub compatible: bool,
    pub witness: Option<PairWitness>,
}

/// A set is compatible when no ordered pair, including a configuration
/// paired with itself, is intersectable. Pairs are scanned row by row.
pub fn check_compatible(set: &[RegionConfig]) -> Result<CompatibilityReport> {
    for (i, a) in set.iter().enumerate() {
        for (j, b) in set.iter().enumerate() {
            if let Some(witness) = check_intersectable(a, b)? {
                return Ok(CompatibilityReport {
                    compatible: false,
                    witness: Some(PairWitness { first: i, second: j, witness }),
                });
            }
        }
    }
    Ok(CompatibilityReport { compatible: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rc(s: &str) -> RegionConfig {
        RegionConfig::line(s).unwrap()
    }

    #[test]
    fn region_invariants() {
        assert_eq!(Region::new(vec![]), Err(Error::InvalidRegion));
        assert_eq!(Region::new(vec![0.into(), 0.into()]), Err(Error::InvalidRegion));
        assert!(RegionConfig::new(Region::run(2).unwrap(), vec![0]).is_err());
    }

    #[test]
    fn margolus_pair_is_not_intersectable() {
        assert_eq!(check_intersectable(&rc("01"), &rc("23")).unwrap(), None);
        assert_eq!(check_intersectable(&rc("23"), &rc("01")).unwrap(), None);
    }

    #[test]
    fn constant_configs_overlap_at_offset_one() {
        let w = check_intersectable(&rc("00"), &rc("00")).unwrap().unwrap();
        assert_eq!(w.offset, CellPoint::from(1));
        assert_eq!(w.merged, vec![(0.into(), 0), (1.into(), 0), (2.into(), 0)]);
        assert!(w.replays(&rc("00"), &rc("00")));
    }

    #[test]
    fn alternating_config_does_not_meet_itself() {
        // Shift +1 forces cell 1 to be both 1 and 0; shift −1 forces cell 0.
        assert_eq!(check_intersectable(&rc("01"), &rc("01")).unwrap(), None);
    }

    #[test]
    fn compatibility_examples() {
        let ok = check_compatible(&[rc("01"), rc("23")]).unwrap();
        assert!(ok.compatible && ok.witness.is_none());

        let bad = check_compatible(&[rc("00")]).unwrap();
        assert!(!bad.compatible);
        let pw = bad.witness.unwrap();
        assert_eq!((pw.first, pw.second), (0, 0));

        let set = [rc("01"), rc("10")];
        let bad = check_compatible(&set).unwrap();
        let pw = bad.witness.unwrap();
        assert_eq!((pw.first, pw.second), (0, 1));
        assert_eq!(pw.witness.offset, CellPoint::from(1));
        let cells: Vec<State> = pw.witness.merged.iter().map(|(_, s)| *s).collect();
        assert_eq!(cells, vec![0, 1, 0]);
        assert!(pw.witness.replays(&set[0], &set[1]));
    }

    #[test]
    fn coinciding_placement_is_trivial() {
        // Same region at offset 0 is excluded, and two-dimensional regions
        // are handled like one-dimensional ones.
        let r = Region::new(vec![CellPoint::from([0, 0]), CellPoint::from([0, 1])]).unwrap();
        let a = RegionConfig::new(r.clone(), vec![0, 1]).unwrap();
        let b = RegionConfig::new(r, vec![0, 1]).unwrap();
        assert_eq!(check_intersectable(&a, &b).unwrap(), None);
        let flat = rc("01");
        assert!(matches!(check_intersectable(&a, &flat), Err(Error::DimensionMismatch { .. })));
    }

    fn brute_intersectable(c1: &RegionConfig, c2: &RegionConfig) -> bool {
        // Oracle: try every placement in a generous window.
        (-8i64..=8).any(|x| {
            let x = CellPoint::from(x);
            let r1: Vec<_> = c1.region().offsets().to_vec();
            let r2: Vec<_> = c2.region().offsets().iter().map(|o| &x + o).collect();
            let (mut s1, mut s2) = (r1.clone(), r2.clone());
            s1.sort();
            s2.sort();
            if s1 == s2 || !r1.iter().any(|p| r2.contains(p)) {
                return false;
            }
            c1.placed(&CellPoint::from(0)).all(|(p, s)| c2.placed(&x).all(|(q, t)| p != q || s == t))
        })
    }

    fn small_config() -> impl Strategy<Value = RegionConfig> {
        (1usize..4).prop_flat_map(|n| {
            (prop::sample::subsequence((0i64..5).collect::<Vec<_>>(), n), prop::collection::vec(0u32..3, n)).prop_map(
                |(offs, states)| {
                    RegionConfig::new(Region::new(offs.into_iter().map(CellPoint::from).collect()).unwrap(), states)
                        .unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn matches_brute_force_and_replays(a in small_config(), b in small_config()) {
            let found = check_intersectable(&a, &b).unwrap();
            prop_assert_eq!(found.is_some(), brute_intersectable(&a, &b));
            if let Some(w) = found {
                prop_assert!(w.replays(&a, &b));
            }
        }

        #[test]
        fn pair_scan_is_symmetric(a in small_config(), b in small_config()) {
            let ab = check_compatible(&[a.clone(), b.clone()]).unwrap().compatible;
            let ba = check_compatible(&[b, a]).unwrap().compatible;
            prop_assert_eq!(ab, ba);
        }
    }
}
