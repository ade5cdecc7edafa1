//! Periodic lattices, cell points, neighbourhood schemes and configurations.
//!
//! A [`Lattice`] is a finite d-dimensional torus. Points are integer tuples
//! that wrap modulo the extents, so translation behaves as it does on the
//! integer lattice as long as no neighbourhood is wide enough to see itself
//! around the torus (see [`Lattice::check_supports`]).
//!
//! Cells are enumerated in row-major order: the last coordinate varies
//! fastest. That order fixes configuration layout, serialization, and the
//! default order of the interaction phase.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::rule::{Alphabet, State};

/// An integer point, used both for lattice cells and for offsets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellPoint(Vec<i64>);

impl CellPoint {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        CellPoint(coords.into())
    }

    pub fn origin(dim: usize) -> Self {
        CellPoint(vec![0; dim])
    }

    /// The unit vector along `axis`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = 1;
        CellPoint(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl From<i64> for CellPoint {
    fn from(x: i64) -> Self {
        CellPoint(vec![x])
    }
}

impl From<Vec<i64>> for CellPoint {
    fn from(v: Vec<i64>) -> Self {
        CellPoint(v)
    }
}

impl<const N: usize> From<[i64; N]> for CellPoint {
    fn from(v: [i64; N]) -> Self {
        CellPoint(v.to_vec())
    }
}

impl Add for &CellPoint {
    type Output = CellPoint;

    fn add(self, rhs: &CellPoint) -> CellPoint {
        debug_assert_eq!(self.dim(), rhs.dim());
        CellPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CellPoint {
    type Output = CellPoint;

    fn sub(self, rhs: &CellPoint) -> CellPoint {
        debug_assert_eq!(self.dim(), rhs.dim());
        CellPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &CellPoint {
    type Output = CellPoint;

    fn neg(self) -> CellPoint {
        CellPoint(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for CellPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Per-axis `max - min` over a set of points.
pub(crate) fn diameters<'a>(points: impl IntoIterator<Item = &'a CellPoint>, dim: usize) -> Vec<i64> {
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    let mut any = false;
    for p in points {
        any = true;
        for (axis, &c) in p.coords().iter().enumerate() {
            lo[axis] = lo[axis].min(c);
            hi[axis] = hi[axis].max(c);
        }
    }
    if !any {
        return vec![0; dim];
    }
    lo.iter().zip(&hi).map(|(l, h)| h - l).collect()
}

fn check_offsets(offsets: &[CellPoint]) -> bool {
    let Some(first) = offsets.first() else {
        return false;
    };
    if first.dim() == 0 || offsets.iter().any(|o| o.dim() != first.dim()) {
        return false;
    }
    let mut sorted: Vec<_> = offsets.iter().collect();
    sorted.sort();
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// An ordered list of distinct offsets. The order fixes tuple positions in
/// rule tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Neighbourhood {
    offsets: Vec<CellPoint>,
}

impl Neighbourhood {
    pub fn new(offsets: Vec<CellPoint>) -> Result<Self> {
        if !check_offsets(&offsets) {
            return Err(Error::InvalidNeighbourhood);
        }
        Ok(Neighbourhood { offsets })
    }

    /// A one-dimensional neighbourhood from plain integer offsets.
    pub fn line(offsets: &[i64]) -> Result<Self> {
        Self::new(offsets.iter().map(|&o| CellPoint::from(o)).collect())
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

    pub fn position(&self, offset: &CellPoint) -> Option<usize> {
        self.offsets.iter().position(|o| o == offset)
    }

    pub fn diameters(&self) -> Vec<i64> {
        diameters(&self.offsets, self.dim())
    }

    /// Returns this neighbourhood with `offset` appended if it is missing.
    pub fn with_offset(&self, offset: CellPoint) -> Result<Self> {
        if self.position(&offset).is_some() {
            return Ok(self.clone());
        }
        let mut offsets = self.offsets.clone();
        offsets.push(offset);
        Self::new(offsets)
    }
}

impl fmt::Display for Neighbourhood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, o) in self.offsets.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{o}")?;
        }
        Ok(())
    }
}

/// A finite periodic lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    dims: Vec<usize>,
}

impl Lattice {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidLattice(dims));
        }
        if dims.iter().try_fold(1usize, |acc, &e| acc.checked_mul(e)).is_none() {
            return Err(Error::InvalidLattice(dims));
        }
        Ok(Lattice { dims })
    }

    /// A one-dimensional ring of `n` cells.
    pub fn ring(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn cell_count(&self) -> usize {
        self.dims.iter().product()
    }

    /// Canonical representative of `p` on this torus.
    ///
    /// Panics if `p` has a different dimension.
    pub fn wrap(&self, p: &CellPoint) -> CellPoint {
        assert_eq!(p.dim(), self.dim(), "point dimension does not match lattice");
        CellPoint(p.0.iter().zip(&self.dims).map(|(&c, &e)| c.rem_euclid(e as i64)).collect())
    }

    /// Row-major index of the cell holding `p` (after wrapping).
    pub fn index(&self, p: &CellPoint) -> usize {
        assert_eq!(p.dim(), self.dim(), "point dimension does not match lattice");
        p.0.iter().zip(&self.dims).fold(0usize, |acc, (&c, &e)| acc * e + c.rem_euclid(e as i64) as usize)
    }

    /// Canonical point of the cell at row-major `index`.
    pub fn point(&self, mut index: usize) -> CellPoint {
        let mut coords = vec![0i64; self.dim()];
        for (axis, &e) in self.dims.iter().enumerate().rev() {
            coords[axis] = (index % e) as i64;
            index /= e;
        }
        CellPoint(coords)
    }

    pub fn points(&self) -> impl Iterator<Item = CellPoint> + '_ {
        (0..self.cell_count()).map(move |i| self.point(i))
    }

    /// Checks that every extent strictly exceeds the neighbourhood's
    /// diameter along that axis, so the wrapped cells of one neighbourhood
    /// are pairwise distinct.
    pub fn check_supports(&self, neigh: &Neighbourhood) -> Result<()> {
        if neigh.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: neigh.dim() });
        }
        for (axis, (&extent, &diameter)) in self.dims.iter().zip(&neigh.diameters()).enumerate() {
            if extent as i64 <= diameter {
                return Err(Error::LatticeTooSmall { axis, extent, diameter });
            }
        }
        Ok(())
    }
}

/// Wraps `p` onto `lat`. See [`Lattice::wrap`].
pub fn wrap(p: &CellPoint, lat: &Lattice) -> CellPoint {
    lat.wrap(p)
}

/// A total assignment of states to lattice cells, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    lattice: Lattice,
    alphabet: Alphabet,
    cells: Vec<State>,
}

impl Configuration {
    pub fn new(lattice: Lattice, alphabet: Alphabet, cells: Vec<State>) -> Result<Self> {
        if cells.len() != lattice.cell_count() {
            return Err(Error::LengthMismatch { expected: lattice.cell_count(), found: cells.len() });
        }
        for &s in &cells {
            alphabet.check(s)?;
        }
        Ok(Configuration { lattice, alphabet, cells })
    }

    pub(crate) fn from_parts_unchecked(lattice: Lattice, alphabet: Alphabet, cells: Vec<State>) -> Self {
        debug_assert_eq!(cells.len(), lattice.cell_count());
        Configuration { lattice, alphabet, cells }
    }

    /// Every cell in state 0.
    pub fn zeros(lattice: Lattice, alphabet: Alphabet) -> Self {
        let n = lattice.cell_count();
        Configuration { lattice, alphabet, cells: vec![0; n] }
    }

    /// One-dimensional configuration from a digit string such as `"0110"`.
    pub fn ring_from_str(alphabet: Alphabet, digits: &str) -> Result<Self> {
        let cells = digits
            .chars()
            .map(|c| c.to_digit(36).ok_or_else(|| Error::Invalid(format!("bad state digit {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(Lattice::ring(cells.len())?, alphabet, cells)
    }

    /// Configuration number `rank` in lexicographic order, cell 0 most
    /// significant.
    pub fn from_rank(lattice: Lattice, alphabet: Alphabet, mut rank: u128) -> Self {
        let q = alphabet.size() as u128;
        let mut cells = vec![0; lattice.cell_count()];
        for c in cells.iter_mut().rev() {
            *c = (rank % q) as State;
            rank /= q;
        }
        Configuration { lattice, alphabet, cells }
    }

    pub fn rank(&self) -> u128 {
        let q = self.alphabet.size() as u128;
        self.cells.iter().fold(0u128, |acc, &s| acc * q + s as u128)
    }

    /// Number of configurations on `lattice` over `alphabet`, if it fits.
    pub fn space_size(lattice: &Lattice, alphabet: &Alphabet) -> Option<u128> {
        let q = alphabet.size() as u128;
        (0..lattice.cell_count()).try_fold(1u128, |acc, _| acc.checked_mul(q))
    }

    /// Every configuration on `lattice`, in rank order.
    pub fn all(lattice: &Lattice, alphabet: &Alphabet) -> impl Iterator<Item = Configuration> {
        let total = Self::space_size(lattice, alphabet).expect("configuration space overflows u128");
        let lattice = lattice.clone();
        let alphabet = alphabet.clone();
        (0..total).map(move |r| Configuration::from_rank(lattice.clone(), alphabet.clone(), r))
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn cells(&self) -> &[State] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<State> {
        self.cells
    }

    pub fn get(&self, p: &CellPoint) -> State {
        self.cells[self.lattice.index(p)]
    }

    /// Returns a copy with cell `p` set to `state`.
    pub fn with_cell(&self, p: &CellPoint, state: State) -> Result<Self> {
        self.alphabet.check(state)?;
        let mut out = self.clone();
        let i = out.lattice.index(p);
        out.cells[i] = state;
        Ok(out)
    }

    /// The configuration moved by `by`: `out[x + by] = self[x]`.
    pub fn translate(&self, by: &CellPoint) -> Configuration {
        let mut cells = vec![0; self.cells.len()];
        for (i, p) in self.lattice.points().enumerate() {
            cells[self.lattice.index(&(&p + by))] = self.cells[i];
        }
        Configuration { lattice: self.lattice.clone(), alphabet: self.alphabet.clone(), cells }
    }

    /// Applies `f` to every cell state.
    pub fn map_states(&self, alphabet: Alphabet, f: impl Fn(State) -> State) -> Result<Self> {
        Self::new(self.lattice.clone(), alphabet, self.cells.iter().map(|&s| f(s)).collect())
    }

    pub fn read_region(&self, base: &CellPoint, offsets: &Neighbourhood) -> Result<Vec<State>> {
        read_region(self, base, offsets)
    }

    pub fn write_region(&self, base: &CellPoint, offsets: &Neighbourhood, values: &[State]) -> Result<Self> {
        write_region(self, base, offsets, values)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &s) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.alphabet.format_state(s))?;
        }
        Ok(())
    }
}

fn check_base(c: &Configuration, base: &CellPoint, offsets: &Neighbourhood) -> Result<()> {
    let d = c.lattice.dim();
    if base.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: base.dim() });
    }
    if offsets.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: offsets.dim() });
    }
    Ok(())
}

/// Gathers the states at `base + o` for each offset, in offset order.
pub fn read_region(c: &Configuration, base: &CellPoint, offsets: &Neighbourhood) -> Result<Vec<State>> {
    check_base(c, base, offsets)?;
    Ok(offsets.offsets().iter().map(|o| c.get(&(base + o))).collect())
}

/// Scatters `values` to `base + o`. Later offsets win when two of them wrap
/// onto the same cell.
pub fn write_region(
    c: &Configuration,
    base: &CellPoint,
    offsets: &Neighbourhood,
    values: &[State],
) -> Result<Configuration> {
    check_base(c, base, offsets)?;
    if values.len() != offsets.len() {
        return Err(Error::LengthMismatch { expected: offsets.len(), found: values.len() });
    }
    for &v in values {
        c.alphabet.check(v)?;
    }
    let mut out = c.clone();
    for (o, &v) in offsets.offsets().iter().zip(values) {
        let i = out.lattice.index(&(base + o));
        out.cells[i] = v;
    }
    Ok(out)
}

/// Precomputed cell indices of `x + offsets[k]` for every cell `x`.
#[derive(Debug, Clone)]
pub(crate) struct Stencil {
    width: usize,
    indices: Vec<usize>,
}

impl Stencil {
    pub(crate) fn new(lattice: &Lattice, offsets: &[CellPoint]) -> Self {
        let width = offsets.len();
        let mut indices = Vec::with_capacity(lattice.cell_count() * width);
        for p in lattice.points() {
            for o in offsets {
                indices.push(lattice.index(&(&p + o)));
            }
        }
        Stencil { width, indices }
    }

    #[inline]
    pub(crate) fn at(&self, cell: usize) -> &[usize] {
        &self.indices[cell * self.width..(cell + 1) * self.width]
    }
}
