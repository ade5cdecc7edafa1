//! Alphabets and explicit rule tables.

use std::fmt;

use crate::error::{Error, Result};

/// A cell state. States of an alphabet of size `n` are `0..n`.
pub type State = u32;

/// Largest number of input tuples a [`RuleTable`] may tabulate.
pub const MAX_TABLE_ROWS: usize = 1 << 24;

/// A finite alphabet `0..size`.
///
/// An alphabet may remember a factorization (for example `2x4` for a
/// two-register cell). States are still plain integers; the factorization
/// only changes how states are written and read back (`"1.3"`), using
/// mixed radix with the first factor most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    size: usize,
    factors: Option<Vec<usize>>,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Alphabet { size, factors: None })
    }

    /// The product alphabet with the given factor sizes.
    pub fn product(factors: &[usize]) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::EmptyAlphabet);
        }
        let size = factors
            .iter()
            .try_fold(1usize, |acc, &f| acc.checked_mul(f))
            .filter(|&s| s <= State::MAX as usize)
            .ok_or_else(|| Error::Invalid(format!("product alphabet {factors:?} is too large")))?;
        let factors = (factors.len() > 1).then(|| factors.to_vec());
        Ok(Alphabet { size, factors })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Factor sizes, if this is a product alphabet.
    pub fn factors(&self) -> Option<&[usize]> {
        self.factors.as_deref()
    }

    pub fn states(&self) -> impl Iterator<Item = State> {
        0..self.size as State
    }

    pub fn check(&self, s: State) -> Result<()> {
        if (s as usize) < self.size {
            Ok(())
        } else {
            Err(Error::StateOutOfRange { state: s, size: self.size })
        }
    }

    /// Splits `s` into factor components (a single component for a plain
    /// alphabet).
    pub fn unpack(&self, mut s: State) -> Vec<State> {
        match &self.factors {
            None => vec![s],
            Some(fs) => {
                let mut out = vec![0; fs.len()];
                for (slot, &f) in out.iter_mut().zip(fs).rev() {
                    *slot = s % f as State;
                    s /= f as State;
                }
                out
            }
        }
    }

    /// Inverse of [`unpack`](Self::unpack).
    pub fn pack(&self, parts: &[State]) -> Result<State> {
        match &self.factors {
            None => match parts {
                [s] => self.check(*s).map(|_| *s),
                _ => Err(Error::LengthMismatch { expected: 1, found: parts.len() }),
            },
            Some(fs) => {
                if parts.len() != fs.len() {
                    return Err(Error::LengthMismatch { expected: fs.len(), found: parts.len() });
                }
                let mut s: State = 0;
                for (&p, &f) in parts.iter().zip(fs) {
                    if p as usize >= f {
                        return Err(Error::StateOutOfRange { state: p, size: f });
                    }
                    s = s * f as State + p;
                }
                Ok(s)
            }
        }
    }

    pub fn format_state(&self, s: State) -> String {
        match &self.factors {
            None => s.to_string(),
            Some(_) => self.unpack(s).iter().map(|p| p.to_string()).collect::<Vec<_>>().join("."),
        }
    }

    /// Parses `"3"` for plain alphabets or `"1.3"` for product alphabets.
    pub fn parse_state(&self, text: &str) -> Result<State> {
        let parts = text
            .split('.')
            .map(|p| p.parse::<State>().map_err(|_| Error::Invalid(format!("bad state {text:?}"))))
            .collect::<Result<Vec<_>>>()?;
        self.pack(&parts)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.factors {
            None => write!(f, "{}", self.size),
            Some(fs) => {
                let parts: Vec<_> = fs.iter().map(|n| n.to_string()).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

/// A total map from state tuples of length `arity_in` to state tuples of
/// length `arity_out`.
///
/// Rows are stored densely. Input tuples are ranked lexicographically with
/// the first component most significant, so row order is the natural sorted
/// order of the inputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleTable {
    alphabet: Alphabet,
    arity_in: usize,
    arity_out: usize,
    entries: Vec<State>,
}

pub(crate) fn row_count(size: usize, arity: usize) -> Result<usize> {
    u32::try_from(arity)
        .ok()
        .and_then(|a| size.checked_pow(a))
        .filter(|&n| n <= MAX_TABLE_ROWS)
        .ok_or(Error::TableTooLarge { size, arity })
}

impl RuleTable {
    /// Builds a table from a dense row-major entry list.
    pub fn from_entries(alphabet: Alphabet, arity_in: usize, arity_out: usize, entries: Vec<State>) -> Result<Self> {
        if arity_in == 0 || arity_out == 0 {
            return Err(Error::ArityMismatch { arity_in, arity_out });
        }
        let rows = row_count(alphabet.size(), arity_in)?;
        if entries.len() != rows * arity_out {
            return Err(Error::LengthMismatch { expected: rows * arity_out, found: entries.len() });
        }
        for &s in &entries {
            alphabet.check(s)?;
        }
        Ok(RuleTable { alphabet, arity_in, arity_out, entries })
    }

    /// Tabulates `f` over every input tuple.
    pub fn from_fn(
        alphabet: Alphabet,
        arity_in: usize,
        arity_out: usize,
        mut f: impl FnMut(&[State]) -> Vec<State>,
    ) -> Result<Self> {
        Self::try_from_fn(alphabet, arity_in, arity_out, |t| Ok(f(t)))
    }

    pub fn try_from_fn(
        alphabet: Alphabet,
        arity_in: usize,
        arity_out: usize,
        mut f: impl FnMut(&[State]) -> Result<Vec<State>>,
    ) -> Result<Self> {
        if arity_in == 0 || arity_out == 0 {
            return Err(Error::ArityMismatch { arity_in, arity_out });
        }
        let rows = row_count(alphabet.size(), arity_in)?;
        let mut entries = Vec::with_capacity(rows * arity_out);
        let mut input = vec![0; arity_in];
        for _ in 0..rows {
            let out = f(&input)?;
            if out.len() != arity_out {
                return Err(Error::LengthMismatch { expected: arity_out, found: out.len() });
            }
            entries.extend(out);
            increment(&mut input, alphabet.size());
        }
        Self::from_entries(alphabet, arity_in, arity_out, entries)
    }

    pub fn identity(alphabet: Alphabet, arity: usize) -> Result<Self> {
        Self::from_fn(alphabet, arity, arity, |t| t.to_vec())
    }

    /// Single-cell table from an image list: `s -> images[s]`.
    pub fn unary(alphabet: Alphabet, images: &[State]) -> Result<Self> {
        Self::from_entries(alphabet, 1, 1, images.to_vec())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn arity_in(&self) -> usize {
        self.arity_in
    }

    pub fn arity_out(&self) -> usize {
        self.arity_out
    }

    pub fn rows(&self) -> usize {
        self.entries.len() / self.arity_out
    }

    pub fn entries(&self) -> &[State] {
        &self.entries
    }

    /// Row index of an input tuple.
    #[inline]
    pub fn index_of(&self, input: &[State]) -> usize {
        debug_assert_eq!(input.len(), self.arity_in);
        let q = self.alphabet.size();
        input.iter().fold(0usize, |acc, &s| acc * q + s as usize)
    }

    /// Input tuple of row `index`.
    pub fn tuple_of(&self, mut index: usize) -> Vec<State> {
        let q = self.alphabet.size();
        let mut t = vec![0; self.arity_in];
        for slot in t.iter_mut().rev() {
            *slot = (index % q) as State;
            index /= q;
        }
        t
    }

    #[inline]
    pub fn row(&self, index: usize) -> &[State] {
        &self.entries[index * self.arity_out..(index + 1) * self.arity_out]
    }

    /// Output tuple for `input`.
    ///
    /// Panics if `input` has the wrong length or holds a state outside the
    /// alphabet.
    pub fn apply(&self, input: &[State]) -> &[State] {
        assert_eq!(input.len(), self.arity_in, "input tuple has wrong arity");
        assert!(input.iter().all(|&s| (s as usize) < self.alphabet.size()), "state out of range");
        self.row(self.index_of(input))
    }

    /// Output of a single-output table.
    pub fn apply1(&self, input: &[State]) -> State {
        self.apply(input)[0]
    }

    /// Iterates `(input, output)` pairs in row order.
    pub fn iter_rows(&self) -> impl Iterator<Item = (Vec<State>, &[State])> + '_ {
        (0..self.rows()).map(move |i| (self.tuple_of(i), self.row(i)))
    }

    /// Whether the table realises a bijection on tuples (requires equal
    /// arities).
    pub(crate) fn is_permutation(&self) -> bool {
        if self.arity_in != self.arity_out {
            return false;
        }
        let mut seen = vec![false; self.rows()];
        for i in 0..self.rows() {
            let j = self.index_of(self.row(i));
            if std::mem::replace(&mut seen[j], true) {
                return false;
            }
        }
        true
    }
}

/// Odometer increment over `0..q` digits, last digit fastest. Returns false
/// on wrap-around.
pub(crate) fn increment(digits: &mut [State], q: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if (*d as usize) < q {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_alphabet_pack_unpack() {
        let a = Alphabet::product(&[2, 4]).unwrap();
        assert_eq!(a.size(), 8);
        assert_eq!(a.unpack(7), vec![1, 3]);
        assert_eq!(a.pack(&[1, 3]).unwrap(), 7);
        assert_eq!(a.format_state(6), "1.2");
        assert_eq!(a.parse_state("1.2").unwrap(), 6);
        assert!(a.parse_state("2.0").is_err());
        assert!(a.parse_state("1").is_err());
        assert_eq!(a.to_string(), "2x4");
    }

    #[test]
    fn plain_alphabet_rejects_dotted_states() {
        let a = Alphabet::new(3).unwrap();
        assert_eq!(a.parse_state("2").unwrap(), 2);
        assert!(a.parse_state("1.1").is_err());
        assert!(a.parse_state("3").is_err());
        assert_eq!(Alphabet::new(0), Err(Error::EmptyAlphabet));
    }

    #[test]
    fn rows_are_lexicographic() {
        let t = RuleTable::identity(Alphabet::new(3).unwrap(), 2).unwrap();
        assert_eq!(t.rows(), 9);
        assert_eq!(t.tuple_of(5), vec![1, 2]);
        assert_eq!(t.index_of(&[1, 2]), 5);
        assert_eq!(t.apply(&[2, 0]), &[2, 0]);
    }

    #[test]
    fn from_entries_validates_shape_and_range() {
        let a = Alphabet::new(2).unwrap();
        assert!(matches!(
            RuleTable::from_entries(a.clone(), 1, 1, vec![0]),
            Err(Error::LengthMismatch { expected: 2, found: 1 })
        ));
        assert!(matches!(RuleTable::from_entries(a.clone(), 1, 1, vec![0, 2]), Err(Error::StateOutOfRange { .. })));
        assert!(RuleTable::from_entries(a, 0, 1, vec![]).is_err());
    }

    #[test]
    fn oversized_tables_are_refused() {
        let a = Alphabet::new(16).unwrap();
        assert!(matches!(RuleTable::identity(a, 8), Err(Error::TableTooLarge { .. })));
    }

    #[test]
    fn permutation_detection() {
        let a = Alphabet::new(2).unwrap();
        let swap = RuleTable::from_fn(a.clone(), 2, 2, |t| vec![t[1], t[0]]).unwrap();
        assert!(swap.is_permutation());
        let zero = RuleTable::unary(a, &[0, 0]).unwrap();
        assert!(!zero.is_permutation());
    }
}
