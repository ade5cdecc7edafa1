use crate::error::{Error, Result};
use crate::lattice::Configuration;
use crate::rule::{Alphabet, State};

/// A product of alphabets, packed in mixed radix with the first factor most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductAlphabet {
    factors: Vec<usize>,
    alphabet: Alphabet,
}

impl ProductAlphabet {
    pub fn new(factor_sizes: &[usize]) -> Result<Self> {
        Ok(ProductAlphabet { factors: factor_sizes.to_vec(), alphabet: Alphabet::product(factor_sizes)? })
    }

    pub fn factor_sizes(&self) -> &[usize] {
        &self.factors
    }

    pub fn size(&self) -> usize {
        self.alphabet.size()
    }

    /// The composite alphabet, which prints states as `a.b`.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Packs one component per factor. Components are not range checked;
    /// use [`Alphabet::pack`] for checked packing.
    #[inline]
    pub fn pack(&self, parts: &[State]) -> State {
        debug_assert_eq!(parts.len(), self.factors.len());
        parts.iter().zip(&self.factors).fold(0, |acc, (&p, &f)| acc * f as State + p)
    }

    #[inline]
    pub fn unpack(&self, mut s: State) -> Vec<State> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &f) in out.iter_mut().zip(&self.factors).rev() {
            *slot = s % f as State;
            s /= f as State;
        }
        out
    }

    /// Component `i` of a packed state.
    #[inline]
    pub fn component(&self, s: State, i: usize) -> State {
        let below: usize = self.factors[i + 1..].iter().product();
        (s / below as State) % self.factors[i] as State
    }

    /// Zips per-factor configurations on a common lattice into one
    /// composite configuration.
    pub fn pack_configs(&self, parts: &[&Configuration]) -> Result<Configuration> {
        if parts.len() != self.factors.len() {
            return Err(Error::LengthMismatch { expected: self.factors.len(), found: parts.len() });
        }
        let lattice = parts[0].lattice();
        for (p, &f) in parts.iter().zip(&self.factors) {
            if p.lattice() != lattice {
                return Err(Error::Invalid("register configurations live on different lattices".into()));
            }
            if p.alphabet().size() != f {
                return Err(Error::AlphabetMismatch(f, p.alphabet().size()));
            }
        }
        let cells = (0..lattice.cell_count())
            .map(|i| self.pack(&parts.iter().map(|p| p.cells()[i]).collect::<Vec<_>>()))
            .collect();
        Configuration::new(lattice.clone(), self.alphabet.clone(), cells)
    }

    /// The configuration of factor `i` alone.
    pub fn project(&self, c: &Configuration, i: usize) -> Result<Configuration> {
        if c.alphabet().size() != self.size() {
            return Err(Error::AlphabetMismatch(self.size(), c.alphabet().size()));
        }
        c.map_states(Alphabet::new(self.factors[i])?, |s| self.component(s, i))
    }
}

/// A bijection from the alphabet onto `Z_n`, used to add and subtract
/// states modulo the alphabet size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdditionRelation {
    to_int: Vec<State>,
    from_int: Vec<State>,
}

impl AdditionRelation {
    /// `bijection[s]` is the integer assigned to state `s`.
    pub fn new(bijection: Vec<State>) -> Result<Self> {
        let n = bijection.len();
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let mut from_int = vec![State::MAX; n];
        for (s, &v) in bijection.iter().enumerate() {
            if v as usize >= n || from_int[v as usize] != State::MAX {
                return Err(Error::Invalid(format!("{bijection:?} is not a permutation of 0..{n}")));
            }
            from_int[v as usize] = s as State;
        }
        Ok(AdditionRelation { to_int: bijection, from_int })
    }

    pub fn identity(size: usize) -> Result<Self> {
        Self::new((0..size as State).collect())
    }

    pub fn size(&self) -> usize {
        self.to_int.len()
    }

    pub fn bijection(&self) -> &[State] {
        &self.to_int
    }

    pub fn add(&self, a: State, b: State) -> State {
        let n = self.size() as State;
        self.from_int[((self.to_int[a as usize] + self.to_int[b as usize]) % n) as usize]
    }

    pub fn sub(&self, a: State, b: State) -> State {
        let n = self.size() as State;
        self.from_int[((self.to_int[a as usize] + n - self.to_int[b as usize]) % n) as usize]
    }
}
