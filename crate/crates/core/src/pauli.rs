//! Pauli letters, Pauli strings and real-weighted Pauli sums.
//!
//! A string of length `n` is indexed by qubit, qubit 0 first. Basis indices
//! are base-4 little-endian: qubit 0 is the least-significant digit and the
//! letter digits are `I=0, X=1, Y=2, Z=3`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Pauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

/// Power of `i` multiplying a Pauli product, in `0..4`.
pub type Phase = u8;

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(idx: usize) -> Pauli {
        Pauli::ALL[idx & 3]
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' | 'i' => Some(Pauli::I),
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    #[inline]
    pub fn commutes_with(self, other: Pauli) -> bool {
        self == Pauli::I || other == Pauli::I || self == other
    }

    /// `self * other = i^phase * result`.
    pub fn mul(self, other: Pauli) -> (Phase, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Tensor product of single-qubit Paulis; `letters[q]` acts on qubit `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            letters: vec![Pauli::I; n],
        }
    }

    /// Length-`n` string with `p` on qubit `q` and identities elsewhere.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.letters[q] = p;
        s
    }

    /// Length-`n` string from `(qubit, letter)` pairs.
    pub fn from_sparse(n: usize, entries: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = Self::identity(n);
        for &(q, p) in entries {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
            s.letters[q] = p;
        }
        Ok(s)
    }

    /// Decodes a base-4 little-endian basis index.
    pub fn from_index(mut idx: usize, n: usize) -> Self {
        let mut letters = Vec::with_capacity(n);
        for _ in 0..n {
            letters.push(Pauli::from_index(idx & 3));
            idx >>= 2;
        }
        Self { letters }
    }

    pub fn index(&self) -> usize {
        self.letters
            .iter()
            .rev()
            .fold(0usize, |acc, p| (acc << 2) | p.index())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn get(&self, q: usize) -> Pauli {
        self.letters[q]
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(q, _)| q)
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        debug_assert_eq!(self.len(), other.len());
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| !a.commutes_with(**b))
            .count();
        anti % 2 == 0
    }

    /// `self * other = i^phase * result`.
    pub fn mul(&self, other: &PauliString) -> Result<(Phase, PauliString)> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        let mut phase = 0u8;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (ph, p) = a.mul(b);
                phase = (phase + ph) & 3;
                p
            })
            .collect();
        Ok((phase, PauliString { letters }))
    }

    /// Letters at the given qubits, in the given order.
    pub fn restrict(&self, qubits: &[usize]) -> PauliString {
        PauliString {
            letters: qubits.iter().map(|&q| self.letters[q]).collect(),
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| {
                Pauli::from_char(c).ok_or_else(|| Error::Parse(format!("bad Pauli letter '{c}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        Ok(PauliString { letters })
    }
}

/// Real linear combination of equal-length Pauli strings.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: vec![] }
    }

    pub fn from_string(p: PauliString) -> Self {
        Self {
            n: p.len(),
            terms: vec![(1.0, p)],
        }
    }

    pub fn new(n: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        if let Some((_, bad)) = terms.iter().find(|(_, p)| p.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(Self { n, terms })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.terms.iter().all(|(w, _)| w.abs() <= tol)
    }

    /// Merges repeated strings and drops weights below `tol`.
    pub fn simplified(&self, tol: f64) -> PauliSum {
        let mut merged: Vec<(f64, PauliString)> = Vec::new();
        for (w, p) in &self.terms {
            match merged.iter_mut().find(|(_, q)| q == p) {
                Some(entry) => entry.0 += w,
                None => merged.push((*w, p.clone())),
            }
        }
        merged.retain(|(w, _)| w.abs() > tol);
        merged.sort_by(|a, b| a.1.cmp(&b.1));
        PauliSum {
            n: self.n,
            terms: merged,
        }
    }

    pub fn pairwise_commuting(&self) -> bool {
        self.terms.iter().enumerate().all(|(i, (_, a))| {
            self.terms[i + 1..]
                .iter()
                .all(|(_, b)| a.commutes_with(b))
        })
    }

    /// `O²` for a Hermitian sum; anticommuting cross terms cancel.
    pub fn square(&self) -> PauliSum {
        let mut out = Vec::new();
        for (wa, a) in &self.terms {
            for (wb, b) in &self.terms {
                if !a.commutes_with(b) {
                    continue;
                }
                let (phase, p) = a.mul(b).expect("terms share a length");
                // commuting products carry a real phase
                let sign = if phase == 0 { 1.0 } else { -1.0 };
                out.push((sign * wa * wb, p));
            }
        }
        PauliSum { n: self.n, terms: out }.simplified(0.0)
    }

    /// Sum of absolute weights, a bound on the operator norm.
    pub fn weight_norm(&self) -> f64 {
        self.terms.iter().map(|(w, _)| w.abs()).sum()
    }
}
