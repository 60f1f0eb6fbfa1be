//! Pauli strings with a packed two-bits-per-site encoding.
//!
//! Phases are never tracked: everything downstream only needs to know
//! whether two strings commute.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Single-site Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    /// The three non-identity axes in canonical order.
    pub const NON_IDENTITY: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    #[inline]
    fn bits(self) -> (bool, bool) {
        match self {
            PauliAxis::I => (false, false),
            PauliAxis::X => (true, false),
            PauliAxis::Y => (true, true),
            PauliAxis::Z => (false, true),
        }
    }

    #[inline]
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliAxis::I,
            (true, false) => PauliAxis::X,
            (true, true) => PauliAxis::Y,
            (false, true) => PauliAxis::Z,
        }
    }

    pub fn is_identity(self) -> bool {
        self == PauliAxis::I
    }

    /// Position of a non-identity axis in `NON_IDENTITY`.
    pub fn index(self) -> Option<usize> {
        match self {
            PauliAxis::I => None,
            PauliAxis::X => Some(0),
            PauliAxis::Y => Some(1),
            PauliAxis::Z => Some(2),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliAxis::I => 'I',
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }
}

impl TryFrom<char> for PauliAxis {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(PauliAxis::I),
            'X' => Ok(PauliAxis::X),
            'Y' => Ok(PauliAxis::Y),
            'Z' => Ok(PauliAxis::Z),
            _ => Err(Error::InvalidPauliChar(c)),
        }
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A length-N tensor product of single-site Paulis, qubit 0 leftmost.
///
/// Stored as X and Z bit masks so that anticommutation is a parity of
/// `(a.x & b.z) ^ (a.z & b.x)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    len: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

#[inline]
fn words(len: usize) -> usize {
    len.div_ceil(64)
}

impl PauliString {
    /// All-identity string on `len` qubits.
    pub fn identity(len: usize) -> Self {
        PauliString { len, x: vec![0; words(len)], z: vec![0; words(len)] }
    }

    pub fn from_axes(axes: &[PauliAxis]) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::EmptyPauli);
        }
        let mut p = Self::identity(axes.len());
        for (i, &a) in axes.iter().enumerate() {
            p.set(i, a);
        }
        Ok(p)
    }

    /// String that is `axis` at `site` and identity elsewhere.
    pub fn single(len: usize, site: usize, axis: PauliAxis) -> Self {
        let mut p = Self::identity(len);
        p.set(site, axis);
        p
    }

    /// String supported on two sites.
    pub fn pair(len: usize, (i, a): (usize, PauliAxis), (j, b): (usize, PauliAxis)) -> Self {
        let mut p = Self::identity(len);
        p.set(i, a);
        p.set(j, b);
        p
    }

    fn set(&mut self, i: usize, a: PauliAxis) {
        let (w, bit) = (i / 64, 1u64 << (i % 64));
        let (xb, zb) = a.bits();
        if xb {
            self.x[w] |= bit;
        } else {
            self.x[w] &= !bit;
        }
        if zb {
            self.z[w] |= bit;
        } else {
            self.z[w] &= !bit;
        }
    }

    /// Copy with one site replaced.
    pub fn with_axis(&self, i: usize, a: PauliAxis) -> Self {
        let mut p = self.clone();
        p.set(i, a);
        p
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Axis at site `i`. Panics if out of range.
    #[inline]
    pub fn axis(&self, i: usize) -> PauliAxis {
        assert!(i < self.len, "site {i} out of range for {} qubits", self.len);
        let (w, bit) = (i / 64, 1u64 << (i % 64));
        PauliAxis::from_bits(self.x[w] & bit != 0, self.z[w] & bit != 0)
    }

    pub fn axes(&self) -> impl Iterator<Item = PauliAxis> + '_ {
        (0..self.len).map(move |i| self.axis(i))
    }

    /// Odd number of sites where both are non-identity and differ.
    pub fn anticommutes(&self, other: &PauliString) -> Result<bool> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { expected: self.len, found: other.len });
        }
        Ok(self.anticommutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn anticommutes_unchecked(&self, other: &PauliString) -> bool {
        let mut parity = 0u32;
        for w in 0..self.x.len() {
            parity ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones();
        }
        parity & 1 == 1
    }

    /// Bit i set iff site i is not the identity.
    pub fn weight_pattern(&self) -> Vec<bool> {
        self.axes().map(|a| !a.is_identity()).collect()
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(x, z)| (x | z).count_ones() as usize).sum()
    }

    /// Non-identity sites in ascending order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| !self.axis(i).is_identity()).collect()
    }

    /// The two axes at `positions`, in order.
    pub fn restrict(&self, positions: (usize, usize)) -> Result<(PauliAxis, PauliAxis)> {
        let (i, j) = positions;
        for k in [i, j] {
            if k >= self.len {
                return Err(Error::IndexOutOfRange { index: k, len: self.len });
            }
        }
        if i == j {
            return Err(Error::RepeatedPosition(i));
        }
        Ok((self.axis(i), self.axis(j)))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.axes().map(PauliAxis::as_char).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let axes = s.trim().chars().map(PauliAxis::try_from).collect::<Result<Vec<_>>>()?;
        PauliString::from_axes(&axes)
    }
}

/// Three-row column patterns used to fill schedule tables block by block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColumnSubstring {
    SigmaX,
    SigmaY,
    SigmaZ,
    Sigma0,
    Sigma1,
    Sigma2,
}

impl ColumnSubstring {
    pub const ALL: [ColumnSubstring; 6] = [
        ColumnSubstring::SigmaX,
        ColumnSubstring::SigmaY,
        ColumnSubstring::SigmaZ,
        ColumnSubstring::Sigma0,
        ColumnSubstring::Sigma1,
        ColumnSubstring::Sigma2,
    ];

    pub fn rows(self) -> [PauliAxis; 3] {
        use PauliAxis::{X, Y, Z};
        match self {
            ColumnSubstring::SigmaX => [X, X, X],
            ColumnSubstring::SigmaY => [Y, Y, Y],
            ColumnSubstring::SigmaZ => [Z, Z, Z],
            ColumnSubstring::Sigma0 => [X, Y, Z],
            ColumnSubstring::Sigma1 => [Y, Z, X],
            ColumnSubstring::Sigma2 => [Z, X, Y],
        }
    }

    /// Row-wise pairing of two column substrings.
    pub fn join(self, other: ColumnSubstring) -> [(PauliAxis, PauliAxis); 3] {
        elementwise_join(self, other)
    }
}

pub fn elementwise_join(a: ColumnSubstring, b: ColumnSubstring) -> [(PauliAxis, PauliAxis); 3] {
    let (ra, rb) = (a.rows(), b.rows());
    [(ra[0], rb[0]), (ra[1], rb[1]), (ra[2], rb[2])]
}
