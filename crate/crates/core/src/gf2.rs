//! Exact linear algebra over GF(2).
//!
//! Bits are packed into `u64` words; all public operations are defined at the
//! semantic bit level, so the packing never leaks. Index 0 is the first
//! component of a vector.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::Error;

/// Default cap on the number of codewords [`span_enumerate`] will produce.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 20;

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    /// All-zero vector of the given length. `len` must be at least 1.
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "BitVector length must be positive");
        BitVector {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Builds a vector from 0/1 entries.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            assert!(b <= 1, "entries must be 0 or 1");
            if b == 1 {
                v.set(i, true);
            }
        }
        v
    }

    /// Standard basis vector e_i (0-based).
    pub fn basis(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    /// Interprets the low `len` bits of `x` (bit 0 = component 0).
    pub fn from_integer(len: usize, x: u64) -> Self {
        assert!(len >= 1 && len <= 64);
        let mut v = Self::zeros(len);
        v.words[0] = if len == 64 { x } else { x & ((1u64 << len) - 1) };
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false // len >= 1 by construction
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Number of set bits.
    pub fn hamming_weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// In-place XOR with another vector of the same length.
    pub fn xor_assign(&mut self, other: &BitVector) -> Result<(), Error> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                left: self.len,
                right: other.len,
            });
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// Index of the lowest set bit, if any.
    pub fn first_set(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate() {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    /// The vector as an integer mask (bit i = component i). Only available
    /// for lengths up to 64.
    pub fn as_mask(&self) -> Result<u64, Error> {
        if self.len > 64 {
            return Err(Error::InvalidParameter(alloc::format!(
                "vector of length {} does not fit a 64-bit mask",
                self.len
            )));
        }
        Ok(self.words[0])
    }

    /// Iterator over the bits as booleans.
    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// 0-based indices of the set bits.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for b in self.iter() {
            write!(f, "{}", u8::from(b))?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

/// GF(2) inner product u·v = Σ uᵢvᵢ mod 2.
pub fn inner_product(u: &BitVector, v: &BitVector) -> Result<u8, Error> {
    if u.len != v.len {
        return Err(Error::DimensionMismatch {
            left: u.len,
            right: v.len,
        });
    }
    let parity: u32 = u
        .words
        .iter()
        .zip(&v.words)
        .map(|(a, b)| (a & b).count_ones())
        .sum();
    Ok((parity & 1) as u8)
}

/// A bit matrix stored as a list of row vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    n_cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    /// Builds a matrix from rows of equal positive length.
    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self, Error> {
        let n_cols = match rows.first() {
            Some(r) => r.len(),
            None => {
                return Err(Error::InvalidParameter(
                    "matrix must have at least one row".into(),
                ))
            }
        };
        for r in &rows {
            if r.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    left: n_cols,
                    right: r.len(),
                });
            }
        }
        Ok(BitMatrix { n_cols, rows })
    }

    /// Identity matrix of size n.
    pub fn identity(n: usize) -> Self {
        BitMatrix {
            n_cols: n,
            rows: (0..n).map(|i| BitVector::basis(n, i)).collect(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].get(col)
    }

    /// Column `j` as a vector of length `n_rows`.
    pub fn column(&self, j: usize) -> BitVector {
        let mut v = BitVector::zeros(self.n_rows());
        for (i, row) in self.rows.iter().enumerate() {
            if row.get(j) {
                v.set(i, true);
            }
        }
        v
    }

    /// Returns a copy with column `j` added (XORed) into column `i`.
    /// The column span is unchanged.
    pub fn col_add(&self, i: usize, j: usize) -> Result<Self, Error> {
        if i == j {
            return Err(Error::InvalidParameter(
                "col_add requires two distinct columns".into(),
            ));
        }
        if i >= self.n_cols || j >= self.n_cols {
            return Err(Error::InvalidParameter(alloc::format!(
                "column index out of range: {i}, {j} (n_cols = {})",
                self.n_cols
            )));
        }
        let mut out = self.clone();
        for row in &mut out.rows {
            if row.get(j) {
                let flipped = !row.get(i);
                row.set(i, flipped);
            }
        }
        Ok(out)
    }
}

/// Trial-division primality test; q values in this protocol family are tiny.
pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The set { j ∈ [1, q−1] : x² ≡ j mod q for some x }, for odd prime q.
pub fn quadratic_residues(q: u64) -> Result<BTreeSet<u64>, Error> {
    if !is_prime(q) || q == 2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "{q} is not an odd prime"
        )));
    }
    Ok((1..q).map(|x| x * x % q).collect())
}

/// GF(2) row reduction; returns an independent basis of the span of
/// `generators`, each basis vector carrying a distinct pivot bit.
pub fn row_reduce(generators: &[BitVector]) -> Result<Vec<BitVector>, Error> {
    let len = match generators.first() {
        Some(g) => g.len(),
        None => {
            return Err(Error::InvalidParameter(
                "at least one generator required".into(),
            ))
        }
    };
    let mut basis: Vec<(usize, BitVector)> = Vec::new();
    for g in generators {
        if g.len() != len {
            return Err(Error::DimensionMismatch {
                left: len,
                right: g.len(),
            });
        }
        let mut v = g.clone();
        loop {
            match v.first_set() {
                None => break,
                Some(pivot) => match basis.iter().find(|(p, _)| *p == pivot) {
                    Some((_, b)) => {
                        let b = b.clone();
                        v.xor_assign(&b)?;
                    }
                    None => {
                        basis.push((pivot, v));
                        break;
                    }
                },
            }
        }
    }
    Ok(basis.into_iter().map(|(_, b)| b).collect())
}

/// Enumerates all 2^r codewords spanned by `generators` (rank r), each
/// exactly once, with the default cap of [`DEFAULT_ENUM_CAP`].
pub fn span_enumerate(generators: &[BitVector]) -> Result<Vec<BitVector>, Error> {
    span_enumerate_with_cap(generators, DEFAULT_ENUM_CAP)
}

/// [`span_enumerate`] with an explicit cap on the codeword count.
///
/// Dependent generators are deduplicated by row reduction first; the span is
/// then walked in Gray-code order so each step flips one basis vector.
pub fn span_enumerate_with_cap(
    generators: &[BitVector],
    cap: u64,
) -> Result<Vec<BitVector>, Error> {
    let basis = row_reduce(generators)?;
    let rank = basis.len() as u32;
    if rank >= 63 || (1u64 << rank) > cap {
        return Err(Error::ResourceLimit {
            required: 1u64.checked_shl(rank).unwrap_or(u64::MAX),
            cap,
        });
    }
    let len = generators[0].len();
    let mut codewords = Vec::with_capacity(1 << rank);
    let mut current = BitVector::zeros(len);
    codewords.push(current.clone());
    for k in 1u64..(1 << rank) {
        let flip = k.trailing_zeros() as usize;
        current.xor_assign(&basis[flip])?;
        codewords.push(current.clone());
    }
    Ok(codewords)
}
