use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use crate::error::{Error, Result};

/// A vector over GF(2) indexed by edge ids.
///
/// Bit `i` is edge `i`. Unused high bits of the last word are always zero, so
/// word-wise equality and hashing agree with set equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeVector {
    len: usize,
    words: Vec<u64>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl EdgeVector {
    pub fn zeros(len: usize) -> Self {
        EdgeVector { len, words: vec![0; word_count(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = EdgeVector { len, words: vec![u64::MAX; word_count(len)] };
        v.clear_tail();
        v
    }

    pub fn from_edges<I: IntoIterator<Item = usize>>(len: usize, edges: I) -> Self {
        let mut v = Self::zeros(len);
        for e in edges {
            v.set(e, true);
        }
        v
    }

    /// Builds a vector from the low `len` bits of `mask` (edge `i` = bit `i`).
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64, "from_mask supports at most 64 edges");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = mask;
            v.clear_tail();
        }
        v
    }

    /// The low-64-bit subset index; only meaningful when `len <= 64`.
    pub fn to_mask(&self) -> u64 {
        debug_assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, e: usize) -> bool {
        assert!(e < self.len, "edge {e} out of range {}", self.len);
        self.words[e / 64] >> (e % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, e: usize, value: bool) {
        assert!(e < self.len, "edge {e} out of range {}", self.len);
        let bit = 1u64 << (e % 64);
        if value {
            self.words[e / 64] |= bit;
        } else {
            self.words[e / 64] &= !bit;
        }
    }

    #[inline]
    pub fn toggle(&mut self, e: usize) {
        assert!(e < self.len, "edge {e} out of range {}", self.len);
        self.words[e / 64] ^= 1u64 << (e % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + b)
            })
        })
    }

    fn check_len(&self, other: &EdgeVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { expected: self.len, actual: other.len });
        }
        Ok(())
    }

    pub fn try_xor_assign(&mut self, other: &EdgeVector) -> Result<()> {
        self.check_len(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// `self ⊆ other` as edge sets.
    pub fn is_subset_of(&self, other: &EdgeVector) -> bool {
        self.len == other.len && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &EdgeVector) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn and(&self, other: &EdgeVector) -> EdgeVector {
        assert_eq!(self.len, other.len);
        EdgeVector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn complement(&self) -> EdgeVector {
        let mut v = EdgeVector { len: self.len, words: self.words.iter().map(|w| !w).collect() };
        v.clear_tail();
        v
    }

    /// Hex encoding of the vector read as a binary number with edge 0 as the
    /// least significant bit, zero padded to `ceil(len / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let bit = d * 4;
            let mut nibble = 0u64;
            for j in 0..4 {
                if bit + j < self.len && self.get(bit + j) {
                    nibble |= 1 << j;
                }
            }
            s.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        s
    }

    pub fn from_hex(len: usize, hex: &str) -> Result<Self> {
        let mut v = Self::zeros(len);
        for (d, c) in hex.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::InvalidParameter(format!("bad hex digit `{c}`")))?;
            for j in 0..4 {
                if nibble >> j & 1 == 1 {
                    let e = d * 4 + j;
                    if e >= len {
                        return Err(Error::InvalidParameter(format!(
                            "hex `{hex}` has bits beyond length {len}"
                        )));
                    }
                    v.set(e, true);
                }
            }
        }
        Ok(v)
    }
}

impl BitXorAssign<&EdgeVector> for EdgeVector {
    fn bitxor_assign(&mut self, rhs: &EdgeVector) {
        self.try_xor_assign(rhs).expect("edge vector length mismatch");
    }
}

impl BitXor<&EdgeVector> for &EdgeVector {
    type Output = EdgeVector;
    fn bitxor(self, rhs: &EdgeVector) -> EdgeVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Debug for EdgeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EdgeVector[{}]{{", self.len)?;
        for (i, e) in self.iter_ones().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Coordinatewise parity of a list of equal-length vectors. An empty list
/// sums to the zero vector of length `len`.
pub fn xor_sum<'a, I>(len: usize, vs: I) -> Result<EdgeVector>
where
    I: IntoIterator<Item = &'a EdgeVector>,
{
    let mut acc = EdgeVector::zeros(len);
    for v in vs {
        acc.try_xor_assign(v)?;
    }
    Ok(acc)
}
