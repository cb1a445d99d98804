use super::EdgeVector;
use crate::error::{Error, Result};

/// Reduced row-echelon basis over GF(2).
///
/// Every row owns one pivot edge and no other row has that bit set, so a
/// vector reduces against the basis in a single pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Basis {
    len: usize,
    rows: Vec<EdgeVector>,
    pivots: Vec<usize>,
}

impl Gf2Basis {
    pub fn new(len: usize) -> Self {
        Gf2Basis { len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a EdgeVector>>(len: usize, vs: I) -> Result<Self> {
        let mut b = Self::new(len);
        for v in vs {
            b.insert(v)?;
        }
        Ok(b)
    }

    pub fn vector_len(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[EdgeVector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, v: &EdgeVector) -> Result<()> {
        if v.len() != self.len {
            return Err(Error::LengthMismatch { expected: self.len, actual: v.len() });
        }
        Ok(())
    }

    /// `v` minus its projection onto the span; zero iff `v` is in the span.
    pub fn reduce(&self, v: &EdgeVector) -> Result<EdgeVector> {
        self.check(v)?;
        let mut r = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r.get(p) {
                r ^= row;
            }
        }
        Ok(r)
    }

    pub fn contains(&self, v: &EdgeVector) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Adds `v` to the basis. Returns `false`, leaving the basis untouched,
    /// when `v` is already in the span.
    pub fn insert(&mut self, v: &EdgeVector) -> Result<bool> {
        let r = self.reduce(v)?;
        let Some(pivot) = r.first_one() else {
            return Ok(false);
        };
        for row in &mut self.rows {
            if row.get(pivot) {
                *row ^= &r;
            }
        }
        self.rows.push(r);
        self.pivots.push(pivot);
        Ok(true)
    }
}
