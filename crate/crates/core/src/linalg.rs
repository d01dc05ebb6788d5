//! Dense matrices over `F_q` and reduced row echelon form.
//!
//! RREF is the canonical form used everywhere downstream: two subspaces are
//! equal exactly when their RREF bases agree entry by entry.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::FieldSpec;

/// Row-major dense matrix with entries encoded as field element codes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixGF {
    field: &'static FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

/// Output of [`MatrixGF::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: MatrixGF,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl MatrixGF {
    pub fn new(field: &'static FieldSpec, rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        for &e in &entries {
            field.check(e as u32)?;
        }
        Ok(MatrixGF {
            field,
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix without validating entry codes.
    pub(crate) fn from_raw(field: &'static FieldSpec, rows: usize, cols: usize, entries: Vec<u8>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        MatrixGF {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(field: &'static FieldSpec, rows: usize, cols: usize) -> Self {
        Self::from_raw(field, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(field: &'static FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows<R: AsRef<[u8]>>(field: &'static FieldSpec, cols: usize, rows: &[R]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        Self::new(field, rows.len(), cols, entries)
    }

    pub fn field(&self) -> &'static FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u8]> {
        self.entries.chunks(self.cols.max(1)).take(self.rows)
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &MatrixGF) -> Result<MatrixGF> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Self::from_raw(self.field, self.rows + other.rows, self.cols, entries))
    }

    /// Reduced row echelon form, rank and pivot columns.
    pub fn rref(&self) -> Rref {
        if self.field.q() == 2 && self.cols <= 64 {
            return self.rref_gf2();
        }
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.entries.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    m.swap(p * cols + j, rank * cols + j);
                }
            }
            let inv = f.inv_nonzero(m[rank * cols + c]);
            if inv != 1 {
                for j in c..cols {
                    m[rank * cols + j] = f.mul(m[rank * cols + j], inv);
                }
            }
            for r in 0..rows {
                let factor = m[r * cols + c];
                if r == rank || factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..cols {
                    let v = f.mul(neg, m[rank * cols + j]);
                    m[r * cols + j] = f.add(m[r * cols + j], v);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        Rref {
            matrix: Self::from_raw(f, rows, cols, m),
            rank,
            pivots,
        }
    }

    fn rref_gf2(&self) -> Rref {
        let mut packed: Vec<u64> = self.row_iter().map(gf2::pack).collect();
        let pivots = gf2::rref(&mut packed, self.cols);
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for &w in &packed {
            entries.extend(gf2::unpack(w, self.cols));
        }
        entries.resize(self.rows * self.cols, 0);
        Rref {
            matrix: Self::from_raw(self.field, self.rows, self.cols, entries),
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        if self.field.q() == 2 && self.cols <= 64 {
            let mut packed: Vec<u64> = self.row_iter().map(gf2::pack).collect();
            return gf2::rank(&mut packed);
        }
        self.rref().rank
    }

    /// Whether `v` lies in the row space, decided by comparing ranks.
    pub fn row_space_contains(&self, v: &[u8]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        for &e in v {
            self.field.check(e as u32)?;
        }
        let extended = self.stack(&Self::from_raw(self.field, 1, self.cols, v.to_vec()))?;
        Ok(extended.rank() == self.rank())
    }

    /// Drops trailing zero rows (RREF keeps them at the bottom).
    pub fn truncate_rows(&mut self, rows: usize) {
        self.rows = rows.min(self.rows);
        self.entries.truncate(self.rows * self.cols);
    }
}

impl fmt::Debug for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[", self.field)?;
        for (i, r) in self.row_iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            for &e in r {
                write!(f, "{:x}", e)?;
            }
        }
        write!(f, "]")
    }
}

/// Bit-packed rows over `F_2`; bit `j` of a word is column `j`.
pub mod gf2 {
    pub fn pack(row: &[u8]) -> u64 {
        row.iter()
            .enumerate()
            .fold(0u64, |acc, (j, &e)| if e & 1 == 1 { acc | (1u64 << j) } else { acc })
    }

    pub fn unpack(word: u64, cols: usize) -> impl Iterator<Item = u8> {
        (0..cols).map(move |j| ((word >> j) & 1) as u8)
    }

    /// In-place RREF; nonzero rows end up first, in pivot order. Returns the pivots.
    pub fn rref(rows: &mut [u64], cols: usize) -> Vec<usize> {
        let mut rank = 0;
        let mut pivots = Vec::new();
        for c in 0..cols {
            if rank == rows.len() {
                break;
            }
            let bit = 1u64 << c;
            let Some(p) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
                continue;
            };
            rows.swap(p, rank);
            let pivot_row = rows[rank];
            for (r, w) in rows.iter_mut().enumerate() {
                if r != rank && *w & bit != 0 {
                    *w ^= pivot_row;
                }
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    /// Rank by an xor basis keyed on the lowest set bit. Clobbers `rows`.
    pub fn rank(rows: &mut [u64]) -> usize {
        let mut basis = [0u64; 64];
        let mut rank = 0;
        for &w in rows.iter() {
            let mut v = w;
            while v != 0 {
                let low = v.trailing_zeros() as usize;
                if basis[low] == 0 {
                    basis[low] = v;
                    rank += 1;
                    break;
                }
                v ^= basis[low];
            }
        }
        rank
    }
}
