//! Canonical subspaces of `F_q^n` and deterministic Grassmannian enumeration.
//!
//! A [`Subspace`] is stored as its RREF basis, so equality and hashing are plain
//! comparisons of the basis entries. Text form: basis rows as digit strings
//! (hex digits for codes above 9) joined by `;`, e.g. `"100;010"`; the zero
//! subspace is the empty string.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::linalg::{gf2, MatrixGF};

/// A subspace of `F_q^n` held in canonical form.
#[derive(Clone)]
pub struct Subspace {
    basis: MatrixGF,
    pivots: Vec<usize>,
    // bit-packed basis rows, present for q = 2 and n <= 32
    packed: Option<Box<[u64]>>,
}

impl Subspace {
    fn from_canonical(basis: MatrixGF, pivots: Vec<usize>) -> Self {
        let packed = (basis.field().q() == 2 && basis.cols() <= 32)
            .then(|| basis.row_iter().map(gf2::pack).collect::<Box<[u64]>>());
        Subspace {
            basis,
            pivots,
            packed,
        }
    }

    /// Row space of an arbitrary matrix.
    pub fn row_space(m: &MatrixGF) -> Self {
        let mut r = m.rref();
        r.matrix.truncate_rows(r.rank);
        Self::from_canonical(r.matrix, r.pivots)
    }

    /// Canonical subspace spanned by `vectors`, each of length `n`.
    pub fn span<R: AsRef<[u8]>>(field: &'static FieldSpec, n: usize, vectors: &[R]) -> Result<Self> {
        let m = MatrixGF::from_rows(field, n, vectors)?;
        Ok(Self::row_space(&m))
    }

    pub fn zero(field: &'static FieldSpec, n: usize) -> Self {
        Self::from_canonical(MatrixGF::zeros(field, 0, n), Vec::new())
    }

    pub fn whole(field: &'static FieldSpec, n: usize) -> Self {
        Self::from_canonical(MatrixGF::identity(field, n), (0..n).collect())
    }

    pub fn field(&self) -> &'static FieldSpec {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &MatrixGF {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.field() != other.field() || self.ambient_dim() != other.ambient_dim() {
            return Err(Error::AmbientMismatch(
                format!("F_{}^{}", self.field().q(), self.ambient_dim()),
                format!("F_{}^{}", other.field().q(), other.ambient_dim()),
            ));
        }
        Ok(())
    }

    /// `dim(A + B)` without materializing the sum. Caller guarantees a shared ambient.
    pub(crate) fn join_dim_unchecked(&self, other: &Subspace) -> usize {
        if let (Some(a), Some(b)) = (&self.packed, &other.packed) {
            let mut rows = [0u64; 64];
            let len = a.len() + b.len();
            rows[..a.len()].copy_from_slice(a);
            rows[a.len()..len].copy_from_slice(b);
            return gf2::rank(&mut rows[..len]);
        }
        self.basis
            .stack(&other.basis)
            .expect("shared ambient dimension")
            .rank()
    }

    /// `dim(A ∩ B)` via the modular dimension formula. Caller guarantees a shared ambient.
    #[inline]
    pub(crate) fn meet_dim_unchecked(&self, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.join_dim_unchecked(other)
    }

    pub fn meet_dim(&self, other: &Subspace) -> Result<usize> {
        self.check_ambient(other)?;
        Ok(self.meet_dim_unchecked(other))
    }

    pub fn join_dim(&self, other: &Subspace) -> Result<usize> {
        self.check_ambient(other)?;
        Ok(self.join_dim_unchecked(other))
    }

    /// Smallest subspace containing both.
    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Self::row_space(&self.basis.stack(&other.basis)?))
    }

    /// Intersection by the Zassenhaus construction: reduce `[A A; B 0]` and keep
    /// the right halves of rows whose left half vanished.
    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let n = self.ambient_dim();
        let field = self.field();
        let rows = self.dim() + other.dim();
        let mut entries = Vec::with_capacity(rows * 2 * n);
        for r in self.basis.row_iter() {
            entries.extend_from_slice(r);
            entries.extend_from_slice(r);
        }
        for r in other.basis.row_iter() {
            entries.extend_from_slice(r);
            entries.extend(std::iter::repeat_n(0, n));
        }
        let reduced = MatrixGF::from_raw(field, rows, 2 * n, entries).rref();
        let tail: Vec<Vec<u8>> = reduced
            .matrix
            .row_iter()
            .take(reduced.rank)
            .filter(|r| r[..n].iter().all(|&e| e == 0))
            .map(|r| r[n..].to_vec())
            .collect();
        Subspace::span(field, n, &tail)
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.contains_unchecked(other))
    }

    #[inline]
    pub(crate) fn contains_unchecked(&self, other: &Subspace) -> bool {
        other.dim() <= self.dim() && self.join_dim_unchecked(other) == self.dim()
    }

    pub fn contains_vector(&self, v: &[u8]) -> Result<bool> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: v.len(),
            });
        }
        self.basis.row_space_contains(v)
    }

    /// Parses the `;`-separated text form. `n` is needed for the zero subspace.
    pub fn parse(field: &'static FieldSpec, n: usize, text: &str) -> Result<Subspace> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Subspace::zero(field, n));
        }
        let mut rows = Vec::new();
        for (i, row) in text.split(';').enumerate() {
            let row = row.trim();
            let mut v = Vec::with_capacity(n);
            for (j, ch) in row.chars().enumerate() {
                let code = ch.to_digit(16).ok_or_else(|| Error::Parse {
                    position: format!("row {}, column {}", i + 1, j + 1),
                    message: format!("unexpected character {ch:?}"),
                })?;
                let code = field.check(code).map_err(|e| Error::Parse {
                    position: format!("row {}, column {}", i + 1, j + 1),
                    message: e.to_string(),
                })?;
                v.push(code);
            }
            if v.len() != n {
                return Err(Error::Parse {
                    position: format!("row {}", i + 1),
                    message: format!("expected {n} entries, found {}", v.len()),
                });
            }
            rows.push(v);
        }
        Subspace::span(field, n, &rows)
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.hash(state);
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field().q(), self.ambient_dim(), self.dim(), self.basis.entries()).cmp(&(
            other.field().q(),
            other.ambient_dim(),
            other.dim(),
            other.basis.entries(),
        ))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.basis.row_iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            for &e in r {
                write!(f, "{:x}", e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self)
    }
}

/// Iterator over all `k`-subspaces of `F_q^n`.
///
/// Order: pivot-column sets in colex order; within a pivot set, the free
/// entries run as an odometer with the last free position turning fastest.
pub struct Grassmannian {
    field: &'static FieldSpec,
    n: usize,
    k: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    digits: Vec<u8>,
    done: bool,
}

/// Deterministic stream of every `k`-subspace of `F_q^n`; empty when `k > n`.
pub fn enumerate_grassmannian(field: &'static FieldSpec, n: usize, k: usize) -> Grassmannian {
    let pivots: Vec<usize> = (0..k).collect();
    let mut g = Grassmannian {
        field,
        n,
        k,
        pivots,
        free: Vec::new(),
        digits: Vec::new(),
        done: k > n,
    };
    if !g.done {
        g.reset_free();
    }
    g
}

impl Grassmannian {
    fn reset_free(&mut self) {
        self.free.clear();
        for (i, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..self.n {
                if !self.pivots.contains(&c) {
                    self.free.push((i, c));
                }
            }
        }
        self.digits = vec![0; self.free.len()];
    }

    fn next_pivot_set(&mut self) -> bool {
        let k = self.k;
        for i in 0..k {
            let limit = if i + 1 < k { self.pivots[i + 1] } else { self.n };
            if self.pivots[i] + 1 < limit {
                self.pivots[i] += 1;
                for j in 0..i {
                    self.pivots[j] = j;
                }
                return true;
            }
        }
        false
    }

    fn advance(&mut self) {
        let q = self.field.q() as u8;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < q {
                return;
            }
            *d = 0;
        }
        if self.next_pivot_set() {
            self.reset_free();
        } else {
            self.done = true;
        }
    }

    fn current(&self) -> Subspace {
        let n = self.n;
        let mut entries = vec![0u8; self.k * n];
        for (i, &p) in self.pivots.iter().enumerate() {
            entries[i * n + p] = 1;
        }
        for (&(i, c), &d) in self.free.iter().zip(&self.digits) {
            entries[i * n + c] = d;
        }
        Subspace::from_canonical(MatrixGF::from_raw(self.field, self.k, n, entries), self.pivots.clone())
    }
}

impl Iterator for Grassmannian {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let s = self.current();
        self.advance();
        Some(s)
    }
}

/// All `k`-dimensional subspaces containing `s`, in a deterministic order.
///
/// Uses the coordinate complement spanned by the non-pivot unit vectors of `s`:
/// superspaces `R` correspond one-to-one to the `(k - dim s)`-subspaces `R ∩ C`.
pub fn enumerate_superspaces(s: &Subspace, k: usize) -> impl Iterator<Item = Subspace> + '_ {
    let n = s.ambient_dim();
    let free_cols: Vec<usize> = (0..n).filter(|c| !s.pivots.contains(c)).collect();
    let inner = if k >= s.dim() && k <= n {
        Some(enumerate_grassmannian(s.field(), free_cols.len(), k - s.dim()))
    } else {
        None
    };
    inner.into_iter().flatten().map(move |w| {
        let mut rows: Vec<Vec<u8>> = s.basis.row_iter().map(<[u8]>::to_vec).collect();
        for r in w.basis.row_iter() {
            let mut v = vec![0u8; n];
            for (&c, &e) in free_cols.iter().zip(r) {
                v[c] = e;
            }
            rows.push(v);
        }
        Subspace::span(s.field(), n, &rows).expect("rows have ambient length")
    })
}

/// All `j`-dimensional subspaces of `w`, in a deterministic order.
pub fn enumerate_subspaces_of(w: &Subspace, j: usize) -> impl Iterator<Item = Subspace> + '_ {
    let field = w.field();
    let n = w.ambient_dim();
    enumerate_grassmannian(field, w.dim(), j).map(move |coeffs| {
        let rows: Vec<Vec<u8>> = coeffs
            .basis
            .row_iter()
            .map(|c| {
                let mut v = vec![0u8; n];
                for (&ci, b) in c.iter().zip(w.basis.row_iter()) {
                    if ci == 0 {
                        continue;
                    }
                    for (x, &bj) in v.iter_mut().zip(b) {
                        *x = field.add(*x, field.mul(ci, bj));
                    }
                }
                v
            })
            .collect();
        Subspace::span(field, n, &rows).expect("rows have ambient length")
    })
}
