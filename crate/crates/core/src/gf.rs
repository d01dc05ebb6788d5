//! Arithmetic in `F_q` for prime powers `q <= 16`.
//!
//! Elements are encoded as integers `0..q`. For an extension field `F_{p^e}` the
//! code of `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` is `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`,
//! so addition in characteristic 2 is plain XOR of codes.
//!
//! Every field is built from one fixed primitive polynomial (coefficients listed
//! from the constant term up, monic):
//!
//! | q  | polynomial        |
//! |----|-------------------|
//! | 2  | x + 1             |
//! | 3  | x + 1             |
//! | 4  | x^2 + x + 1       |
//! | 5  | x + 3             |
//! | 7  | x + 4             |
//! | 8  | x^3 + x + 1       |
//! | 9  | x^2 + 2x + 2      |
//! | 11 | x + 9             |
//! | 13 | x + 11            |
//! | 16 | x^4 + x + 1       |
//!
//! For prime `q` the polynomial is `x - g` with `g` the least primitive root mod `q`.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 16;

const PRIMITIVE_POLYS: &[(u32, u32, u32, &[u8])] = &[
    // (q, p, e, coefficients low -> high)
    (2, 2, 1, &[1, 1]),
    (3, 3, 1, &[1, 1]),
    (4, 2, 2, &[1, 1, 1]),
    (5, 5, 1, &[3, 1]),
    (7, 7, 1, &[4, 1]),
    (8, 2, 3, &[1, 1, 0, 1]),
    (9, 3, 2, &[2, 2, 1]),
    (11, 11, 1, &[9, 1]),
    (13, 13, 1, &[11, 1]),
    (16, 2, 4, &[1, 1, 0, 0, 1]),
];

/// Arithmetic tables for one finite field. Immutable after construction.
#[derive(Clone)]
pub struct FieldSpec {
    q: u32,
    p: u32,
    e: u32,
    primitive_poly: Vec<u8>,
    exp_table: Vec<u8>,
    log_table: Vec<u8>,
    add_table: Vec<u8>,
    mul_table: Vec<u8>,
    neg_table: Vec<u8>,
    inv_table: Vec<u8>,
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn digits(code: u32, p: u32, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    let mut c = code;
    for _ in 0..e {
        out.push(c % p);
        c /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

impl FieldSpec {
    /// Builds the tables for `F_q`.
    pub fn new(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(Error::UnsupportedOrder(q));
        }
        let poly = PRIMITIVE_POLYS
            .iter()
            .find(|entry| entry.0 == q)
            .map(|entry| entry.3.to_vec())
            .ok_or(Error::UnsupportedOrder(q))?;

        let add_code = |a: u32, b: u32| {
            let (da, db) = (digits(a, p, e), digits(b, p, e));
            let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            undigits(&sum, p)
        };

        // Multiplication by the generator (the class of x, or g for prime fields).
        let times_generator = |a: u32| -> u32 {
            let mut ds = digits(a, p, e);
            if e == 1 {
                let g = (p - poly[0] as u32) % p;
                return (ds[0] * g) % p;
            }
            let top = ds[e as usize - 1];
            for i in (1..e as usize).rev() {
                ds[i] = ds[i - 1];
            }
            ds[0] = 0;
            // x^e = -(c_0 + ... + c_{e-1} x^{e-1})
            for (i, d) in ds.iter_mut().enumerate() {
                let c = poly[i] as u32;
                *d = (*d + top * (p - c) % p) % p;
            }
            undigits(&ds, p)
        };

        let n = q as usize;
        let mut exp_table = Vec::with_capacity(n - 1);
        let mut log_table = vec![0u8; n];
        let mut x = 1u32;
        for i in 0..n - 1 {
            exp_table.push(x as u8);
            log_table[x as usize] = i as u8;
            x = times_generator(x);
        }
        debug_assert_eq!(x, 1, "primitive polynomial table entry for q={q} is wrong");

        let mut add_table = vec![0u8; n * n];
        let mut mul_table = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                add_table[a * n + b] = add_code(a as u32, b as u32) as u8;
                mul_table[a * n + b] = if a == 0 || b == 0 {
                    0
                } else {
                    let s = (log_table[a] as usize + log_table[b] as usize) % (n - 1);
                    exp_table[s]
                };
            }
        }
        let mut neg_table = vec![0u8; n];
        let mut inv_table = vec![0u8; n];
        for a in 0..n {
            neg_table[a] = (0..n).find(|&b| add_table[a * n + b] == 0).unwrap() as u8;
            if a != 0 {
                inv_table[a] = exp_table[(n - 1 - log_table[a] as usize) % (n - 1)];
            }
        }

        Ok(FieldSpec {
            q,
            p,
            e,
            primitive_poly: poly,
            exp_table,
            log_table,
            add_table,
            mul_table,
            neg_table,
            inv_table,
        })
    }

    /// Shared, lazily built instance for `F_q`.
    pub fn get(q: u32) -> Result<&'static FieldSpec> {
        static FIELDS: OnceLock<Vec<Option<FieldSpec>>> = OnceLock::new();
        let fields = FIELDS.get_or_init(|| {
            (0..=MAX_ORDER)
                .map(|order| FieldSpec::new(order).ok())
                .collect()
        });
        match fields.get(q as usize) {
            Some(Some(f)) => Ok(f),
            _ => Err(FieldSpec::new(q).err().unwrap_or(Error::UnsupportedOrder(q))),
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn primitive_poly(&self) -> &[u8] {
        &self.primitive_poly
    }

    /// Nonzero elements in the order `g^0, g^1, ..., g^{q-2}`.
    pub fn exp_table(&self) -> &[u8] {
        &self.exp_table
    }

    pub fn exp(&self, i: usize) -> u8 {
        self.exp_table[i % (self.q as usize - 1)]
    }

    pub fn log(&self, a: u8) -> Result<usize> {
        if a == 0 {
            return Err(Error::DivisionByZero(self.q));
        }
        self.check(a as u32)?;
        Ok(self.log_table[a as usize] as usize)
    }

    /// Validates an element code.
    pub fn check(&self, code: u32) -> Result<u8> {
        if code < self.q {
            Ok(code as u8)
        } else {
            Err(Error::InvalidElement { q: self.q, code })
        }
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add_table[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul_table[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg_table[a as usize]
    }

    pub fn inv(&self, a: u8) -> Result<u8> {
        if a == 0 {
            Err(Error::DivisionByZero(self.q))
        } else {
            Ok(self.inv_table[a as usize])
        }
    }

    /// Inverse of a known-nonzero element.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv_table[a as usize]
    }

    pub fn div(&self, a: u8, b: u8) -> Result<u8> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q as u8
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.q.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SUPPORTED: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

    #[test]
    fn constructs_small_fields() {
        let f2 = FieldSpec::new(2).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        let f9 = FieldSpec::new(9).unwrap();
        assert_eq!((f9.characteristic(), f9.degree()), (3, 2));
    }

    #[test]
    fn rejects_bad_orders() {
        assert_eq!(FieldSpec::new(6).unwrap_err(), Error::NotPrimePower(6));
        assert_eq!(FieldSpec::new(1).unwrap_err(), Error::NotPrimePower(1));
        assert_eq!(FieldSpec::new(17).unwrap_err(), Error::UnsupportedOrder(17));
        assert_eq!(FieldSpec::new(32).unwrap_err(), Error::UnsupportedOrder(32));
        assert_eq!(FieldSpec::get(12).unwrap_err(), Error::NotPrimePower(12));
    }

    #[test]
    fn f4_square_of_generator() {
        // a = x, a^2 = x + 1 modulo x^2 + x + 1; codes: x -> 2, x + 1 -> 3
        let f4 = FieldSpec::new(4).unwrap();
        assert_eq!(f4.mul(2, 2), 3);
    }

    #[test]
    fn f5_inverse() {
        let f5 = FieldSpec::new(5).unwrap();
        assert_eq!(f5.inv(2).unwrap(), 3);
        assert_eq!(f5.inv(0).unwrap_err(), Error::DivisionByZero(5));
    }

    #[test]
    fn exp_table_is_a_permutation_of_nonzero_elements() {
        for q in SUPPORTED {
            let f = FieldSpec::get(q).unwrap();
            let mut seen = f.exp_table().to_vec();
            seen.sort_unstable();
            let expected: Vec<u8> = (1..q as u8).collect();
            assert_eq!(seen, expected, "q = {q}");
            for a in 1..q as u8 {
                assert_eq!(f.exp(f.log(a).unwrap()), a);
            }
        }
    }

    #[test]
    fn field_axioms_hold_exhaustively() {
        for q in SUPPORTED {
            let f = FieldSpec::get(q).unwrap();
            let els: Vec<u8> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn characteristic_two_addition_is_xor() {
        for q in [2, 4, 8, 16] {
            let f = FieldSpec::get(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.add(a, b), a ^ b);
                }
            }
        }
    }
}
