//! Exact evaluation of Gaussian binomials and the bound functions built from
//! them, plus grid scans certifying the purely numeric inequalities.
//!
//! Everything is exact rational arithmetic; there is no floating point here.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar(BigRational::one())
    }

    pub fn from_int<I: Into<BigInt>>(v: I) -> Self {
        ExactScalar(BigRational::from_integer(v.into()))
    }

    pub fn ratio<A: Into<BigInt>, B: Into<BigInt>>(num: A, den: B) -> Self {
        ExactScalar(BigRational::new(num.into(), den.into()))
    }

    /// `base^exp` for any integer exponent (negative exponents give fractions).
    pub fn power(base: u64, exp: i64) -> Self {
        let b = BigInt::from(base);
        let p: BigInt = Pow::pow(&b, exp.unsigned_abs());
        if exp >= 0 {
            Self::from_int(p)
        } else {
            Self::ratio(1, p)
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn to_u128(&self) -> Option<u128> {
        self.to_integer()?.to_u128()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn pow(&self, e: u32) -> Self {
        ExactScalar(Pow::pow(&self.0, e))
    }

    /// Always `numerator/denominator`, the form used in reports.
    pub fn to_ratio_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse {
            position: format!("{s:?}"),
            message: m.to_string(),
        };
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n = BigInt::from_str(n).map_err(|_| bad("bad numerator"))?;
        let d = BigInt::from_str(d).map_err(|_| bad("bad denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(ExactScalar(BigRational::new(n, d)))
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_ratio_string())
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &'a ExactScalar) -> ExactScalar {
                ExactScalar((&self.0).$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

/// Gaussian binomial `[n k]_q` as an exact integer.
///
/// `[n 0] = 1`; zero when `k < 0` or `k > n`. Any integer `q >= 2` is accepted.
pub fn gauss_binom_int(n: i64, k: i64, q: u64) -> BigInt {
    assert!(q >= 2, "q must be at least 2");
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let qb = BigInt::from(q);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= Pow::pow(&qb, (n - i) as u64) - 1u32;
        den *= Pow::pow(&qb, (k - i) as u64) - 1u32;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

pub fn gauss_binom(n: i64, k: i64, q: u64) -> ExactScalar {
    ExactScalar::from_int(gauss_binom_int(n, k, q))
}

/// Gaussian binomial in machine integers, for counts known to be small.
/// Panics on overflow.
pub fn gauss_binom_u128(n: u64, k: u64, q: u64) -> u128 {
    gauss_binom_int(n as i64, k as i64, q)
        .to_u128()
        .expect("Gaussian binomial exceeds u128")
}

/// Number of `kk`-subspaces of an `n`-space meeting a fixed `m`-subspace in
/// exactly `i` dimensions: `q^{(m-i)(kk-i)} [m i] [n-m kk-i]`.
pub fn exact_meet_count(n: i64, m: i64, kk: i64, i: i64, q: u64) -> ExactScalar {
    if i < 0 || i > m || i > kk {
        return ExactScalar::zero();
    }
    ExactScalar::power(q, (m - i) * (kk - i)) * gauss_binom(m, i, q) * gauss_binom(n - m, kk - i, q)
}

/// `h(n,k,t,x) = [x t] [k-t+1 1]^{x-t} [n-x k-x]`.
pub fn h_bound(n: i64, k: i64, t: i64, x: i64, q: u64) -> ExactScalar {
    let spread = gauss_binom(k - t + 1, 1, q);
    gauss_binom(x, t, q) * spread.pow((x - t).max(0) as u32) * gauss_binom(n - x, k - x, q)
}

/// `f(n,k,t) = ([k-t+1 1]^2 - q^{-4}) [n-t-1 k-t-1]^2`.
pub fn f_bound(n: i64, k: i64, t: i64, q: u64) -> ExactScalar {
    let lead = gauss_binom(k - t + 1, 1, q).pow(2) - ExactScalar::power(q, -4);
    lead * gauss_binom(n - t - 1, k - t - 1, q).pow(2)
}

/// `g(n,k,t) = ([t+2 1]^2 - q^{-4}) [n-t-1 k-t-1]^2`.
pub fn g_bound(n: i64, k: i64, t: i64, q: u64) -> ExactScalar {
    let lead = gauss_binom(t + 2, 1, q).pow(2) - ExactScalar::power(q, -4);
    lead * gauss_binom(n - t - 1, k - t - 1, q).pow(2)
}

/// Size of the family of `k`-subspaces meeting a `(t+2)`-space in dimension `>= t+1`:
/// `[t+2 1][n-t-1 k-t-1] - q [t+1 1][n-t-2 k-t-2]`.
pub fn h2_size(n: i64, k: i64, t: i64, q: u64) -> ExactScalar {
    gauss_binom(t + 2, 1, q) * gauss_binom(n - t - 1, k - t - 1, q)
        - ExactScalar::from_int(q) * gauss_binom(t + 1, 1, q) * gauss_binom(n - t - 2, k - t - 2, q)
}

/// `|A_j|`: number of `k`-subspaces `F ⊇ T` with `dim(F ∩ M) = j`, where
/// `T ⊆ M`, `dim T = t`, `dim M = m`. Counted in the quotient by `T`.
pub fn profile_count(n: i64, k: i64, t: i64, m: i64, j: i64, q: u64) -> ExactScalar {
    exact_meet_count(n - t, m - t, k - t, j - t, q)
}

/// Size of the Hilton-Milner type family built from `T ⊂ M`, `dim M = k+1`,
/// `dim T = t`, computed as an intersection-profile sum:
/// `Σ_{j=t+1..k} |A_j| + [k+1 1] - [k-t+1 1]`.
///
/// This closed form is checked against brute-force enumeration in the family
/// tests before any scan relies on it.
pub fn h1_size(n: i64, k: i64, t: i64, q: u64) -> ExactScalar {
    let containing: ExactScalar = (t + 1..=k)
        .map(|j| profile_count(n, k, t, k + 1, j, q))
        .fold(ExactScalar::zero(), |a, b| a + b);
    containing + gauss_binom(k + 1, 1, q) - gauss_binom(k - t + 1, 1, q)
}

/// Numeric claims that the scanner can certify over a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    /// `q^{m-i} < (q^m-1)/(q^i-1) < q^{m-i+1}` and the reciprocal form.
    RatioBounds,
    /// `q^{i(m-i)} < [m i] < q^{i(m-i+1)}`.
    GaussianBounds,
    /// `h(n,k,t,x) >= h(n,k,t,x+1)` for `n >= 2k+2`.
    HMonotone,
    /// Consecutive-binomial ratio chain, `n >= 2k-t+1`.
    RatioStep,
    /// `h(x1) h(x2) < f` off the diagonal point `(t+1,t+1)`, `n >= 4k+6`.
    ProductBound,
    /// `h1^2 > f`, `n >= 4k+6`.
    H1VsF,
    /// `h2^2 > g`, `n >= 4k+6`.
    H2VsG,
    /// Which of `h1^2`, `h2^2` is larger, `n >= 4k+6`, `k >= t+2`.
    H1VsH2,
    /// `h1 = h2` when `k = t+1` (both families are `[M k]` for a `(t+2)`-space `M`).
    H1H2Coincide,
    /// Bound on the family of members avoiding every `(t+1)`-cover, formula level.
    AvoidersBound,
}

impl Lemma {
    pub const ALL: [Lemma; 10] = [
        Lemma::RatioBounds,
        Lemma::GaussianBounds,
        Lemma::HMonotone,
        Lemma::RatioStep,
        Lemma::ProductBound,
        Lemma::H1VsF,
        Lemma::H2VsG,
        Lemma::H1VsH2,
        Lemma::H1H2Coincide,
        Lemma::AvoidersBound,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Lemma::RatioBounds => "ratio-bounds",
            Lemma::GaussianBounds => "gaussian-bounds",
            Lemma::HMonotone => "h-monotone",
            Lemma::RatioStep => "ratio-step",
            Lemma::ProductBound => "product-bound",
            Lemma::H1VsF => "h1-vs-f",
            Lemma::H2VsG => "h2-vs-g",
            Lemma::H1VsH2 => "h1-vs-h2",
            Lemma::H1H2Coincide => "h1-h2-coincide",
            Lemma::AvoidersBound => "avoiders-bound",
        }
    }

    /// Resolves an id or a numeric group alias (`2.1`, `2.4`, `2.5`, `2.6`, `4.1`, `1`)
    /// to the claims it covers.
    pub fn resolve(name: &str) -> Result<Vec<Lemma>> {
        let name = name.trim();
        if let Some(l) = Lemma::ALL.iter().find(|l| l.id() == name) {
            return Ok(vec![*l]);
        }
        let group = match name {
            "2.1" => vec![Lemma::RatioBounds, Lemma::GaussianBounds],
            "2.4" => vec![Lemma::HMonotone],
            "1" | "eq1" => vec![Lemma::RatioStep],
            "2.5" => vec![Lemma::ProductBound],
            "2.6" => vec![Lemma::H1VsF, Lemma::H2VsG, Lemma::H1VsH2, Lemma::H1H2Coincide],
            "4.1" => vec![Lemma::AvoidersBound],
            "all" => Lemma::ALL.to_vec(),
            _ => return Err(Error::UnknownClaim(name.to_string())),
        };
        Ok(group)
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Order relation asserted by a scan row: `lhs <relation> rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    pub fn holds(self, lhs: &ExactScalar, rhs: &ExactScalar) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
}

/// One checked grid point. `grid_point` maps parameter names to values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub lemma_id: String,
    pub grid_point: BTreeMap<String, i64>,
    pub lhs: ExactScalar,
    pub rhs: ExactScalar,
    pub relation: Relation,
    pub status: Status,
}

impl ScanRow {
    pub fn new(lemma_id: &str, point: &[(&str, i64)], lhs: ExactScalar, relation: Relation, rhs: ExactScalar) -> Self {
        let status = if relation.holds(&lhs, &rhs) {
            Status::Pass
        } else {
            Status::Fail
        };
        ScanRow {
            lemma_id: lemma_id.to_string(),
            grid_point: point.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lhs,
            rhs,
            relation,
            status,
        }
    }

    pub fn grid_point_string(&self) -> String {
        self.grid_point
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Per-claim accounting: candidate points that failed a hypothesis are
/// `filtered`, the rest are `checked`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaSummary {
    pub lemma_id: String,
    pub checked: usize,
    pub filtered: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub summaries: Vec<LemmaSummary>,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::Fail).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &ScanRow> {
        self.rows.iter().filter(|r| r.status == Status::Fail)
    }

    /// Appends externally produced rows (e.g. enumeration gates) under their own summary.
    pub fn extend_with(&mut self, lemma_id: &str, rows: Vec<ScanRow>) {
        let violations = rows.iter().filter(|r| r.status == Status::Fail).count();
        self.summaries.push(LemmaSummary {
            lemma_id: lemma_id.to_string(),
            checked: rows.len(),
            filtered: 0,
            violations,
        });
        self.rows.extend(rows);
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> std::result::Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["lemma_id", "grid_point", "lhs", "rhs", "relation", "status"])?;
        for r in &self.rows {
            out.write_record([
                r.lemma_id.as_str(),
                &r.grid_point_string(),
                &r.lhs.to_ratio_string(),
                &r.rhs.to_ratio_string(),
                r.relation.symbol(),
                match r.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                },
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Parameter box for a scan.
///
/// `m_max` bounds the `(m, i)` pairs of the ratio claims. Parameters `q`, `1 <= t < k <= k_max`
/// drive the rest; for each claim `n` runs from `k+1` up to that claim's minimum `n` plus
/// `n_span`, and points below the minimum are counted as filtered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub qs: Vec<u64>,
    pub m_max: i64,
    pub k_max: i64,
    pub n_span: i64,
}

impl Default for ScanGrid {
    fn default() -> Self {
        ScanGrid {
            qs: vec![2, 3, 4, 5],
            m_max: 40,
            k_max: 8,
            n_span: 14,
        }
    }
}

// A candidate point either yields rows or is filtered by a hypothesis.
type PointResult = Option<Vec<ScanRow>>;

fn min_n(lemma: Lemma, k: i64, t: i64) -> i64 {
    match lemma {
        Lemma::HMonotone => 2 * k + 2,
        Lemma::RatioStep => 2 * k - t + 1,
        _ => 4 * k + 6,
    }
}

fn ratio_rows(q: u64, m: i64, i: i64) -> Vec<ScanRow> {
    let id = Lemma::RatioBounds.id();
    let p = [("q", q as i64), ("m", m), ("i", i)];
    let big = ExactScalar::ratio(BigInt::from(q).pow(m as u32) - 1u32, BigInt::from(q).pow(i as u32) - 1u32);
    let small = ExactScalar::ratio(BigInt::from(q).pow(i as u32) - 1u32, BigInt::from(q).pow(m as u32) - 1u32);
    vec![
        ScanRow::new(id, &p, ExactScalar::power(q, m - i), Relation::Lt, big.clone()),
        ScanRow::new(id, &p, big, Relation::Lt, ExactScalar::power(q, m - i + 1)),
        ScanRow::new(id, &p, ExactScalar::power(q, i - m - 1), Relation::Lt, small.clone()),
        ScanRow::new(id, &p, small, Relation::Lt, ExactScalar::power(q, i - m)),
    ]
}

fn gaussian_bound_rows(q: u64, m: i64, i: i64) -> Vec<ScanRow> {
    let id = Lemma::GaussianBounds.id();
    let p = [("q", q as i64), ("m", m), ("i", i)];
    let b = gauss_binom(m, i, q);
    vec![
        ScanRow::new(id, &p, ExactScalar::power(q, i * (m - i)), Relation::Lt, b.clone()),
        ScanRow::new(id, &p, b, Relation::Lt, ExactScalar::power(q, i * (m - i + 1))),
    ]
}

fn point_rows(lemma: Lemma, q: u64, n: i64, k: i64, t: i64) -> PointResult {
    if n < min_n(lemma, k, t) {
        return None;
    }
    let id = lemma.id();
    let base = [("q", q as i64), ("n", n), ("k", k), ("t", t)];
    let rows = match lemma {
        Lemma::HMonotone => (t..k)
            .map(|x| {
                let p = [base[0], base[1], base[2], base[3], ("x", x)];
                ScanRow::new(id, &p, h_bound(n, k, t, x, q), Relation::Ge, h_bound(n, k, t, x + 1, q))
            })
            .collect(),
        Lemma::RatioStep => {
            let mut rows = Vec::new();
            let step_floor = ExactScalar::power(q, n - k);
            let spread = gauss_binom(k - t + 1, 1, q);
            for a in 0..k {
                let p = [base[0], base[1], base[2], base[3], ("a", a)];
                let ratio = ExactScalar::ratio(
                    BigInt::from(q).pow((n - a) as u32) - 1u32,
                    BigInt::from(q).pow((k - a) as u32) - 1u32,
                );
                let binom_ratio = gauss_binom(n - a, k - a, q) / gauss_binom(n - a - 1, k - a - 1, q);
                rows.push(ScanRow::new(id, &p, binom_ratio, Relation::Eq, ratio.clone()));
                rows.push(ScanRow::new(id, &p, ratio, Relation::Ge, step_floor.clone()));
            }
            rows.push(ScanRow::new(
                id,
                &base,
                step_floor,
                Relation::Ge,
                ExactScalar::power(q, k - t + 1),
            ));
            rows.push(ScanRow::new(id, &base, ExactScalar::power(q, k - t + 1), Relation::Ge, spread));
            rows
        }
        Lemma::ProductBound => {
            let f = f_bound(n, k, t, q);
            let mut rows = Vec::new();
            for x1 in t + 1..=k {
                for x2 in t + 1..=k {
                    if (x1, x2) == (t + 1, t + 1) {
                        continue;
                    }
                    let p = [base[0], base[1], base[2], base[3], ("x1", x1), ("x2", x2)];
                    let lhs = h_bound(n, k, t, x1, q) * h_bound(n, k, t, x2, q);
                    rows.push(ScanRow::new(id, &p, lhs, Relation::Lt, f.clone()));
                }
            }
            rows
        }
        Lemma::H1VsF => vec![ScanRow::new(
            id,
            &base,
            h1_size(n, k, t, q).pow(2),
            Relation::Gt,
            f_bound(n, k, t, q),
        )],
        Lemma::H2VsG => vec![ScanRow::new(
            id,
            &base,
            h2_size(n, k, t, q).pow(2),
            Relation::Gt,
            g_bound(n, k, t, q),
        )],
        Lemma::H1VsH2 => {
            if k < t + 2 {
                return None;
            }
            let relation = if k > 2 * t + 1 {
                Relation::Gt
            } else if (k, t) == (3, 1) {
                Relation::Eq
            } else {
                Relation::Lt
            };
            vec![ScanRow::new(
                id,
                &base,
                h1_size(n, k, t, q).pow(2),
                relation,
                h2_size(n, k, t, q).pow(2),
            )]
        }
        Lemma::H1H2Coincide => {
            if k != t + 1 {
                return None;
            }
            vec![ScanRow::new(id, &base, h1_size(n, k, t, q), Relation::Eq, h2_size(n, k, t, q))]
        }
        Lemma::AvoidersBound => {
            let one = |m: i64| gauss_binom(m, 1, q);
            let lhs = one(t + 1) * one(k - t + 2) * one(k - t + 1) * gauss_binom(n - t - 2, k - t - 2, q);
            let rhs = ExactScalar::power(q, -k - t - 2) * gauss_binom(n - t - 1, k - t - 1, q);
            vec![ScanRow::new(id, &base, lhs, Relation::Le, rhs)]
        }
        Lemma::RatioBounds | Lemma::GaussianBounds => unreachable!("handled by the (m, i) grid"),
    };
    Some(rows)
}

fn scan_one(lemma: Lemma, grid: &ScanGrid) -> (LemmaSummary, Vec<ScanRow>) {
    let points: Vec<PointResult> = match lemma {
        Lemma::RatioBounds | Lemma::GaussianBounds => {
            let mut cands = Vec::new();
            for &q in &grid.qs {
                for m in 2..=grid.m_max {
                    for i in 1..m {
                        cands.push((q, m, i));
                    }
                }
            }
            cands
                .par_iter()
                .map(|&(q, m, i)| {
                    Some(if lemma == Lemma::RatioBounds {
                        ratio_rows(q, m, i)
                    } else {
                        gaussian_bound_rows(q, m, i)
                    })
                })
                .collect()
        }
        _ => {
            let mut cands = Vec::new();
            for &q in &grid.qs {
                for k in 2..=grid.k_max {
                    for t in 1..k {
                        for n in k + 1..=min_n(lemma, k, t) + grid.n_span {
                            cands.push((q, n, k, t));
                        }
                    }
                }
            }
            cands
                .par_iter()
                .map(|&(q, n, k, t)| point_rows(lemma, q, n, k, t))
                .collect()
        }
    };
    let filtered = points.iter().filter(|p| p.is_none()).count();
    let checked = points.len() - filtered;
    let rows: Vec<ScanRow> = points.into_iter().flatten().flatten().collect();
    let violations = rows.iter().filter(|r| r.status == Status::Fail).count();
    (
        LemmaSummary {
            lemma_id: lemma.id().to_string(),
            checked,
            filtered,
            violations,
        },
        rows,
    )
}

/// Checks every requested claim over the grid. Errors with `InfeasibleGrid` when a
/// claim has no admissible point.
pub fn scan_numeric_lemmas(lemmas: &[Lemma], grid: &ScanGrid) -> Result<ScanReport> {
    if grid.qs.iter().any(|&q| q < 2) {
        return Err(Error::PreconditionViolated("every q must be at least 2".into()));
    }
    let mut report = ScanReport::default();
    for &lemma in lemmas {
        let (summary, rows) = scan_one(lemma, grid);
        if summary.checked == 0 {
            return Err(Error::InfeasibleGrid(format!(
                "{} has no admissible grid point ({} filtered)",
                lemma.id(),
                summary.filtered
            )));
        }
        report.summaries.push(summary);
        report.rows.extend(rows);
    }
    Ok(report)
}
