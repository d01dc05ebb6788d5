//! Closure-based search for cross `t`-intersecting family tuples with large size
//! products, and comparison of the best found against the claimed maxima.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{
    common_intersection, construct_h1, construct_h2, min_r_wise_intersection, trivial_family,
    covering_number, Family,
};
use crate::gf::FieldSpec;
use crate::grassmann::{enumerate_grassmannian, enumerate_subspaces_of, Subspace};
use crate::qbinom::{gauss_binom, gauss_binom_u128, h1_size, h2_size, ExactScalar};

/// Exact tuple budget used when certifying r-wise intersection.
pub const EXACT_TUPLE_BUDGET: u128 = 50_000_000;

/// Largest Grassmannian for which a [`ClosureIndex`] is built.
pub const MAX_INDEX_SIZE: usize = 40_000;

/// `{G ∈ [V k] : dim(G ∩ F) >= t for all F ∈ fam}`.
pub fn closure(fam: &Family, t: usize) -> Result<Family> {
    if fam.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let members = fam.members();
    let found: Vec<Subspace> = enumerate_grassmannian(fam.field(), fam.ambient_dim(), fam.member_dim())
        .par_bridge()
        .filter(|g| members.iter().all(|f| g.meet_dim_unchecked(f) >= t))
        .collect();
    Family::new(fam.field(), fam.ambient_dim(), fam.member_dim(), found)
}

/// Grassmannian `[V k]` in enumeration order with, for every member, the bitset of
/// members meeting it in dimension `>= t`.
pub struct ClosureIndex {
    field: &'static FieldSpec,
    n: usize,
    k: usize,
    t: usize,
    subspaces: Vec<Subspace>,
    position: HashMap<Subspace, usize>,
    words: usize,
    adjacency: Vec<u64>,
}

type IndexKey = (u32, usize, usize, usize);

fn index_cache() -> &'static Mutex<HashMap<IndexKey, Arc<ClosureIndex>>> {
    static CACHE: OnceLock<Mutex<HashMap<IndexKey, Arc<ClosureIndex>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl ClosureIndex {
    pub fn build(q: u32, n: usize, k: usize, t: usize) -> Result<ClosureIndex> {
        let field = FieldSpec::get(q)?;
        if k > n || t > k {
            return Err(Error::PreconditionViolated(format!("need t = {t} <= k = {k} <= n = {n}")));
        }
        let size = gauss_binom_u128(n as u64, k as u64, q as u64);
        if size > MAX_INDEX_SIZE as u128 {
            return Err(Error::BudgetExceeded(format!(
                "[{n} {k}]_{q} = {size} subspaces exceed the index limit {MAX_INDEX_SIZE}"
            )));
        }
        let subspaces: Vec<Subspace> = enumerate_grassmannian(field, n, k).collect();
        let count = subspaces.len();
        let words = count.div_ceil(64).max(1);
        let rows: Vec<Vec<u64>> = (0..count)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![0u64; words];
                for (j, s) in subspaces.iter().enumerate() {
                    if subspaces[i].meet_dim_unchecked(s) >= t {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
                row
            })
            .collect();
        let position = subspaces.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(ClosureIndex {
            field,
            n,
            k,
            t,
            subspaces,
            position,
            words,
            adjacency: rows.concat(),
        })
    }

    /// Shared index for `(q, n, k, t)`, built on first use.
    pub fn shared(q: u32, n: usize, k: usize, t: usize) -> Result<Arc<ClosureIndex>> {
        let key = (q, n, k, t);
        if let Some(idx) = index_cache().lock().expect("index cache").get(&key) {
            return Ok(Arc::clone(idx));
        }
        let built = Arc::new(ClosureIndex::build(q, n, k, t)?);
        let mut cache = index_cache().lock().expect("index cache");
        Ok(Arc::clone(cache.entry(key).or_insert(built)))
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspace(&self, i: usize) -> &Subspace {
        &self.subspaces[i]
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.position.get(s).copied()
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.adjacency[i * self.words..(i + 1) * self.words]
    }

    fn full(&self) -> Vec<u64> {
        let mut bits = vec![u64::MAX; self.words];
        let tail = self.len() % 64;
        if tail != 0 {
            bits[self.words - 1] = (1u64 << tail) - 1;
        }
        bits
    }

    /// Closure of the members whose indices are given.
    pub fn closure_of<I: IntoIterator<Item = usize>>(&self, members: I) -> Vec<u64> {
        let mut acc = self.full();
        for i in members {
            for (a, r) in acc.iter_mut().zip(self.row(i)) {
                *a &= r;
            }
        }
        acc
    }

    pub fn closure_of_bits(&self, bits: &[u64]) -> Vec<u64> {
        self.closure_of(ones(bits))
    }

    pub fn to_family(&self, bits: &[u64]) -> Family {
        Family::new(self.field, self.n, self.k, ones(bits).map(|i| self.subspaces[i].clone()))
            .expect("index members share dimensions")
    }

    pub fn to_bits(&self, fam: &Family) -> Result<Vec<u64>> {
        if fam.field() != self.field || fam.ambient_dim() != self.n || fam.member_dim() != self.k {
            return Err(Error::AmbientMismatch(
                format!("[F_{}^{} {}]", self.field.q(), self.n, self.k),
                format!("[F_{}^{} {}]", fam.field().q(), fam.ambient_dim(), fam.member_dim()),
            ));
        }
        let mut bits = vec![0u64; self.words];
        for m in fam.members() {
            let i = self.position[m];
            bits[i / 64] |= 1 << (i % 64);
        }
        Ok(bits)
    }

    /// `dim ∩ members` if it is below `t`, otherwise `t` (early exit).
    fn meet_floor(&self, bits: &[u64]) -> usize {
        let mut acc: Option<Subspace> = None;
        for i in ones(bits) {
            let s = &self.subspaces[i];
            acc = Some(match acc {
                None => s.clone(),
                Some(a) => a.meet(s).expect("shared ambient"),
            });
            if acc.as_ref().is_some_and(|a| a.dim() < self.t) {
                break;
            }
        }
        acc.map_or(self.n, |a| a.dim()).min(self.t)
    }
}

fn ones(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(w * 64 + b)
        })
    })
}

fn popcount(bits: &[u64]) -> u128 {
    bits.iter().map(|w| w.count_ones() as u128).sum()
}

/// Which non-triviality constraint the search enforces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Unconstrained,
    /// Every family has common intersection of dimension `< t`.
    NontrivialEach,
    /// The union of the families has common intersection of dimension `< t`.
    NontrivialUnion,
}

impl SearchMode {
    pub fn id(self) -> &'static str {
        match self {
            SearchMode::Unconstrained => "unconstrained",
            SearchMode::NontrivialEach => "nontrivial-each",
            SearchMode::NontrivialUnion => "nontrivial-union",
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unconstrained" => Ok(SearchMode::Unconstrained),
            "nontrivial-each" => Ok(SearchMode::NontrivialEach),
            "nontrivial-union" => Ok(SearchMode::NontrivialUnion),
            other => Err(Error::Parse {
                position: "mode".into(),
                message: format!("unknown search mode {other:?}"),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchParams {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub r: usize,
}

impl fmt::Display for SearchParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q,n,k,t,r) = ({},{},{},{},{})", self.q, self.n, self.k, self.t, self.r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub params: SearchParams,
    pub mode: SearchMode,
    /// Largest generator set enumerated by the exhaustive search.
    pub seed_size: usize,
    pub rng_seed: u64,
    /// Seed count limit (exhaustive) or move count (stochastic).
    pub iteration_budget: u64,
}

impl SearchConfig {
    pub fn new(q: u32, n: usize, k: usize, t: usize, r: usize, mode: SearchMode) -> Self {
        SearchConfig {
            params: SearchParams { q, n, k, t, r },
            mode,
            seed_size: 2,
            rng_seed: 0,
            iteration_budget: 1_000_000,
        }
    }

    fn validate(&self) -> Result<()> {
        let p = self.params;
        FieldSpec::get(p.q)?;
        if p.r < 2 || p.t == 0 || p.t > p.k || p.k > p.n {
            return Err(Error::PreconditionViolated(format!(
                "need r >= 2 and 1 <= t <= k <= n, have {p}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    /// Minimum r-wise intersection dimension is at least `t` (checked exactly).
    pub cross_intersecting: bool,
    pub min_intersection_dim: Option<usize>,
    /// `dim ∩ F_i` for each family.
    pub nontriviality_dims: Vec<usize>,
    /// `dim` of the common intersection of the union of all families.
    pub union_dim: Option<usize>,
    /// `F = cl(G)` and `G = cl(F)`; only defined for pairs.
    pub maximality: Option<bool>,
}

impl Certificates {
    pub fn compute(families: &[Family], t: usize) -> Result<Certificates> {
        if families.is_empty() {
            return Ok(Certificates {
                cross_intersecting: false,
                min_intersection_dim: None,
                nontriviality_dims: Vec::new(),
                union_dim: None,
                maximality: None,
            });
        }
        let outcome = min_r_wise_intersection(families, EXACT_TUPLE_BUDGET, 0)?;
        if !outcome.exact {
            return Err(Error::BudgetExceeded(format!(
                "{} tuples exceed the exact budget",
                families.iter().map(|f| f.len() as u128).product::<u128>()
            )));
        }
        let nontriviality_dims = families
            .iter()
            .map(|f| common_intersection(f).map(|s| s.dim()))
            .collect::<Result<Vec<_>>>()?;
        let union = families[1..].iter().try_fold(families[0].clone(), |acc, f| acc.union(f))?;
        let union_dim = common_intersection(&union)?.dim();
        let maximality = if families.len() == 2 {
            Some(closure(&families[0], t)? == families[1] && closure(&families[1], t)? == families[0])
        } else {
            None
        };
        Ok(Certificates {
            cross_intersecting: outcome.min_dim >= t,
            min_intersection_dim: Some(outcome.min_dim),
            nontriviality_dims,
            union_dim: Some(union_dim),
            maximality,
        })
    }

    pub fn satisfies(&self, mode: SearchMode, t: usize) -> bool {
        self.cross_intersecting
            && match mode {
                SearchMode::Unconstrained => true,
                SearchMode::NontrivialEach => self.nontriviality_dims.iter().all(|&d| d < t),
                SearchMode::NontrivialUnion => self.union_dim.is_some_and(|d| d < t),
            }
    }
}

/// Per generator-set size accounting for the exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub seed_size: usize,
    pub seeds: u64,
    /// Distinct closed pairs first reached at this size.
    pub new_pairs: u64,
    /// Best admissible product among pairs first reached at this size.
    pub best_product: ExactScalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub method: String,
    pub mode: SearchMode,
    pub rng_seed: u64,
    pub seed_size: usize,
    pub iteration_budget: u64,
    pub iterations: u64,
    pub accepted_moves: u64,
}

/// Best family tuple found by a search, with re-checkable certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub params: SearchParams,
    pub best_product: ExactScalar,
    pub families: Vec<Family>,
    pub certificates: Certificates,
    /// Number of distinct optimal tuples (exhaustive search only).
    pub optima_count: u64,
    /// Optimal tuples, each ordered, in lexicographic order; at most [`MAX_STORED_OPTIMA`].
    pub optima: Vec<Vec<Family>>,
    pub coverage: Vec<CoverageRow>,
    pub provenance: Provenance,
}

pub const MAX_STORED_OPTIMA: usize = 256;

impl SearchRecord {
    /// Re-derives every certificate and the product from the stored families.
    pub fn verify(&self) -> Result<()> {
        let p = self.params;
        if self.families.is_empty() {
            if !self.best_product.is_zero() {
                return Err(Error::CertificateMismatch("no families but nonzero product".into()));
            }
            return Ok(());
        }
        if self.families.len() != p.r {
            return Err(Error::CertificateMismatch(format!(
                "{} families recorded for r = {}",
                self.families.len(),
                p.r
            )));
        }
        for f in &self.families {
            if f.field().q() != p.q || f.ambient_dim() != p.n || f.member_dim() != p.k {
                return Err(Error::CertificateMismatch(format!("family {f:?} does not match {p}")));
            }
        }
        let product = self.families.iter().fold(ExactScalar::one(), |acc, f| acc * ExactScalar::from_int(f.len() as u64));
        if product != self.best_product {
            return Err(Error::CertificateMismatch(format!(
                "recorded product {} but families give {product}",
                self.best_product
            )));
        }
        let recomputed = Certificates::compute(&self.families, p.t)?;
        if recomputed != self.certificates {
            return Err(Error::CertificateMismatch(format!(
                "recorded {:?}, recomputed {:?}",
                self.certificates, recomputed
            )));
        }
        if !recomputed.satisfies(self.provenance.mode, p.t) {
            return Err(Error::CertificateMismatch(format!(
                "families do not satisfy mode {}",
                self.provenance.mode
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    /// Parses a record and re-verifies its certificates.
    pub fn from_json(text: &str) -> Result<SearchRecord> {
        let record: SearchRecord = serde_json::from_str(text).map_err(|e| Error::Parse {
            position: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        record.verify()?;
        Ok(record)
    }
}

fn order_pair(a: Family, b: Family) -> Vec<Family> {
    if a.members() <= b.members() {
        vec![a, b]
    } else {
        vec![b, a]
    }
}

fn tuple_cmp(a: &[Family], b: &[Family]) -> std::cmp::Ordering {
    a.iter().map(Family::members).cmp(b.iter().map(Family::members))
}

fn admissible(idx: &ClosureIndex, mode: SearchMode, f: &[u64], g: &[u64]) -> bool {
    if popcount(f) == 0 || popcount(g) == 0 {
        return false;
    }
    match mode {
        SearchMode::Unconstrained => true,
        SearchMode::NontrivialEach => idx.meet_floor(f) < idx.t && idx.meet_floor(g) < idx.t,
        SearchMode::NontrivialUnion => {
            let union: Vec<u64> = f.iter().zip(g).map(|(a, b)| a | b).collect();
            idx.meet_floor(&union) < idx.t
        }
    }
}

fn binom_u128(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Extends a generator prefix whose closure is `g` by `remaining` more indices from
/// `start` on, recording each resulting closed pair as `(min, max)`.
fn closed_pairs_from(idx: &ClosureIndex, g: &[u64], start: usize, remaining: usize, out: &mut HashSet<(Vec<u64>, Vec<u64>)>) {
    if remaining == 0 {
        let f = idx.closure_of_bits(g);
        let g = g.to_vec();
        out.insert(if f <= g { (f, g) } else { (g, f) });
        return;
    }
    for next in start..=idx.len() - remaining {
        let narrowed: Vec<u64> = g.iter().zip(idx.row(next)).map(|(a, b)| a & b).collect();
        closed_pairs_from(idx, &narrowed, next + 1, remaining - 1, out);
    }
}

#[cfg(test)]
fn for_each_combination(n: usize, s: usize, mut visit: impl FnMut(&[usize])) {
    if s > n {
        return;
    }
    let mut c: Vec<usize> = (0..s).collect();
    loop {
        visit(&c);
        let mut i = s;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] < n - s + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        c[i] += 1;
        for j in i + 1..s {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Enumerates every generator set `S` with `1 <= |S| <= seed_size`, forms the closed
/// pair `(cl(cl(S)), cl(S))`, and keeps the admissible pairs of largest product.
/// Pairs are unordered; each optimum is stored as its lexicographically ordered tuple.
pub fn exhaustive_closed_pairs(config: &SearchConfig) -> Result<SearchRecord> {
    config.validate()?;
    let p = config.params;
    if p.r != 2 {
        return Err(Error::PreconditionViolated(format!(
            "exhaustive closed-pair search needs r = 2, have r = {}",
            p.r
        )));
    }
    if config.seed_size == 0 {
        return Err(Error::BudgetExceeded("seed size 0 admits no generator set".into()));
    }
    let idx = ClosureIndex::shared(p.q, p.n, p.k, p.t)?;
    let size = idx.len() as u128;
    let seeds_total: u128 = (1..=config.seed_size as u128).map(|s| binom_u128(size, s)).fold(0u128, u128::saturating_add);
    if seeds_total > config.iteration_budget as u128 {
        return Err(Error::BudgetExceeded(format!(
            "{seeds_total} generator sets exceed the budget {}",
            config.iteration_budget
        )));
    }

    type PairKey = (Vec<u64>, Vec<u64>);
    let mut seen: HashSet<PairKey> = HashSet::new();
    let mut best: u128 = 0;
    let mut optima: Vec<PairKey> = Vec::new();
    let mut coverage = Vec::new();
    for s in 1..=config.seed_size {
        let pairs: HashSet<PairKey> = (0..idx.len())
            .into_par_iter()
            .fold(HashSet::new, |mut acc, first| {
                let row = idx.closure_of([first]);
                closed_pairs_from(&idx, &row, first + 1, s - 1, &mut acc);
                acc
            })
            .reduce(HashSet::new, |mut a, b| {
                if a.len() < b.len() {
                    return b.into_iter().chain(a).collect();
                }
                a.extend(b);
                a
            });
        let seeds = binom_u128(idx.len() as u128, s as u128);
        let mut fresh: Vec<PairKey> = pairs.into_iter().filter(|k| !seen.contains(k)).collect();
        fresh.sort();
        let scored: Vec<(u128, bool)> = fresh
            .par_iter()
            .map(|(f, g)| (popcount(f) * popcount(g), admissible(&idx, config.mode, f, g)))
            .collect();
        let mut best_here = 0u128;
        for (key, (product, ok)) in fresh.iter().zip(&scored) {
            if !ok {
                continue;
            }
            best_here = best_here.max(*product);
            if *product > best {
                best = *product;
                optima.clear();
            }
            if *product == best {
                optima.push(key.clone());
            }
        }
        coverage.push(CoverageRow {
            seed_size: s,
            seeds: seeds as u64,
            new_pairs: fresh.len() as u64,
            best_product: ExactScalar::from_int(best_here),
        });
        seen.extend(fresh);
    }

    let mut tuples: Vec<Vec<Family>> = optima
        .iter()
        .map(|(f, g)| order_pair(idx.to_family(f), idx.to_family(g)))
        .collect();
    tuples.sort_by(|a, b| tuple_cmp(a, b));
    let optima_count = tuples.len() as u64;
    let families = tuples.first().cloned().unwrap_or_default();
    tuples.truncate(MAX_STORED_OPTIMA);
    let certificates = Certificates::compute(&families, p.t)?;
    Ok(SearchRecord {
        params: p,
        best_product: ExactScalar::from_int(best),
        families,
        certificates,
        optima_count,
        optima: tuples,
        coverage,
        provenance: Provenance {
            method: "exhaustive".into(),
            mode: config.mode,
            rng_seed: config.rng_seed,
            seed_size: config.seed_size,
            iteration_budget: config.iteration_budget,
            iterations: seeds_total as u64,
            accepted_moves: 0,
        },
    })
}

fn pair_value(idx: &ClosureIndex, mode: SearchMode, gens: &[usize]) -> (Option<u128>, Vec<u64>, Vec<u64>) {
    let g = idx.closure_of(gens.iter().copied());
    let f = idx.closure_of_bits(&g);
    let value = admissible(idx, mode, &f, &g).then(|| popcount(&f) * popcount(&g));
    (value, f, g)
}

/// Drops generators whose removal leaves the closure unchanged.
fn reduce_generators(idx: &ClosureIndex, gens: Vec<usize>) -> Vec<usize> {
    let target = idx.closure_of(gens.iter().copied());
    let mut kept = gens;
    let mut i = 0;
    while i < kept.len() && kept.len() > 1 {
        let without: Vec<usize> = kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        if idx.closure_of(without.iter().copied()) == target {
            kept = without;
        } else {
            i += 1;
        }
    }
    kept
}

fn random_move(rng: &mut ChaCha8Rng, gens: &[usize], size: usize) -> Vec<usize> {
    let mut next = gens.to_vec();
    let choice = if next.len() <= 1 { rng.gen_range(0..2) * 2 } else { rng.gen_range(0..3) };
    match choice {
        0 => {
            let x = rng.gen_range(0..size);
            if !next.contains(&x) {
                next.push(x);
            }
        }
        1 => {
            let i = rng.gen_range(0..next.len());
            next.swap_remove(i);
        }
        _ => {
            let i = rng.gen_range(0..next.len());
            let x = rng.gen_range(0..size);
            if !next.contains(&x) {
                next[i] = x;
            }
        }
    }
    next.sort_unstable();
    next
}

/// Seeded hill climb maximizing the size product under the mode constraint.
///
/// For pairs the state is a generator set `S` with pair `(cl(cl(S)), cl(S))`; moves add
/// a generator (then reclose), remove one, or swap one. A supplied start pair is kept
/// verbatim as the initial best and seeds the generators with a reduced subset of its
/// first family. For `r >= 3` the state is the tuple itself and moves add or remove a
/// single member, rejecting additions that break r-cross intersection.
pub fn stochastic_improve(config: &SearchConfig, start: Option<&[Family]>) -> Result<SearchRecord> {
    config.validate()?;
    if config.params.r == 2 {
        stochastic_pairs(config, start)
    } else {
        stochastic_tuples(config, start)
    }
}

fn check_start(p: SearchParams, start: &[Family]) -> Result<()> {
    if start.len() != p.r {
        return Err(Error::PreconditionViolated(format!("start has {} families, r = {}", start.len(), p.r)));
    }
    for f in start {
        if f.field().q() != p.q || f.ambient_dim() != p.n || f.member_dim() != p.k {
            return Err(Error::PreconditionViolated(format!("start family {f:?} does not match {p}")));
        }
    }
    Ok(())
}

fn product_of(families: &[Family]) -> u128 {
    families.iter().map(|f| f.len() as u128).product()
}

fn finish(config: &SearchConfig, families: Vec<Family>, method: &str, iterations: u64, accepted: u64) -> Result<SearchRecord> {
    let p = config.params;
    let certificates = Certificates::compute(&families, p.t)?;
    let best = if families.is_empty() { 0 } else { product_of(&families) };
    Ok(SearchRecord {
        params: p,
        best_product: ExactScalar::from_int(best),
        families,
        certificates,
        optima_count: 0,
        optima: Vec::new(),
        coverage: Vec::new(),
        provenance: Provenance {
            method: method.into(),
            mode: config.mode,
            rng_seed: config.rng_seed,
            seed_size: config.seed_size,
            iteration_budget: config.iteration_budget,
            iterations,
            accepted_moves: accepted,
        },
    })
}

fn stochastic_pairs(config: &SearchConfig, start: Option<&[Family]>) -> Result<SearchRecord> {
    let p = config.params;
    let idx = ClosureIndex::shared(p.q, p.n, p.k, p.t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let (mut gens, mut best_families, mut best_value) = match start {
        Some(start) => {
            check_start(p, start)?;
            let certs = Certificates::compute(start, p.t)?;
            let value = certs.satisfies(config.mode, p.t).then(|| product_of(start));
            let bits = idx.to_bits(&start[0])?;
            let gens = if start[0].is_empty() {
                vec![rng.gen_range(0..idx.len())]
            } else {
                reduce_generators(&idx, ones(&bits).collect())
            };
            (gens, start.to_vec(), value)
        }
        None => {
            let count = config.seed_size.clamp(1, idx.len());
            let mut all: Vec<usize> = (0..idx.len()).collect();
            all.partial_shuffle(&mut rng, count);
            let mut gens = all[..count].to_vec();
            gens.sort_unstable();
            let (value, f, g) = pair_value(&idx, config.mode, &gens);
            let fams = if value.is_some() { order_pair(idx.to_family(&f), idx.to_family(&g)) } else { Vec::new() };
            (gens, fams, value)
        }
    };
    let mut current = best_value;
    let mut accepted = 0;
    for _ in 0..config.iteration_budget {
        let next = random_move(&mut rng, &gens, idx.len());
        let (value, f, g) = pair_value(&idx, config.mode, &next);
        if value >= current {
            gens = next;
            current = value;
            accepted += 1;
            if value > best_value {
                best_value = value;
                best_families = order_pair(idx.to_family(&f), idx.to_family(&g));
            }
        }
    }
    if best_value.is_none() {
        best_families = Vec::new();
    }
    finish(config, best_families, "stochastic", config.iteration_budget, accepted)
}

fn tuple_value(families: &[Family], mode: SearchMode, t: usize) -> Option<u128> {
    if families.iter().any(Family::is_empty) {
        return None;
    }
    let floor = |f: &Family| common_intersection(f).map(|s| s.dim()).unwrap_or(0);
    let ok = match mode {
        SearchMode::Unconstrained => true,
        SearchMode::NontrivialEach => families.iter().all(|f| floor(f) < t),
        SearchMode::NontrivialUnion => {
            let union = families[1..].iter().try_fold(families[0].clone(), |acc, f| acc.union(f));
            union.is_ok_and(|u| floor(&u) < t)
        }
    };
    ok.then(|| product_of(families))
}

fn stochastic_tuples(config: &SearchConfig, start: Option<&[Family]>) -> Result<SearchRecord> {
    let p = config.params;
    let field = FieldSpec::get(p.q)?;
    let idx = ClosureIndex::shared(p.q, p.n, p.k, p.t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut state: Vec<Family> = match start {
        Some(start) => {
            check_start(p, start)?;
            let certs = Certificates::compute(start, p.t)?;
            if !certs.cross_intersecting {
                return Err(Error::PreconditionViolated("start tuple is not r-cross t-intersecting".into()));
            }
            start.to_vec()
        }
        None => {
            let x = idx.subspace(rng.gen_range(0..idx.len())).clone();
            vec![Family::new(field, p.n, p.k, [x])?; p.r]
        }
    };
    let mut current = tuple_value(&state, config.mode, p.t);
    let mut best = (current, state.clone());
    let mut accepted = 0;
    for _ in 0..config.iteration_budget {
        let i = rng.gen_range(0..p.r);
        let add = state[i].len() <= 1 || rng.gen_bool(0.5);
        let mut next = state.clone();
        if add {
            let y = idx.subspace(rng.gen_range(0..idx.len())).clone();
            if state[i].contains(&y) {
                continue;
            }
            let mut probe = state.clone();
            probe[i] = Family::new(field, p.n, p.k, [y.clone()])?;
            let outcome = min_r_wise_intersection(&probe, EXACT_TUPLE_BUDGET, 0)?;
            if !outcome.exact || outcome.min_dim < p.t {
                continue;
            }
            next[i] = Family::new(field, p.n, p.k, state[i].members().iter().cloned().chain([y]))?;
        } else {
            let j = rng.gen_range(0..state[i].len());
            let drop = state[i].members()[j].clone();
            next[i] = state[i].filtered(|m| *m != drop);
        }
        let value = tuple_value(&next, config.mode, p.t);
        if value >= current {
            state = next;
            current = value;
            accepted += 1;
            if value > best.0 {
                best = (value, state.clone());
            }
        }
    }
    let families = if best.0.is_some() { best.1 } else { Vec::new() };
    finish(config, families, "stochastic", config.iteration_budget, accepted)
}

/// Claimed maxima a search record can be compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// All families equal the trivial family of one `t`-space; value `[n-t k-t]^r`.
    Ekr,
    /// Non-trivial pairs; value `max(h1^2, h2^2)`.
    HmPair,
    /// Non-trivial r-tuples; value `max(h1^r, h2^r)` at `t + r - 2`.
    HmR,
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ekr" => Ok(Claim::Ekr),
            "hm-pair" | "hm" => Ok(Claim::HmPair),
            "hm-r" => Ok(Claim::HmR),
            _ => Err(Error::UnknownClaim(s.to_string())),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::Ekr => "ekr",
            Claim::HmPair => "hm-pair",
            Claim::HmR => "hm-r",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonStatus {
    Pass,
    Fail,
    /// Parameters below the claim's threshold; reported, never asserted.
    Exploratory,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub claim: Claim,
    pub params: SearchParams,
    pub claimed_value: ExactScalar,
    pub best_product: ExactScalar,
    pub exceeds: bool,
    pub attains: bool,
    pub hypotheses_met: bool,
    pub label: String,
    /// Structure of the record's families when the claimed value is attained.
    pub structure: Option<String>,
    pub status: ComparisonStatus,
}

/// Recognizes `families` as `trivial_family(T)` repeated for one `t`-space `T`.
pub fn match_trivial(families: &[Family], t: usize) -> Result<Option<Subspace>> {
    let first = families.first().ok_or(Error::EmptyFamily)?;
    let c = common_intersection(first)?;
    if c.dim() < t {
        return Ok(None);
    }
    for t_space in enumerate_subspaces_of(&c, t) {
        let triv = trivial_family(&t_space, first.member_dim())?;
        if families.iter().all(|f| *f == triv) {
            return Ok(Some(t_space));
        }
    }
    Ok(None)
}

/// Recognizes a pair as `(H2(Z), H2(Z))` or `(H1(L,M,T), H1(M,L,T))` with threshold `t`.
pub fn match_hm_pair(f: &Family, g: &Family, t: usize) -> Result<Option<String>> {
    let k = f.member_dim();
    if f == g {
        if let Ok(rep) = covering_number(f, t, f.ambient_dim()) {
            let z = rep.spanned;
            if z.dim() == t + 2 && construct_h2(&z, k, t + 1)? == *f {
                return Ok(Some(format!("H2(Z), Z = <{z}>")));
            }
        }
    }
    let span_avoiding = |fam: &Family, t_space: &Subspace| -> Option<Subspace> {
        let mut it = fam.members().iter().filter(|m| !m.contains_unchecked(t_space));
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.join(m).expect("shared ambient")))
    };
    for t_space in enumerate_grassmannian(f.field(), f.ambient_dim(), t) {
        let (Some(m), Some(l)) = (span_avoiding(f, &t_space), span_avoiding(g, &t_space)) else {
            continue;
        };
        if m.dim() != k + 1 || l.dim() != k + 1 || m.meet_dim_unchecked(&l) < t + 2 {
            continue;
        }
        if construct_h1(&l, &m, &t_space, k)? == *f && construct_h1(&m, &l, &t_space, k)? == *g {
            return Ok(Some(format!("H1(L,M,T), M = <{m}>, L = <{l}>, T = <{t_space}>")));
        }
    }
    Ok(None)
}

/// Compares a record's best product with the claim's value. `expected`, when given,
/// must match the record's parameters.
pub fn compare_to_theorem(record: &SearchRecord, claim: Claim, expected: Option<SearchParams>) -> Result<ComparisonReport> {
    let p = record.params;
    if let Some(e) = expected {
        if e != p {
            return Err(Error::HypothesisViolated(format!("record has {p}, claim expects {e}")));
        }
    }
    let (n, k, t, r, q) = (p.n as i64, p.k as i64, p.t as i64, p.r as i64, p.q as u64);
    let mode = record.provenance.mode;
    let (claimed_value, hypotheses_met, label) = match claim {
        Claim::Ekr => {
            let met = n > 2 * k + t && k >= t;
            (gauss_binom(n - t, k - t, q).pow(p.r as u32), met, "n >= 2k+t+1")
        }
        Claim::HmPair => {
            if p.r != 2 {
                return Err(Error::HypothesisViolated(format!("pair claim needs r = 2, record has r = {}", p.r)));
            }
            if mode != SearchMode::NontrivialEach {
                return Err(Error::HypothesisViolated(format!("pair claim needs mode nontrivial-each, record has {mode}")));
            }
            let h = h1_size(n, k, t, q).pow(2).max(h2_size(n, k, t, q).pow(2));
            (h, n >= 4 * k + 6 && k > t, "n >= 4k+6, k >= t+1")
        }
        Claim::HmR => {
            if p.r < 3 {
                return Err(Error::HypothesisViolated(format!("r-family claim needs r >= 3, record has r = {}", p.r)));
            }
            if mode != SearchMode::NontrivialEach {
                return Err(Error::HypothesisViolated(format!("r-family claim needs mode nontrivial-each, record has {mode}")));
            }
            let ts = t + r - 2;
            // beyond r = k-t+1 no non-empty non-trivial tuple exists
            let value = if k > ts {
                h1_size(n, k, ts, q).pow(p.r as u32).max(h2_size(n, k, ts, q).pow(p.r as u32))
            } else {
                ExactScalar::zero()
            };
            (value, n >= 4 * k + 6 && k > t, "n >= 4k+6, k >= t+1")
        }
    };
    let exceeds = record.best_product > claimed_value;
    let attains = record.best_product == claimed_value && !record.families.is_empty();
    let structure = if attains {
        Some(match claim {
            Claim::Ekr => match match_trivial(&record.families, p.t)? {
                Some(t_space) => format!("trivial, T = <{t_space}>"),
                None => "not trivial".into(),
            },
            Claim::HmPair => match_hm_pair(&record.families[0], &record.families[1], p.t)?
                .unwrap_or_else(|| "no H1/H2 match".into()),
            Claim::HmR => {
                let ts = p.t + p.r - 2;
                let f = &record.families[0];
                let same = record.families.iter().all(|g| g == f);
                let m = if same { match_hm_pair(f, f, ts)? } else { None };
                m.unwrap_or_else(|| "no H1/H2 match".into())
            }
        })
    } else {
        None
    };
    let structure_ok = structure
        .as_deref()
        .is_none_or(|s| !s.starts_with("no ") && !s.starts_with("not "));
    let status = if !hypotheses_met {
        ComparisonStatus::Exploratory
    } else if exceeds || !structure_ok {
        ComparisonStatus::Fail
    } else {
        ComparisonStatus::Pass
    };
    let label = if hypotheses_met {
        format!("hypotheses met ({label})")
    } else {
        format!("exploratory (hypothesis {label} unmet)")
    };
    Ok(ComparisonReport {
        claim,
        params: p,
        claimed_value,
        best_product: record.best_product.clone(),
        exceeds,
        attains,
        hypotheses_met,
        label,
        structure,
        status,
    })
}
