//! Families of equal-dimension subspaces: the extremal constructions, the
//! intersection and cover predicates, and the structural checks built on them.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::grassmann::{enumerate_grassmannian, enumerate_subspaces_of, enumerate_superspaces, Subspace};
use crate::qbinom::{gauss_binom, h1_size, h2_size, ExactScalar, Relation, ScanRow};
use crate::search::closure;

/// A finite set of `k`-subspaces of `F_q^n`, kept sorted and free of duplicates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    field: &'static FieldSpec,
    n: usize,
    k: usize,
    members: Vec<Subspace>,
}

/// On-disk form of a [`Family`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub members: Vec<String>,
}

impl Family {
    pub fn new<I: IntoIterator<Item = Subspace>>(field: &'static FieldSpec, n: usize, k: usize, members: I) -> Result<Self> {
        let mut members: Vec<Subspace> = members.into_iter().collect();
        for m in &members {
            if m.field() != field || m.ambient_dim() != n {
                return Err(Error::AmbientMismatch(
                    format!("F_{}^{}", field.q(), n),
                    format!("F_{}^{}", m.field().q(), m.ambient_dim()),
                ));
            }
            if m.dim() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: m.dim(),
                });
            }
        }
        members.sort();
        members.dedup();
        Ok(Family { field, n, k, members })
    }

    pub fn empty(field: &'static FieldSpec, n: usize, k: usize) -> Self {
        Family {
            field,
            n,
            k,
            members: Vec::new(),
        }
    }

    pub fn field(&self) -> &'static FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn member_dim(&self) -> usize {
        self.k
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.members.binary_search(s).is_ok()
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.members.iter().all(|m| other.contains(m))
    }

    /// Members containing `s` (written `F_S`).
    pub fn containing(&self, s: &Subspace) -> Family {
        self.filtered(|f| f.contains_unchecked(s))
    }

    pub fn filtered<P: Fn(&Subspace) -> bool>(&self, keep: P) -> Family {
        Family {
            field: self.field,
            n: self.n,
            k: self.k,
            members: self.members.iter().filter(|m| keep(m)).cloned().collect(),
        }
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        self.check_compatible(other)?;
        Family::new(self.field, self.n, self.k, self.members.iter().chain(&other.members).cloned())
    }

    pub(crate) fn check_ambient_of(&self, s: &Subspace) -> Result<()> {
        if s.field() != self.field || s.ambient_dim() != self.n {
            return Err(Error::AmbientMismatch(
                format!("F_{}^{}", self.field.q(), self.n),
                format!("F_{}^{}", s.field().q(), s.ambient_dim()),
            ));
        }
        Ok(())
    }

    pub(crate) fn check_compatible(&self, other: &Family) -> Result<()> {
        if self.field != other.field || self.n != other.n {
            return Err(Error::AmbientMismatch(
                format!("F_{}^{}", self.field.q(), self.n),
                format!("F_{}^{}", other.field.q(), other.n),
            ));
        }
        Ok(())
    }

    pub fn to_file(&self) -> FamilyFile {
        FamilyFile {
            q: self.field.q(),
            n: self.n,
            k: self.k,
            members: self.members.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_file(file: &FamilyFile) -> Result<Family> {
        let field = FieldSpec::get(file.q)?;
        let mut members = Vec::with_capacity(file.members.len());
        for (i, text) in file.members.iter().enumerate() {
            let s = Subspace::parse(field, file.n, text).map_err(|e| match e {
                Error::Parse { position, message } => Error::Parse {
                    position: format!("member {}, {}", i + 1, position),
                    message,
                },
                other => other,
            })?;
            if s.dim() != file.k {
                return Err(Error::Parse {
                    position: format!("member {}", i + 1),
                    message: format!("expected dimension {}, found {}", file.k, s.dim()),
                });
            }
            members.push(s);
        }
        Family::new(field, file.n, file.k, members)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("family file serializes")
    }

    pub fn from_json(text: &str) -> Result<Family> {
        let file: FamilyFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            position: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Family::from_file(&file)
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(F_{}^{}, k={}, {} members)", self.field.q(), self.n, self.k, self.members.len())
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = FamilyFile::deserialize(d)?;
        Family::from_file(&file).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All `k`-subspaces containing `t_space`.
pub fn trivial_family(t_space: &Subspace, k: usize) -> Result<Family> {
    let n = t_space.ambient_dim();
    if k < t_space.dim() || k > n {
        return Err(Error::PreconditionViolated(format!(
            "need dim T = {} <= k = {k} <= n = {n}",
            t_space.dim()
        )));
    }
    Family::new(t_space.field(), n, k, enumerate_superspaces(t_space, k))
}

/// `{F ⊇ T : dim(F ∩ L) >= t+1} ∪ {F ⊆ M : T ⊄ F}` with `t = dim T`.
pub fn construct_h1(l: &Subspace, m: &Subspace, t_space: &Subspace, k: usize) -> Result<Family> {
    m.meet_dim(l)?;
    m.meet_dim(t_space)?;
    let t = t_space.dim();
    if m.dim() != k + 1 || l.dim() != k + 1 {
        return Err(Error::PreconditionViolated(format!(
            "dim M = {}, dim L = {} must both equal k + 1 = {}",
            m.dim(),
            l.dim(),
            k + 1
        )));
    }
    if !m.contains_unchecked(t_space) || !l.contains_unchecked(t_space) {
        return Err(Error::PreconditionViolated("T must lie in M ∩ L".into()));
    }
    if k < t {
        return Err(Error::PreconditionViolated(format!("k = {k} < dim T = {t}")));
    }
    let through_t = enumerate_superspaces(t_space, k).filter(|f| f.meet_dim_unchecked(l) > t);
    let inside_m = enumerate_subspaces_of(m, k).filter(|f| !f.contains_unchecked(t_space));
    Family::new(m.field(), m.ambient_dim(), k, through_t.chain(inside_m))
}

/// `{F ∈ [V k] : dim(F ∩ Z) >= threshold}`.
pub fn construct_h2(z: &Subspace, k: usize, threshold: usize) -> Result<Family> {
    let n = z.ambient_dim();
    if threshold > z.dim() || threshold > k || k > n {
        return Err(Error::PreconditionViolated(format!(
            "need threshold = {threshold} <= dim Z = {} and threshold <= k = {k} <= n = {n}",
            z.dim()
        )));
    }
    let members: Vec<Subspace> = enumerate_grassmannian(z.field(), n, k)
        .par_bridge()
        .filter(|f| f.meet_dim_unchecked(z) >= threshold)
        .collect();
    Family::new(z.field(), n, k, members)
}

/// Minimum of `dim(F_1 ∩ ... ∩ F_r)` over member tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionOutcome {
    pub min_dim: usize,
    pub witness: Vec<Subspace>,
    /// `false` when the tuple space exceeded the budget and was sampled.
    pub exact: bool,
    pub tuples_examined: u128,
    pub seed: Option<u64>,
}

fn tuple_meet_min(families: &[Family], prefix: &Subspace, depth: usize, idx: &mut Vec<usize>, best: &mut (usize, Vec<usize>)) {
    let fam = &families[depth];
    let last = depth + 1 == families.len();
    for (i, f) in fam.members.iter().enumerate() {
        if best.0 == 0 {
            return;
        }
        idx.push(i);
        if last {
            let d = prefix.meet_dim_unchecked(f);
            if d < best.0 {
                *best = (d, idx.clone());
            }
        } else {
            let next = prefix.meet(f).expect("shared ambient");
            tuple_meet_min(families, &next, depth + 1, idx, best);
        }
        idx.pop();
    }
}

/// Exact minimum r-wise intersection dimension when `∏|F_i| <= sample_budget`;
/// otherwise `sample_budget` tuples drawn with a ChaCha8 stream seeded by `seed`.
pub fn min_r_wise_intersection(families: &[Family], sample_budget: u128, seed: u64) -> Result<IntersectionOutcome> {
    if families.len() < 2 {
        return Err(Error::PreconditionViolated("need at least two families".into()));
    }
    for f in &families[1..] {
        families[0].check_compatible(f)?;
    }
    if families.iter().any(Family::is_empty) {
        return Err(Error::EmptyFamily);
    }
    let total = families
        .iter()
        .try_fold(1u128, |acc, f| acc.checked_mul(f.len() as u128))
        .unwrap_or(u128::MAX);
    let whole = Subspace::whole(families[0].field, families[0].n);
    if total <= sample_budget {
        // split on the first family; each worker keeps its own running minimum
        let per_first: Vec<(usize, Vec<usize>)> = families[0]
            .members
            .par_iter()
            .enumerate()
            .map(|(i, f0)| {
                let mut best = (usize::MAX, Vec::new());
                let mut idx = vec![i];
                let prefix = whole.meet(f0).expect("shared ambient");
                tuple_meet_min(families, &prefix, 1, &mut idx, &mut best);
                best
            })
            .collect();
        let (min_dim, idx) = per_first
            .into_iter()
            .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
            .expect("nonempty first family");
        let witness = idx.iter().zip(families).map(|(&i, f)| f.members[i].clone()).collect();
        return Ok(IntersectionOutcome {
            min_dim,
            witness,
            exact: true,
            tuples_examined: total,
            seed: None,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: (usize, Vec<usize>) = (usize::MAX, Vec::new());
    for _ in 0..sample_budget.max(1) {
        let idx: Vec<usize> = families.iter().map(|f| rng.gen_range(0..f.len())).collect();
        let mut acc = whole.clone();
        for (&i, f) in idx.iter().zip(families) {
            acc = acc.meet(&f.members[i]).expect("shared ambient");
        }
        if acc.dim() < best.0 {
            best = (acc.dim(), idx);
        }
    }
    let witness = best.1.iter().zip(families).map(|(&i, f)| f.members[i].clone()).collect();
    Ok(IntersectionOutcome {
        min_dim: best.0,
        witness,
        exact: false,
        tuples_examined: sample_budget.max(1),
        seed: Some(seed),
    })
}

/// Exact r-cross t-intersection test; `budget` caps the tuple count.
pub fn is_r_cross_t_intersecting(families: &[Family], t: usize, budget: u128) -> Result<(bool, IntersectionOutcome)> {
    let outcome = min_r_wise_intersection(families, budget, 0)?;
    if !outcome.exact {
        return Err(Error::BudgetExceeded(format!(
            "{} families exceed the exact budget {budget}",
            families.len()
        )));
    }
    Ok((outcome.min_dim >= t, outcome))
}

/// Whether every two members (including a member with itself) meet in dimension `>= t`.
pub fn is_t_intersecting(fam: &Family, t: usize) -> bool {
    let m = &fam.members;
    (0..m.len())
        .into_par_iter()
        .all(|i| m[i..].iter().all(|g| m[i].meet_dim_unchecked(g) >= t))
}

/// Whether every `F ∈ f`, `G ∈ g` meet in dimension `>= t`.
pub fn is_cross_t_intersecting(f: &Family, g: &Family, t: usize) -> Result<bool> {
    f.check_compatible(g)?;
    Ok(f.members
        .par_iter()
        .all(|a| g.members.iter().all(|b| a.meet_dim_unchecked(b) >= t)))
}

/// Intersection of all members.
pub fn common_intersection(fam: &Family) -> Result<Subspace> {
    let mut iter = fam.members.iter();
    let mut acc = iter.next().ok_or(Error::EmptyFamily)?.clone();
    for m in iter {
        if acc.dim() == 0 {
            break;
        }
        acc = acc.meet(m)?;
    }
    Ok(acc)
}

/// Whether `s` meets every member in dimension `>= t`. Empty families are rejected.
pub fn is_t_cover(s: &Subspace, fam: &Family, t: usize) -> Result<bool> {
    if fam.is_empty() {
        return Err(Error::EmptyFamily);
    }
    fam.check_ambient_of(s)?;
    Ok(s.dim() >= t && fam.members.iter().all(|f| s.meet_dim_unchecked(f) >= t))
}

/// Covering number and the complete set of minimum covers.
#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub t: usize,
    pub tau: usize,
    pub witness: Subspace,
    /// Every `t`-cover of dimension `tau`.
    pub cover_set: Vec<Subspace>,
    /// Join of all members of `cover_set`.
    pub spanned: Subspace,
    /// `(dimension, candidates examined and rejected)` for every dimension below `tau`.
    pub rejected: Vec<(usize, usize)>,
}

impl CoverReport {
    /// Join of the minimum covers that contain `t_space`, if any do.
    pub fn span_through(&self, t_space: &Subspace) -> Option<Subspace> {
        let mut through = self.cover_set.iter().filter(|c| c.contains_unchecked(t_space));
        let first = through.next()?.clone();
        Some(through.fold(first, |acc, c| acc.join(c).expect("shared ambient")))
    }

    pub fn covers_as_family(&self) -> Family {
        let s = &self.witness;
        Family::new(s.field(), s.ambient_dim(), self.tau, self.cover_set.iter().cloned()).expect("covers share a dimension")
    }
}

/// All `t`-covers of dimension `d`, in enumeration order. Candidates are rejected at
/// the first failing member; a failing member is moved to the front of the probe
/// order so later candidates hit it first.
pub fn covers_of_dim(fam: &Family, t: usize, d: usize) -> Result<Vec<Subspace>> {
    Ok(covers_with_count(fam, t, d)?.0)
}

/// [`covers_of_dim`] together with the number of candidates examined.
fn covers_with_count(fam: &Family, t: usize, d: usize) -> Result<(Vec<Subspace>, usize)> {
    if fam.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if d < t {
        return Ok((Vec::new(), 0));
    }
    let members = &fam.members;
    let candidates: Vec<Subspace> = enumerate_grassmannian(fam.field, fam.n, d).collect();
    let chunk = (candidates.len() / (rayon::current_num_threads() * 4)).max(64);
    let covers: Vec<Vec<Subspace>> = candidates
        .par_chunks(chunk)
        .map(|part| {
            let mut order: Vec<usize> = (0..members.len()).collect();
            let mut found = Vec::new();
            for s in part {
                let failing = order.iter().position(|&i| s.meet_dim_unchecked(&members[i]) < t);
                match failing {
                    None => found.push(s.clone()),
                    Some(0) => {}
                    Some(p) => {
                        let idx = order.remove(p);
                        order.insert(0, idx);
                    }
                }
            }
            found
        })
        .collect();
    Ok((covers.into_iter().flatten().collect(), candidates.len()))
}

/// Smallest `d` in `[t, max_dim]` admitting a `t`-cover, by iterative deepening.
pub fn covering_number(fam: &Family, t: usize, max_dim: usize) -> Result<CoverReport> {
    if fam.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if t > max_dim || max_dim > fam.n {
        return Err(Error::PreconditionViolated(format!(
            "need t = {t} <= max_dim = {max_dim} <= n = {}",
            fam.n
        )));
    }
    let mut rejected = Vec::new();
    for d in t..=max_dim {
        let (covers, examined) = covers_with_count(fam, t, d)?;
        if covers.is_empty() {
            rejected.push((d, examined));
            continue;
        }
        let spanned = covers[1..]
            .iter()
            .fold(covers[0].clone(), |acc, c| acc.join(c).expect("shared ambient"));
        return Ok(CoverReport {
            t,
            tau: d,
            witness: covers[0].clone(),
            cover_set: covers,
            spanned,
            rejected,
        });
    }
    Err(Error::NoCoverWithinBound { t, max_dim })
}

pub fn tau(fam: &Family, t: usize) -> Result<usize> {
    Ok(covering_number(fam, t, fam.n)?.tau)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClauseStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: String,
    pub status: ClauseStatus,
    pub detail: String,
}

impl ClauseResult {
    fn new(clause: &str, ok: bool, detail: String) -> Self {
        ClauseResult {
            clause: clause.to_string(),
            status: if ok { ClauseStatus::Pass } else { ClauseStatus::Fail },
            detail,
        }
    }

    fn not_applicable(clause: &str, why: String) -> Self {
        ClauseResult {
            clause: clause.to_string(),
            status: ClauseStatus::NotApplicable,
            detail: why,
        }
    }
}

/// Outcome of [`check_cover_structure`].
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub t: usize,
    pub tau_f: usize,
    pub tau_g: usize,
    /// Minimum covers of `F` and of `G`.
    pub covers_f: Family,
    pub covers_g: Family,
    pub clauses: Vec<ClauseResult>,
}

impl StructureReport {
    pub fn failures(&self) -> impl Iterator<Item = &ClauseResult> {
        self.clauses.iter().filter(|c| c.status == ClauseStatus::Fail)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Checks the structure of the minimum-cover families of a maximal cross
/// `t`-intersecting pair `(F, G)`.
///
/// Clauses:
/// - `covers-cross`: the minimum covers of `F` and of `G` are cross `t`-intersecting
///   (`n >= 2k >= 2t`).
/// - `cover-span[X]`: for `X` with `tau_t(X) = t+1` and each `t`-space `T` lying in a
///   cover, the span `M` of the covers through `T` meets every member of `X` avoiding
///   `T` in a hyperplane of `M`, `t+1 <= dim M <= k+1`, and the number of such covers
///   is at most `[dim M - t 1] <= [k-t+1 1]` (`n >= 2k >= 2t`).
/// - `covers-split[X,Y]`, `covers-pencil[X,Y]`, `covers-product[X,Y]`: the three cases
///   for `tau_t(X) = tau_t(Y) = t+1` covers `T_X`, `T_Y` with `tau_t(T_X) = t+1`
///   (`n >= 2k >= 2t+2`), split by `tau_t(T_Y)` and whether `T_X` is `t`-intersecting.
pub fn check_cover_structure(f: &Family, g: &Family, t: usize) -> Result<StructureReport> {
    f.check_compatible(g)?;
    if f.is_empty() || g.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if closure(f, t)? != *g || closure(g, t)? != *f {
        return Err(Error::NotMaximal(
            "closure of one family differs from the other".into(),
        ));
    }
    let (n, k, q) = (f.n, f.k, f.field.q() as u64);
    let cf = covering_number(f, t, n)?;
    let cg = covering_number(g, t, n)?;
    let tf = cf.covers_as_family();
    let tg = cg.covers_as_family();
    let mut clauses = Vec::new();

    // minimum covers cross-intersect
    if n >= 2 * k && k >= t {
        let ok = is_cross_t_intersecting(&tf, &tg, t)?;
        clauses.push(ClauseResult::new(
            "covers-cross",
            ok,
            format!("|T_F| = {}, |T_G| = {}, tau = ({}, {})", tf.len(), tg.len(), cf.tau, cg.tau),
        ));
    } else {
        clauses.push(ClauseResult::not_applicable("covers-cross", format!("needs n >= 2k >= 2t, have n={n} k={k} t={t}")));
    }

    for (name, fam, rep) in [("F", f, &cf), ("G", g, &cg)] {
        let clause = format!("cover-span[{name}]");
        if rep.tau != t + 1 {
            clauses.push(ClauseResult::not_applicable(&clause, format!("tau_t({name}) = {} != t+1", rep.tau)));
            continue;
        }
        if !(n >= 2 * k && k >= t) {
            clauses.push(ClauseResult::not_applicable(&clause, format!("needs n >= 2k >= 2t, have n={n} k={k} t={t}")));
            continue;
        }
        let (ok, detail) = check_cover_span(fam, rep, t, q)?;
        clauses.push(ClauseResult::new(&clause, ok, detail));
    }

    for (xname, yname, x_cov, y_cov, tx, ty) in [("F", "G", &cf, &cg, &tf, &tg), ("G", "F", &cg, &cf, &tg, &tf)] {
        let tag = format!("[{xname},{yname}]");
        let names = ["covers-split", "covers-pencil", "covers-product"].map(|c| format!("{c}{tag}"));
        let hyp_fail = if !(n >= 2 * k && k > t) {
            Some(format!("needs n >= 2k >= 2t+2, have n={n} k={k} t={t}"))
        } else if x_cov.tau != t + 1 || y_cov.tau != t + 1 {
            Some(format!("needs tau_t({xname}) = tau_t({yname}) = t+1, have ({}, {})", x_cov.tau, y_cov.tau))
        } else {
            None
        };
        if let Some(why) = hyp_fail {
            for c in &names {
                clauses.push(ClauseResult::not_applicable(c, why.clone()));
            }
            continue;
        }
        let tau_tx = tau(tx, t)?;
        if tau_tx != t + 1 {
            for c in &names {
                clauses.push(ClauseResult::not_applicable(c, format!("tau_t(T_{xname}) = {tau_tx} != t+1")));
            }
            continue;
        }
        let tau_ty = tau(ty, t)?;
        let (sx, sy) = (tx.len(), ty.len());
        let one = |m: usize| gauss_binom(m as i64, 1, q);
        let sxe = ExactScalar::from_int(sx as u64);
        let sye = ExactScalar::from_int(sy as u64);

        // (split) tau_t(T_Y) = t and |T_Y| >= 2
        if tau_ty == t && sy >= 2 {
            let cap_x = one(k - t + 1) + ExactScalar::from_int(q * q) * one(t);
            let ok = sxe <= cap_x && sye <= one(2);
            clauses.push(ClauseResult::new(
                &names[0],
                ok,
                format!("|T_{xname}| = {sx} <= {cap_x}, |T_{yname}| = {sy} <= {}", one(2)),
            ));
        } else {
            clauses.push(ClauseResult::not_applicable(
                &names[0],
                format!("needs tau_t(T_{yname}) = t and |T_{yname}| >= 2, have tau {tau_ty}, size {sy}"),
            ));
        }

        let tx_intersecting = is_t_intersecting(tx, t);
        // (pencil) tau_t(T_Y) = t+1, T_X t-intersecting
        if tau_ty == t + 1 && tx_intersecting {
            let ty_intersecting = is_t_intersecting(ty, t);
            let all: Vec<&Subspace> = tx.members.iter().chain(&ty.members).collect();
            let z = all[1..].iter().fold(all[0].clone(), |acc, c| acc.join(c).expect("shared ambient"));
            let ok = ty_intersecting && z.dim() <= t + 2;
            clauses.push(ClauseResult::new(
                &names[1],
                ok,
                format!(
                    "T_{yname} t-intersecting: {ty_intersecting}; span of all covers Z = <{z}> has dim {} <= t+2",
                    z.dim()
                ),
            ));
        } else {
            clauses.push(ClauseResult::not_applicable(
                &names[1],
                format!("needs tau_t(T_{yname}) = t+1 and T_{xname} t-intersecting, have tau {tau_ty}, intersecting {tx_intersecting}"),
            ));
        }

        // (product) tau_t(T_Y) = t+1, T_X not t-intersecting
        if tau_ty == t + 1 && !tx_intersecting {
            let cap = one(2).pow(2);
            let prod = ExactScalar::from_int(((sx + 1) * (sy + 1)) as u64);
            let target = one(t + 2).pow(2);
            let ok = sxe <= cap && sye <= cap && prod < target;
            clauses.push(ClauseResult::new(
                &names[2],
                ok,
                format!("|T_{xname}| = {sx}, |T_{yname}| = {sy} <= {cap}; (|T_{xname}|+1)(|T_{yname}|+1) = {prod} < {target}"),
            ));
        } else {
            clauses.push(ClauseResult::not_applicable(
                &names[2],
                format!("needs tau_t(T_{yname}) = t+1 and T_{xname} not t-intersecting, have tau {tau_ty}, intersecting {tx_intersecting}"),
            ));
        }
    }

    Ok(StructureReport {
        t,
        tau_f: cf.tau,
        tau_g: cg.tau,
        covers_f: tf,
        covers_g: tg,
        clauses,
    })
}

fn check_cover_span(fam: &Family, rep: &CoverReport, t: usize, q: u64) -> Result<(bool, String)> {
    let k = fam.k;
    let mut bases: BTreeSet<Subspace> = BTreeSet::new();
    for c in &rep.cover_set {
        bases.extend(enumerate_subspaces_of(c, t));
    }
    for t_space in &bases {
        let m = rep.span_through(t_space).expect("t_space lies in some cover");
        let through = rep.cover_set.iter().filter(|c| c.contains_unchecked(t_space)).count();
        let dm = m.dim();
        if !(t < dm && dm <= k + 1) {
            return Ok((false, format!("T = <{t_space}>: dim M = {dm} outside [t+1, k+1]")));
        }
        if let Some(bad) = fam
            .members
            .iter()
            .find(|f| !f.contains_unchecked(t_space) && f.meet_dim_unchecked(&m) + 1 != dm)
        {
            return Ok((false, format!("T = <{t_space}>, M = <{m}>: member <{bad}> meets M in dimension != dim M - 1")));
        }
        let count = ExactScalar::from_int(through as u64);
        let first = gauss_binom((dm - t) as i64, 1, q);
        let second = gauss_binom((k - t + 1) as i64, 1, q);
        if !(count <= first && first <= second) {
            return Ok((false, format!("T = <{t_space}>: |T| = {through}, [dim M - t 1] = {first}, [k-t+1 1] = {second}")));
        }
    }
    Ok((true, format!("{} t-spaces inside minimum covers checked", bases.len())))
}

/// A push-up witness: `R ⊇ S` of dimension `s + t - y` with
/// `|F_S| <= [x-t+1 1]^{t-y} |F_R|`.
#[derive(Clone, Debug, Serialize)]
pub struct PushupOutcome {
    pub r: Subspace,
    pub size_s: usize,
    pub size_r: usize,
    pub factor: ExactScalar,
    pub ratio_ok: bool,
    pub candidates: usize,
}

/// Searches every `(s+t-y)`-superspace `R` of `S` for one satisfying the push-up
/// inequality, where `y = dim(X ∩ S) < t` and `X` is a `t`-cover of `fam`.
/// Returns the candidate with the largest `|F_R|` (first in enumeration order on ties).
pub fn verify_pushup(fam: &Family, x: &Subspace, s: &Subspace, t: usize) -> Result<PushupOutcome> {
    fam.check_ambient_of(x)?;
    fam.check_ambient_of(s)?;
    let (n, k) = (fam.n, fam.k);
    let xd = x.dim();
    if xd < t || k < t {
        return Err(Error::PreconditionViolated(format!("need dim X = {xd} >= t and k = {k} >= t = {t}")));
    }
    if n < k + xd {
        return Err(Error::PreconditionViolated(format!("need n = {n} >= k + dim X = {}", k + xd)));
    }
    if !fam.is_empty() && !is_t_cover(x, fam, t)? {
        return Err(Error::PreconditionViolated("X is not a t-cover of the family".into()));
    }
    let y = x.meet_dim_unchecked(s);
    if y >= t {
        return Err(Error::PreconditionViolated(format!("dim(X ∩ S) = {y} must be < t = {t}")));
    }
    let target = s.dim() + t - y;
    if target > n {
        return Err(Error::PreconditionViolated(format!("dim R = {target} exceeds n = {n}")));
    }
    let size_s = fam.containing(s).len();
    let factor = gauss_binom((xd - t + 1) as i64, 1, fam.field.q() as u64).pow((t - y) as u32);
    let mut best: Option<(usize, Subspace)> = None;
    let mut candidates = 0;
    for r in enumerate_superspaces(s, target) {
        candidates += 1;
        let size_r = fam.members.iter().filter(|f| f.contains_unchecked(&r)).count();
        if best.as_ref().is_none_or(|(b, _)| size_r > *b) {
            best = Some((size_r, r));
        }
    }
    let (size_r, r) = best.ok_or_else(|| Error::NoWitness("no superspace of the required dimension".into()))?;
    let ratio_ok = ExactScalar::from_int(size_s as u64) <= &factor * &ExactScalar::from_int(size_r as u64);
    if !ratio_ok {
        return Err(Error::NoWitness(format!(
            "|F_S| = {size_s} exceeds {factor} * max |F_R| = {size_r} over {candidates} candidates"
        )));
    }
    Ok(PushupOutcome {
        r,
        size_s,
        size_r,
        factor,
        ratio_ok,
        candidates,
    })
}

/// Size bound for one member of a cross `t`-intersecting pair in terms of the two
/// covering numbers.
#[derive(Clone, Debug, Serialize)]
pub struct SizeBoundOutcome {
    pub tau_f: usize,
    pub tau_g: usize,
    pub size: usize,
    pub bound: ExactScalar,
    pub holds: bool,
}

/// `|F| <= [tau_F t] [k-t+1 1]^{tau_G - t} [n - tau_G  k - tau_G]` for cross
/// `t`-intersecting `F`, `G` with `n >= 2k-t+1 >= t+3`.
pub fn verify_size_bound(f: &Family, g: &Family, t: usize) -> Result<SizeBoundOutcome> {
    f.check_compatible(g)?;
    if f.is_empty() || g.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let (n, k) = (f.n as i64, f.k as i64);
    let ti = t as i64;
    if !(n > 2 * k - ti && 2 * k - ti + 1 >= ti + 3) {
        return Err(Error::HypothesisViolated(format!("need n >= 2k-t+1 >= t+3, have n={n} k={k} t={t}")));
    }
    if !is_cross_t_intersecting(f, g, t)? {
        return Err(Error::HypothesisViolated("families are not cross t-intersecting".into()));
    }
    let q = f.field.q() as u64;
    let tau_f = tau(f, t)?;
    let tau_g = tau(g, t)?;
    let bound = gauss_binom(tau_f as i64, ti, q)
        * gauss_binom(k - ti + 1, 1, q).pow((tau_g as i64 - ti).max(0) as u32)
        * gauss_binom(n - tau_g as i64, k - tau_g as i64, q);
    let size = f.len();
    let holds = ExactScalar::from_int(size as u64) <= bound;
    Ok(SizeBoundOutcome {
        tau_f,
        tau_g,
        size,
        bound,
        holds,
    })
}

/// Members of `G` containing no `(t+1)`-dimensional `t`-cover of `F`.
#[derive(Clone, Debug, Serialize)]
pub struct AvoiderReport {
    pub members: Family,
    pub size: usize,
    /// `(1 + q^{-k-t-2}) [n-t-1 k-t-1]`
    pub bound: ExactScalar,
    /// The bound is asserted only when `n >= 4k+6`.
    pub asserted: bool,
    pub within_bound: bool,
}

pub fn b_family(f: &Family, g: &Family, t: usize) -> Result<AvoiderReport> {
    f.check_compatible(g)?;
    let (n, k, q) = (f.n as i64, f.k as i64, f.field.q() as u64);
    let ti = t as i64;
    let bound = (ExactScalar::one() + ExactScalar::power(q, -k - ti - 2)) * gauss_binom(n - ti - 1, k - ti - 1, q);
    let asserted = n >= 4 * k + 6;
    if g.is_empty() {
        return Ok(AvoiderReport {
            members: g.clone(),
            size: 0,
            bound,
            asserted,
            within_bound: true,
        });
    }
    let cf = covering_number(f, t, f.n)?;
    let tau_g = tau(g, t)?;
    if cf.tau != t + 1 || tau_g != t + 1 {
        return Err(Error::HypothesisViolated(format!(
            "need tau_t(F) = tau_t(G) = t+1, have ({}, {tau_g})",
            cf.tau
        )));
    }
    let members = g.filtered(|m| !cf.cover_set.iter().any(|c| m.contains_unchecked(c)));
    let size = members.len();
    let within_bound = ExactScalar::from_int(size as u64) <= bound;
    Ok(AvoiderReport {
        members,
        size,
        bound,
        asserted,
        within_bound,
    })
}

/// `(j, |A_j|)` for `j = t..=k`, where `A_j = {F ⊇ T : dim F = k, dim(F ∩ M) = j}`.
pub fn intersection_profile(m: &Subspace, t_space: &Subspace, k: usize) -> Result<Vec<(usize, usize)>> {
    if !m.contains(t_space)? {
        return Err(Error::PreconditionViolated("T must lie in M".into()));
    }
    let t = t_space.dim();
    if k < t || k > m.ambient_dim() {
        return Err(Error::PreconditionViolated(format!("need dim T = {t} <= k = {k} <= n")));
    }
    let mut counts = vec![0usize; k + 1];
    for f in enumerate_superspaces(t_space, k) {
        counts[f.meet_dim_unchecked(m)] += 1;
    }
    Ok((t..=k).map(|j| (j, counts[j])).collect())
}

/// Checks `|L_j| = [k-t+1 j-t][n-j k-j] = Σ_{i=j..k} [i-t j-t] |A_i|` for `t < j <= k`,
/// where `L_j` counts pairs `(I, F)` with `T ⊆ I ⊆ M`, `dim I = j`, `I ⊆ F`, `dim F = k`.
/// The `A_i` come from enumeration and `|L_j|` is also counted pair by pair.
pub fn double_counting_rows(m: &Subspace, t_space: &Subspace, k: usize) -> Result<Vec<ScanRow>> {
    if m.dim() != k + 1 {
        return Err(Error::PreconditionViolated(format!("need dim M = k+1 = {}", k + 1)));
    }
    let profile = intersection_profile(m, t_space, k)?;
    let (n, t, q) = (m.ambient_dim() as i64, t_space.dim() as i64, m.field().q() as u64);
    let a = |i: i64| ExactScalar::from_int(profile.iter().find(|(j, _)| *j as i64 == i).map_or(0, |p| p.1) as u64);
    let mut rows = Vec::new();
    for j in t + 1..=k as i64 {
        let point = [("q", q as i64), ("n", n), ("k", k as i64), ("t", t), ("j", j)];
        let formula = gauss_binom(k as i64 - t + 1, j - t, q) * gauss_binom(n - j, k as i64 - j, q);
        let sum = (j..=k as i64).fold(ExactScalar::zero(), |acc, i| acc + gauss_binom(i - t, j - t, q) * a(i));
        let pairs: usize = enumerate_superspaces(t_space, j as usize)
            .filter(|i| m.contains_unchecked(i))
            .map(|i| enumerate_superspaces(&i, k).count())
            .sum();
        rows.push(ScanRow::new("double-counting", &point, formula.clone(), Relation::Eq, sum));
        rows.push(ScanRow::new(
            "double-counting-pairs",
            &point,
            ExactScalar::from_int(pairs as u64),
            Relation::Eq,
            formula,
        ));
    }
    Ok(rows)
}

/// The `i`-th standard basis vector of `F_q^n`.
pub fn unit_vector(n: usize, i: usize) -> Vec<u8> {
    let mut v = vec![0u8; n];
    v[i] = 1;
    v
}

/// Span of the standard basis vectors with the given indices.
pub fn coordinate_subspace(field: &'static FieldSpec, n: usize, idx: &[usize]) -> Subspace {
    let rows: Vec<Vec<u8>> = idx.iter().map(|&i| unit_vector(n, i)).collect();
    Subspace::span(field, n, &rows).expect("unit vectors have ambient length")
}

/// Formula-versus-enumeration rows for `h1_size`: the canonical coordinate choice of
/// `(M, T)`, a second non-coordinate choice, and (when `n` allows) a pair `L != M`
/// sharing a `(t+2)`-space. Any failing row means the closed form must not be used.
pub fn h1_formula_rows(q: u32, n: usize, k: usize, t: usize) -> Result<Vec<ScanRow>> {
    let field = FieldSpec::get(q)?;
    if !(k > t && n > k) {
        return Err(Error::PreconditionViolated(format!("need k >= t+1 and n >= k+1, have n={n} k={k} t={t}")));
    }
    let formula = h1_size(n as i64, k as i64, t as i64, q as u64);
    let point = [("q", q as i64), ("n", n as i64), ("k", k as i64), ("t", t as i64)];
    let mut rows = Vec::new();

    let m = coordinate_subspace(field, n, &(0..=k).collect::<Vec<_>>());
    let t_space = coordinate_subspace(field, n, &(0..t).collect::<Vec<_>>());
    let size = construct_h1(&m, &m, &t_space, k)?.len();
    rows.push(ScanRow::new("h1-formula", &point, formula.clone(), Relation::Eq, ExactScalar::from_int(size as u64)));

    // a (k+1)-space in general position: last in enumeration order, with its last t-subspace
    let m2 = enumerate_grassmannian(field, n, k + 1).last().expect("k+1 <= n");
    let t2 = enumerate_subspaces_of(&m2, t).last().expect("t <= k+1");
    let size2 = construct_h1(&m2, &m2, &t2, k)?.len();
    rows.push(ScanRow::new("h1-choice", &point, ExactScalar::from_int(size as u64), Relation::Eq, ExactScalar::from_int(size2 as u64)));

    // L != M with dim(M ∩ L) = t+2, needs k+1-(t+2) extra coordinates
    let extra = k - t - 1;
    if extra > 0 && k + 1 + extra <= n {
        let mut idx: Vec<usize> = (0..t + 2).collect();
        idx.extend(k + 1..k + 1 + extra);
        let l = coordinate_subspace(field, n, &idx);
        let size3 = construct_h1(&l, &m, &t_space, k)?.len();
        rows.push(ScanRow::new("h1-choice", &point, ExactScalar::from_int(size as u64), Relation::Eq, ExactScalar::from_int(size3 as u64)));
    }
    Ok(rows)
}

/// Formula-versus-enumeration row for `h2_size` with a coordinate `(t+2)`-space.
pub fn h2_formula_rows(q: u32, n: usize, k: usize, t: usize) -> Result<Vec<ScanRow>> {
    let field = FieldSpec::get(q)?;
    if !(k > t && n >= t + 2) {
        return Err(Error::PreconditionViolated(format!("need k >= t+1 and n >= t+2, have n={n} k={k} t={t}")));
    }
    let z = coordinate_subspace(field, n, &(0..t + 2).collect::<Vec<_>>());
    let size = construct_h2(&z, k, t + 1)?.len();
    let point = [("q", q as i64), ("n", n as i64), ("k", k as i64), ("t", t as i64)];
    Ok(vec![ScanRow::new(
        "h2-formula",
        &point,
        h2_size(n as i64, k as i64, t as i64, q as u64),
        Relation::Eq,
        ExactScalar::from_int(size as u64),
    )])
}

/// Points at which the `h1` closed form is validated before any scan uses it.
pub const H1_GATE_POINTS: [(u32, usize, usize, usize); 3] = [(2, 5, 2, 1), (2, 7, 3, 1), (3, 5, 2, 1)];

/// Runs the `h1` enumeration gate over [`H1_GATE_POINTS`].
pub fn h1_gate_rows() -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for (q, n, k, t) in H1_GATE_POINTS {
        rows.extend(h1_formula_rows(q, n, k, t)?);
    }
    Ok(rows)
}

/// Distinct members across several families, for certificate bookkeeping.
pub fn distinct_members(families: &[Family]) -> usize {
    families.iter().flat_map(|f| f.members.iter()).collect::<HashSet<_>>().len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> &'static FieldSpec {
        FieldSpec::get(2).unwrap()
    }

    fn sub(n: usize, text: &str) -> Subspace {
        Subspace::parse(f2(), n, text).unwrap()
    }

    #[test]
    fn trivial_family_sizes() {
        let t = sub(4, "1000");
        assert_eq!(trivial_family(&t, 2).unwrap().len(), 7);
        assert_eq!(trivial_family(&t, 1).unwrap().members(), std::slice::from_ref(&t));
        assert_eq!(trivial_family(&t, 4).unwrap().members(), &[Subspace::whole(f2(), 4)]);
        assert!(trivial_family(&sub(4, "1000;0100"), 1).is_err());
    }

    #[test]
    fn h1_at_minimal_k_is_every_k_subspace_of_m() {
        // (q, n, k, t) = (2, 5, 2, 1)
        let m = coordinate_subspace(f2(), 5, &[0, 1, 2]);
        let t = coordinate_subspace(f2(), 5, &[0]);
        let h1 = construct_h1(&m, &m, &t, 2).unwrap();
        let all: Family = Family::new(f2(), 5, 2, enumerate_subspaces_of(&m, 2)).unwrap();
        assert_eq!(h1, all);
        assert_eq!(h1.len() as u128, crate::qbinom::gauss_binom_u128(3, 2, 2));
    }

    #[test]
    fn h1_rejects_t_outside_l() {
        let m = coordinate_subspace(f2(), 6, &[0, 1, 2]);
        let l = coordinate_subspace(f2(), 6, &[1, 2, 3]);
        let t = coordinate_subspace(f2(), 6, &[0]);
        assert!(matches!(construct_h1(&l, &m, &t, 2), Err(Error::PreconditionViolated(_))));
        let bad_dim = coordinate_subspace(f2(), 6, &[0, 1]);
        assert!(matches!(construct_h1(&bad_dim, &m, &t, 2), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn h2_threshold_edge_cases() {
        let z = coordinate_subspace(f2(), 5, &[0, 1, 2]);
        let all = construct_h2(&z, 2, 0).unwrap();
        assert_eq!(all.len() as u128, crate::qbinom::gauss_binom_u128(5, 2, 2));
        let top = construct_h2(&z, 3, 3).unwrap();
        assert_eq!(top, trivial_family(&z, 3).unwrap());
        assert!(construct_h2(&z, 2, 3).is_err());
        assert!(construct_h2(&z, 6, 1).is_err());
    }

    #[test]
    fn h2_minimal_k_matches_formula() {
        // (2, 6, 2, 1): formula and enumeration agree
        let rows = h2_formula_rows(2, 6, 2, 1).unwrap();
        assert!(rows.iter().all(|r| r.status == crate::qbinom::Status::Pass));
    }

    #[test]
    fn common_intersection_examples() {
        let t = sub(5, "01000");
        let fam = trivial_family(&t, 2).unwrap();
        assert_eq!(common_intersection(&fam).unwrap(), t);
        let single = Family::new(f2(), 5, 2, [sub(5, "10000;00010")]).unwrap();
        assert_eq!(common_intersection(&single).unwrap(), sub(5, "10000;00010"));
        assert_eq!(common_intersection(&Family::empty(f2(), 5, 2)), Err(Error::EmptyFamily));
    }

    #[test]
    fn t_cover_examples() {
        let t = sub(5, "01000");
        let fam = trivial_family(&t, 2).unwrap();
        assert!(is_t_cover(&Subspace::whole(f2(), 5), &fam, 1).unwrap());
        assert!(is_t_cover(&t, &fam, 1).unwrap());
        assert!(!is_t_cover(&t, &fam, 2).unwrap());
        assert!(is_t_cover(&t, &Family::empty(f2(), 5, 2), 1).is_err());
    }

    #[test]
    fn covering_number_of_trivial_family() {
        let t = sub(5, "00100");
        let fam = trivial_family(&t, 2).unwrap();
        let rep = covering_number(&fam, 1, 5).unwrap();
        assert_eq!(rep.tau, 1);
        assert_eq!(rep.witness, t);
        assert_eq!(rep.cover_set, vec![t.clone()]);
        assert!(covering_number(&fam, 2, 1).is_err());
        assert!(matches!(covering_number(&fam, 3, 3), Err(Error::NoCoverWithinBound { .. })));
    }

    #[test]
    fn min_intersection_of_trivial_copies() {
        let t = sub(5, "00100");
        let fam = trivial_family(&t, 2).unwrap();
        let out = min_r_wise_intersection(&[fam.clone(), fam.clone(), fam.clone()], 1 << 20, 0).unwrap();
        assert!(out.exact);
        assert_eq!(out.min_dim, 1);
        assert_eq!(out.witness.len(), 3);
        let sampled = min_r_wise_intersection(&[fam.clone(), fam.clone()], 10, 7).unwrap();
        assert!(!sampled.exact);
        assert_eq!(sampled.seed, Some(7));
        assert!(sampled.min_dim >= 1);
        assert_eq!(
            min_r_wise_intersection(&[fam.clone(), Family::empty(f2(), 5, 2)], 100, 0),
            Err(Error::EmptyFamily)
        );
    }

    #[test]
    fn min_intersection_sees_past_nonshrinking_prefixes() {
        // hyperplanes of F_2^4 avoiding x3 = 0: four independent ones meet in zero,
        // though the first two chosen in member order share a plane
        let w = Subspace::whole(f2(), 4);
        let t = sub(4, "1000;0100;0010");
        let hyper = Family::new(f2(), 4, 3, enumerate_subspaces_of(&w, 3).filter(|h| *h != t)).unwrap();
        assert_eq!(hyper.len(), 14);
        let out = min_r_wise_intersection(&vec![hyper.clone(); 4], 1 << 20, 0).unwrap();
        assert_eq!(out.min_dim, 0);
        let mut acc = w.clone();
        for h in &out.witness {
            acc = acc.meet(h).unwrap();
        }
        assert_eq!(acc.dim(), 0);
        let three = min_r_wise_intersection(&vec![hyper; 3], 1 << 20, 0).unwrap();
        assert_eq!(three.min_dim, 1);
    }

    #[test]
    fn pushup_examples() {
        // (q, n, k, t) = (2, 6, 2, 1), fam = all 2-spaces through T, X = T, S ∩ T = 0
        let t = sub(6, "100000");
        let fam = trivial_family(&t, 2).unwrap();
        let s = sub(6, "000100");
        let out = verify_pushup(&fam, &t, &s, 1).unwrap();
        assert_eq!(out.r, s.join(&t).unwrap());
        assert_eq!((out.size_s, out.size_r), (1, 1));
        assert!(out.ratio_ok);
        assert_eq!(out.candidates, 31);
        // S meeting X in dimension t is rejected
        assert!(matches!(verify_pushup(&fam, &t, &t, 1), Err(Error::PreconditionViolated(_))));
        // |F_S| = 0: any R qualifies
        let far = sub(6, "000001;000010");
        let none = trivial_family(&t, 2).unwrap().containing(&far);
        assert!(none.is_empty());
        let out = verify_pushup(&fam, &t, &far, 1).unwrap();
        assert_eq!(out.size_s, 0);
    }

    #[test]
    fn size_bound_is_tight_for_trivial_pairs() {
        let t = sub(6, "010000");
        let fam = trivial_family(&t, 2).unwrap();
        let out = verify_size_bound(&fam, &fam, 1).unwrap();
        assert_eq!((out.tau_f, out.tau_g), (1, 1));
        assert_eq!(out.bound, ExactScalar::from_int(fam.len() as u64));
        assert!(out.holds);
    }

    #[test]
    fn avoiders_edge_cases() {
        let z = coordinate_subspace(f2(), 6, &[0, 1, 2]);
        let h2 = construct_h2(&z, 3, 2).unwrap();
        let empty = b_family(&h2, &Family::empty(f2(), 6, 3), 1).unwrap();
        assert_eq!(empty.size, 0);
        let t = sub(6, "100000");
        let triv = trivial_family(&t, 3).unwrap();
        assert!(matches!(b_family(&triv, &triv, 1), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn profile_edge_cases() {
        let t = sub(5, "10000");
        let one = intersection_profile(&coordinate_subspace(f2(), 5, &[0, 1]), &t, 1).unwrap();
        assert_eq!(one, vec![(1, 1)]);
        let whole = Subspace::whole(f2(), 5);
        let prof = intersection_profile(&whole, &t, 3).unwrap();
        let total: usize = prof.iter().map(|p| p.1).sum();
        assert_eq!(prof.last().unwrap().1, total);
        assert!(prof[..prof.len() - 1].iter().all(|p| p.1 == 0));
    }

    #[test]
    fn family_file_round_trip_and_errors() {
        let z = coordinate_subspace(f2(), 5, &[0, 1, 2]);
        let fam = construct_h2(&z, 2, 2).unwrap();
        let text = fam.to_json();
        assert_eq!(Family::from_json(&text).unwrap(), fam);
        let bad = r#"{"q": 2, "n": 3, "k": 1, "members": ["100", "1x0"]}"#;
        match Family::from_json(bad) {
            Err(Error::Parse { position, .. }) => assert!(position.starts_with("member 2")),
            other => panic!("unexpected {other:?}"),
        }
        let wrong_dim = r#"{"q": 2, "n": 3, "k": 1, "members": ["100;010"]}"#;
        assert!(matches!(Family::from_json(wrong_dim), Err(Error::Parse { .. })));
        assert!(matches!(Family::from_json("{"), Err(Error::Parse { .. })));
    }
}
