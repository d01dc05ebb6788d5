//! Acceptance suite: one line per criterion, nonzero exit if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qcross::families::{
    check_cover_structure, common_intersection, construct_h1, construct_h2, coordinate_subspace, covering_number,
    double_counting_rows, h1_formula_rows, h2_formula_rows, intersection_profile, is_cross_t_intersecting,
    min_r_wise_intersection, trivial_family, ClauseStatus, Family,
};
use qcross::qbinom::{gauss_binom_u128, scan_numeric_lemmas, Lemma, ScanGrid, ScanRow, Status};
use qcross::search::{
    closure, compare_to_theorem, exhaustive_closed_pairs, match_trivial, stochastic_improve, Claim, ComparisonStatus,
    SearchConfig, SearchMode, SearchRecord,
};
use qcross::{enumerate_grassmannian, gauss_binom, ExactScalar, FieldSpec, Subspace};

const EXACT_BUDGET: u128 = 50_000_000;

type Check = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Check,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn field(q: u32) -> &'static FieldSpec {
    FieldSpec::get(q).expect("supported field")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rows_pass(rows: &[ScanRow]) -> Result<(), String> {
    match rows.iter().find(|r| r.status != Status::Pass) {
        None => Ok(()),
        Some(r) => Err(format!(
            "{} at {}: {} {} {} fails",
            r.lemma_id,
            r.grid_point_string(),
            r.lhs,
            r.relation.symbol(),
            r.rhs
        )),
    }
}

fn scan(lemmas: &[Lemma], qs: &[u64], m_max: i64, k_max: i64, n_span: i64) -> Result<(usize, usize), String> {
    let grid = ScanGrid {
        qs: qs.to_vec(),
        m_max,
        k_max,
        n_span,
    };
    let report = scan_numeric_lemmas(lemmas, &grid).map_err(|e| e.to_string())?;
    rows_pass(&report.rows)?;
    Ok((report.rows.len(), report.violations()))
}

fn c1_enumeration() -> Check {
    let mut checked = 0;
    for q in [2u32, 3] {
        for n in 0..=6usize {
            for k in 0..=n {
                let count = enumerate_grassmannian(field(q), n, k).count() as u128;
                let formula = gauss_binom_u128(n as u64, k as u64, q as u64);
                ensure(count == formula, || format!("[{n} {k}]_{q}: enumerated {count}, formula {formula}"))?;
                checked += 1;
            }
        }
    }
    let seven = enumerate_grassmannian(field(2), 3, 1).count();
    let big = enumerate_grassmannian(field(2), 6, 2).count();
    ensure(seven == 7 && big == 651, || format!("[3 1]_2 = {seven}, [6 2]_2 = {big}"))?;
    Ok(format!("{checked} (q,n,k) triples match; [3 1]_2 = 7, [6 2]_2 = 651"))
}

fn c2_ratio_bounds() -> Check {
    let (rows, _) = scan(&[Lemma::RatioBounds, Lemma::GaussianBounds], &[2, 3, 4, 5, 7, 8, 9], 40, 2, 0)?;
    Ok(format!("{rows} rows, 0 violations, q in {{2,3,4,5,7,8,9}}, 1 <= i < m <= 40"))
}

fn c3_h_monotone() -> Check {
    let (rows, _) = scan(&[Lemma::HMonotone], &[2, 3, 4, 5], 2, 10, 38)?;
    Ok(format!("{rows} rows, 0 violations, k <= 10, 2k+2 <= n <= 2k+40"))
}

fn c4_h_comparisons() -> Check {
    // gated on the h1 enumeration check
    c6_h1_profile().map_err(|e| format!("h1 gate failed, scan withheld: {e}"))?;
    let grid = ScanGrid {
        qs: vec![2, 3, 4, 5],
        m_max: 2,
        k_max: 8,
        n_span: 14,
    };
    let lemmas = [Lemma::H1VsF, Lemma::H2VsG, Lemma::H1VsH2, Lemma::H1H2Coincide];
    let report = scan_numeric_lemmas(&lemmas, &grid).map_err(|e| e.to_string())?;
    rows_pass(&report.rows)?;
    let cmp: Vec<&ScanRow> = report.rows.iter().filter(|r| r.lemma_id == "h1-vs-h2").collect();
    let mut eq_points = BTreeSet::new();
    for r in &cmp {
        let (k, t) = (r.grid_point["k"], r.grid_point["t"]);
        if r.lhs == r.rhs {
            eq_points.insert((k, t));
        }
        ensure((r.lhs == r.rhs) == ((k, t) == (3, 1)), || format!("h1^2 vs h2^2 at {}", r.grid_point_string()))?;
    }
    ensure(eq_points == BTreeSet::from([(3, 1)]), || format!("equality points {eq_points:?}"))?;
    let max_n = report.rows.iter().map(|r| r.grid_point["n"] - 4 * r.grid_point["k"]).max().unwrap_or(0);
    ensure(max_n == 20, || format!("largest n - 4k scanned is {max_n}"))?;
    Ok(format!(
        "{} rows, 0 violations, 4k+6 <= n <= 4k+20; h1^2 = h2^2 among k >= t+2 only at (k,t) = (3,1)",
        report.rows.len()
    ))
}

fn c5_h2_formula() -> Check {
    let mut rows = Vec::new();
    for (q, n, k, t) in [(2, 6, 2, 1), (2, 7, 3, 1), (3, 5, 2, 1)] {
        rows.extend(h2_formula_rows(q, n, k, t).map_err(|e| e.to_string())?);
    }
    rows_pass(&rows)?;
    let sizes: Vec<String> = rows.iter().map(|r| r.lhs.to_string()).collect();
    Ok(format!("h2 = |H2(Z)| = {}", sizes.join(", ")))
}

fn c6_h1_profile() -> Check {
    let mut rows = Vec::new();
    for (q, n, k, t) in [(2, 5, 2, 1), (2, 7, 3, 1), (3, 5, 2, 1)] {
        rows.extend(h1_formula_rows(q, n, k, t).map_err(|e| e.to_string())?);
    }
    rows_pass(&rows)?;
    let choices = rows
        .iter()
        .filter(|r| r.lemma_id == "h1-choice" && r.grid_point["n"] == 7)
        .count();
    ensure(choices >= 2, || format!("only {choices} alternative (M,T) choices at (2,7,3,1)"))?;
    let sizes: Vec<String> = rows.iter().filter(|r| r.lemma_id == "h1-formula").map(|r| r.lhs.to_string()).collect();
    Ok(format!("h1 = |H1| = {}; {choices} alternative choices agree at (2,7,3,1)", sizes.join(", ")))
}

fn c7_double_counting() -> Check {
    let f = field(2);
    let m = coordinate_subspace(f, 6, &[0, 1, 2, 3]);
    let t = coordinate_subspace(f, 6, &[0]);
    let rows = double_counting_rows(&m, &t, 3).map_err(|e| e.to_string())?;
    rows_pass(&rows)?;
    let js: BTreeSet<i64> = rows.iter().map(|r| r.grid_point["j"]).collect();
    ensure(js == BTreeSet::from([2, 3]), || format!("j values {js:?}"))?;
    let profile = intersection_profile(&m, &t, 3).map_err(|e| e.to_string())?;
    let total: usize = profile.iter().map(|p| p.1).sum();
    ensure(total as u128 == gauss_binom_u128(5, 2, 2), || format!("profile total {total}"))?;
    Ok(format!("{} rows at (2,6,3,1), j in {{2,3}}; |A_j| = {profile:?}", rows.len()))
}

fn cross_r(families: &[Family], t: usize) -> Result<usize, String> {
    let out = min_r_wise_intersection(families, EXACT_BUDGET, 0).map_err(|e| e.to_string())?;
    ensure(out.exact, || "tuple space exceeded the exact budget".into())?;
    ensure(out.min_dim >= t, || {
        let w: Vec<String> = out.witness.iter().map(ToString::to_string).collect();
        format!("tuple {} meets in dimension {}", w.join(" | "), out.min_dim)
    })?;
    Ok(out.min_dim)
}

fn c8_constructions() -> Check {
    let f = field(2);
    // (2,7,3,1), dim(M ∩ L) = t+2 = 3
    let m = coordinate_subspace(f, 7, &[0, 1, 2, 3]);
    let l = coordinate_subspace(f, 7, &[0, 1, 2, 4]);
    let t = coordinate_subspace(f, 7, &[0]);
    ensure(m.meet_dim(&l).unwrap() == 3, || "dim(M ∩ L) != 3".into())?;
    let a = construct_h1(&l, &m, &t, 3).map_err(|e| e.to_string())?;
    let b = construct_h1(&m, &l, &t, 3).map_err(|e| e.to_string())?;
    ensure(is_cross_t_intersecting(&a, &b, 1).unwrap(), || "H1(L,M,T), H1(M,L,T) not cross 1-intersecting".into())?;
    for fam in [&a, &b] {
        let d = common_intersection(fam).unwrap().dim();
        ensure(d < 1, || format!("H1 common intersection has dimension {d}"))?;
    }
    // (2,8,3,1), r = 3: dim Z = t+r = 4, threshold 3
    let z = coordinate_subspace(field(2), 8, &[0, 1, 2, 3]);
    let h2 = construct_h2(&z, 3, 3).map_err(|e| e.to_string())?;
    cross_r(&[h2.clone(), h2.clone(), h2.clone()], 1)?;
    // (2,7,3,1), r = 3: dim T = t+r-2 = 2
    let t2 = coordinate_subspace(f, 7, &[0, 1]);
    let h1 = construct_h1(&m, &m, &t2, 3).map_err(|e| e.to_string())?;
    cross_r(&[h1.clone(), h1.clone(), h1.clone()], 1)?;
    Ok(format!(
        "|H1(L,M,T)| = {}, |H1(M,L,T)| = {} cross 1-intersecting; |H2| = {} and |H1| = {} 3-cross 1-intersecting",
        a.len(),
        b.len(),
        h2.len(),
        h1.len()
    ))
}

fn tau_certified(fam: &Family, t: usize, expected: usize) -> Result<(), String> {
    let rep = covering_number(fam, t, fam.ambient_dim()).map_err(|e| e.to_string())?;
    ensure(rep.tau == expected, || format!("tau = {}, expected {expected}", rep.tau))?;
    let covers = qcross::families::is_t_cover(&rep.witness, fam, t).unwrap();
    ensure(covers && rep.witness.dim() == expected, || "witness is not a cover of dimension tau".into())?;
    let q = fam.field().q() as u64;
    for d in t..expected {
        let examined = rep.rejected.iter().find(|r| r.0 == d).map(|r| r.1);
        let all = gauss_binom_u128(fam.ambient_dim() as u64, d as u64, q) as usize;
        ensure(examined == Some(all), || format!("dimension {d}: examined {examined:?} of {all}"))?;
    }
    Ok(())
}

fn c9_covering_numbers() -> Check {
    let f = field(2);
    let t = coordinate_subspace(f, 6, &[2]);
    tau_certified(&trivial_family(&t, 3).unwrap(), 1, 1)?;
    let z = coordinate_subspace(f, 6, &[0, 1, 2]);
    let h2 = construct_h2(&z, 3, 2).unwrap();
    tau_certified(&h2, 1, 2)?;
    let m = coordinate_subspace(f, 7, &[0, 1, 2, 3]);
    let t7 = coordinate_subspace(f, 7, &[0]);
    let h1 = construct_h1(&m, &m, &t7, 3).unwrap();
    tau_certified(&h1, 1, 2)?;
    Ok("tau_1 = 1, 2, 2 for trivial, H2(Z) at (2,6,3,1), H1(M,T) at (2,7,3,1); every 1-dim candidate rejected".into())
}

fn structure_on(pairs: &[(Family, Family)], totals: &mut (usize, usize, usize)) -> Result<(), String> {
    for (a, b) in pairs {
        let rep = check_cover_structure(a, b, 1).map_err(|e| e.to_string())?;
        for c in &rep.clauses {
            match c.status {
                ClauseStatus::Pass => totals.0 += 1,
                ClauseStatus::NotApplicable => totals.1 += 1,
                ClauseStatus::Fail => {
                    totals.2 += 1;
                    return Err(format!("{} fails on |F| = {}, |G| = {}: {}", c.clause, a.len(), b.len(), c.detail));
                }
            }
        }
    }
    Ok(())
}

/// Distinct nonempty closed pairs `(cl(cl(S)), cl(S))` for a deterministic list of seeds.
fn closed_pairs(n: usize, k: usize, seeds: &[Vec<usize>]) -> Vec<(Family, Family)> {
    let f = field(2);
    let all: Vec<Subspace> = enumerate_grassmannian(f, n, k).collect();
    let mut out: Vec<(Family, Family)> = Vec::new();
    for seed in seeds {
        let s = Family::new(f, n, k, seed.iter().map(|&i| all[i % all.len()].clone())).unwrap();
        let g = closure(&s, 1).unwrap();
        if g.is_empty() {
            continue;
        }
        let fam = closure(&g, 1).unwrap();
        if !out.contains(&(fam.clone(), g.clone())) {
            out.push((fam, g));
        }
    }
    out
}

fn c10_structure() -> Check {
    let seeds: Vec<Vec<usize>> = vec![
        vec![0],
        vec![0, 1],
        vec![0, 5],
        vec![0, 100],
        vec![0, 1, 2],
        vec![0, 7, 300],
        vec![3, 50, 200],
        vec![1, 2, 3, 4],
        vec![10, 20, 30, 40],
        vec![0, 1, 2, 3, 4, 5, 6],
    ];
    let mut totals = (0, 0, 0);
    let mut pairs = closed_pairs(6, 2, &seeds);
    pairs.extend(closed_pairs(6, 3, &seeds));
    let z = coordinate_subspace(field(2), 6, &[0, 1, 2]);
    let h2 = construct_h2(&z, 3, 2).unwrap();
    pairs.push((h2.clone(), h2));
    let trivial = trivial_family(&coordinate_subspace(field(2), 6, &[0]), 2).unwrap();
    pairs.push((trivial.clone(), trivial));
    structure_on(&pairs, &mut totals)?;
    ensure(totals.0 > 0, || "no applicable clause exercised".into())?;
    Ok(format!(
        "{} maximal pairs at (2,6,2,1) and (2,6,3,1): {} clauses pass, {} not applicable, 0 fail",
        pairs.len(),
        totals.0,
        totals.1
    ))
}

fn c11_ekr_oracle() -> Check {
    let mut cfg = SearchConfig::new(2, 6, 2, 1, 2, SearchMode::Unconstrained);
    cfg.seed_size = 3;
    cfg.iteration_budget = 100_000_000;
    let rec = exhaustive_closed_pairs(&cfg).map_err(|e| e.to_string())?;
    let target = gauss_binom(5, 1, 2).pow(2);
    ensure(target == ExactScalar::from_int(961u32), || format!("[5 1]_2^2 = {target}"))?;
    ensure(rec.best_product == target, || format!("optimum {} != {target}", rec.best_product))?;
    ensure(rec.optima_count as usize == rec.optima.len(), || "optima truncated".into())?;
    for pair in &rec.optima {
        ensure(match_trivial(pair, 1).unwrap().is_some(), || "non-trivial optimal pair".into())?;
    }
    SearchRecord::from_json(&rec.to_json()).map_err(|e| e.to_string())?;
    let cmp = compare_to_theorem(&rec, Claim::Ekr, None).map_err(|e| e.to_string())?;
    ensure(cmp.status == ComparisonStatus::Pass, || format!("comparison {:?}", cmp.status))?;
    let coverage: Vec<String> = rec.coverage.iter().map(|c| format!("{}:{}", c.seed_size, c.best_product)).collect();
    Ok(format!(
        "optimum 961 = [5 1]_2^2, {} optimal pairs all trivial; best by generator count {}",
        rec.optima_count,
        coverage.join(" ")
    ))
}

fn c12_falsification() -> Check {
    let (n, k, t) = (7i64, 3i64, 1i64);
    let cap = qcross::qbinom::h1_size(n, k, t, 2).pow(2).max(qcross::qbinom::h2_size(n, k, t, 2).pow(2));
    let mut best = ExactScalar::zero();
    let mut records = Vec::new();
    for seed in 0..100u64 {
        let mut cfg = SearchConfig::new(2, 7, 3, 1, 2, SearchMode::NontrivialEach);
        cfg.seed_size = 2;
        cfg.rng_seed = seed;
        cfg.iteration_budget = 300;
        let rec = stochastic_improve(&cfg, None).map_err(|e| e.to_string())?;
        let cmp = compare_to_theorem(&rec, Claim::HmPair, None).map_err(|e| e.to_string())?;
        ensure(cmp.status == ComparisonStatus::Exploratory, || format!("seed {seed}: status {:?}", cmp.status))?;
        ensure(!cmp.exceeds && rec.best_product <= cap, || {
            format!("seed {seed}: product {} exceeds max(h1^2, h2^2) = {cap}", rec.best_product)
        })?;
        if rec.best_product > best {
            best = rec.best_product.clone();
        }
        records.push((cfg, rec));
    }
    for (cfg, rec) in &records {
        let again = stochastic_improve(cfg, None).map_err(|e| e.to_string())?;
        ensure(&again == rec, || format!("seed {} not reproducible", cfg.rng_seed))?;
        SearchRecord::from_json(&rec.to_json()).map_err(|e| e.to_string())?;
    }
    Ok(format!(
        "100 runs, best product {best} <= max(h1^2, h2^2) = {cap}; exploratory (n < 4k+6); reruns identical"
    ))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "enumeration matches Gaussian binomials", limit: secs(60), run: c1_enumeration },
        Criterion { id: 2, name: "ratio bounds scan", limit: secs(10), run: c2_ratio_bounds },
        Criterion { id: 3, name: "h monotone in x", limit: secs(30), run: c3_h_monotone },
        Criterion { id: 4, name: "h1/h2 against f/g and each other", limit: secs(300), run: c4_h_comparisons },
        Criterion { id: 5, name: "h2 closed form vs enumeration", limit: secs(120), run: c5_h2_formula },
        Criterion { id: 6, name: "h1 profile sum vs enumeration", limit: secs(120), run: c6_h1_profile },
        Criterion { id: 7, name: "double counting identity", limit: secs(120), run: c7_double_counting },
        Criterion { id: 8, name: "constructions cross-intersect", limit: secs(600), run: c8_constructions },
        Criterion { id: 9, name: "covering numbers certified", limit: secs(300), run: c9_covering_numbers },
        Criterion { id: 10, name: "cover structure clauses", limit: secs(600), run: c10_structure },
        Criterion { id: 11, name: "EKR oracle", limit: secs(1800), run: c11_ekr_oracle },
        Criterion { id: 12, name: "falsification harness", limit: secs(600), run: c12_falsification },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(detail) if elapsed <= c.limit => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("over time limit {:?}: {detail}", c.limit)),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {:>2} [{status}] {} ({:.1}s, limit {}s): {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
