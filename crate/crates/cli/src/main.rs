//! `qcross` command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use qcross::families::{
    self, b_family, check_cover_structure, covering_number, is_cross_t_intersecting, is_t_cover, is_t_intersecting,
    min_r_wise_intersection, verify_pushup, verify_size_bound, ClauseStatus, Family,
};
use qcross::qbinom::{scan_numeric_lemmas, Lemma, ScanGrid, ScanReport, Status};
use qcross::search::{
    compare_to_theorem, exhaustive_closed_pairs, stochastic_improve, Claim, ComparisonStatus, SearchConfig, SearchMode,
    SearchParams, SearchRecord, EXACT_TUPLE_BUDGET,
};
use qcross::{enumerate_grassmannian, gauss_binom, Error, FieldSpec, Subspace};

#[derive(Parser, Debug)]
#[command(name = "qcross", version, about = "Exact subspace-family computations over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output to this path instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gaussian binomial coefficient [n k]_q.
    Qbinom {
        #[arg(short = 'n')]
        n: i64,
        #[arg(short = 'k')]
        k: i64,
        #[arg(short = 'q')]
        q: u64,
    },
    /// Scan numeric claims over a parameter grid.
    Scan(ScanArgs),
    /// List the k-subspaces of F_q^n in enumeration order.
    Enum {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'q')]
        q: u32,
        /// Stop after this many subspaces.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Build a family and write it in the family file format.
    Construct(ConstructArgs),
    /// Check a predicate on family files.
    Verify(VerifyArgs),
    /// Covering number of a family, with all minimum covers.
    Covers {
        file: PathBuf,
        #[arg(long)]
        t: usize,
        /// Largest cover dimension searched (default n).
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Search for cross-intersecting tuples with large size products.
    Search(SearchArgs),
    /// Compare a search record with a claimed maximum.
    Report {
        record: PathBuf,
        #[arg(long)]
        claim: String,
    },
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Comma-separated claim ids or groups (2.1, 2.4, 1, 2.5, 2.6, 4.1, all).
    #[arg(long, default_value = "all")]
    lemmas: String,
    /// Comma-separated field orders.
    #[arg(long, default_value = "2,3,4,5")]
    q: String,
    #[arg(long, default_value_t = 40)]
    m_max: i64,
    #[arg(long, default_value_t = 8)]
    k_max: i64,
    /// How far past each claim's smallest admissible n to scan.
    #[arg(long, default_value_t = 14)]
    n_span: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConstructKind {
    H1,
    H2,
    Trivial,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(value_enum)]
    kind: ConstructKind,
    #[arg(short = 'q')]
    q: u32,
    #[arg(short = 'n')]
    n: usize,
    #[arg(short = 'k')]
    k: usize,
    /// T (h1, trivial).
    #[arg(long)]
    t_space: Option<String>,
    /// M (h1).
    #[arg(long)]
    m: Option<String>,
    /// L (h1; defaults to M).
    #[arg(long)]
    l: Option<String>,
    /// Z (h2).
    #[arg(long)]
    z: Option<String>,
    /// Intersection threshold with Z (h2; defaults to dim Z - 1).
    #[arg(long)]
    threshold: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Predicate {
    /// r-cross t-intersecting (one file per family).
    CrossT,
    /// Pairwise t-intersecting (one file).
    TIntersecting,
    /// Whether --cover is a t-cover (one file).
    TCover,
    /// Size bound through covering numbers (two files).
    SizeBound,
    /// Push-up witness search (one file, --x and --s).
    Pushup,
    /// Members of G avoiding every (t+1)-cover of F (two files).
    Avoiders,
    /// Cover-structure clauses of a maximal pair (two files).
    Structure,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    predicate: Predicate,
    files: Vec<PathBuf>,
    #[arg(long)]
    t: usize,
    /// Number of families for cross-t (defaults to the number of files).
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    cover: Option<String>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    s: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Exhaustive,
    Stochastic,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(value_enum, default_value_t = Method::Exhaustive)]
    method: Method,
    #[arg(short = 'q')]
    q: u32,
    #[arg(short = 'n')]
    n: usize,
    #[arg(short = 'k')]
    k: usize,
    #[arg(short = 't')]
    t: usize,
    #[arg(short = 'r', default_value_t = 2)]
    r: usize,
    #[arg(long, default_value = "unconstrained")]
    mode: String,
    #[arg(long, default_value_t = 2)]
    seed_size: usize,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Resume the stochastic search from the families of a record file.
    #[arg(long)]
    resume: Option<PathBuf>,
}

/// Final outcome of a command: whether any check failed.
struct Outcome {
    result: Value,
    text: String,
    csv: Option<String>,
    failed: bool,
}

impl Outcome {
    fn ok<T: Serialize>(result: &T, text: String) -> anyhow::Result<Outcome> {
        Ok(Outcome {
            result: serde_json::to_value(result)?,
            text,
            csv: None,
            failed: false,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global() {
            eprintln!("error: --workers: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(outcome) => match emit(&cli, &outcome) {
            Ok(()) => ExitCode::from(u8::from(outcome.failed)),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// 1 for failed checks and falsifications, 2 for usage and input errors.
fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::NoWitness(_) | Error::CertificateMismatch(_)) => 1,
        _ => 2,
    }
}

fn provenance(cli: &Cli) -> Value {
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    json!({
        "tool": "qcross",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command_name(&cli.command),
        "args": std::env::args().skip(1).collect::<Vec<_>>(),
        "seed": cli.seed,
        "timestamp": timestamp,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Qbinom { .. } => "qbinom",
        Command::Scan(_) => "scan",
        Command::Enum { .. } => "enum",
        Command::Construct(_) => "construct",
        Command::Verify(_) => "verify",
        Command::Covers { .. } => "covers",
        Command::Search(_) => "search",
        Command::Report { .. } => "report",
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> anyhow::Result<()> {
    let prov = provenance(cli);
    let header = || {
        let args: Vec<String> = prov["args"].as_array().into_iter().flatten().filter_map(|a| a.as_str().map(String::from)).collect();
        format!(
            "# qcross {} | {} | seed {} | timestamp {}\n",
            env!("CARGO_PKG_VERSION"),
            args.join(" "),
            cli.seed,
            prov["timestamp"]
        )
    };
    let body = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({ "provenance": prov, "result": outcome.result }))?;
            s.push('\n');
            s
        }
        Format::Text => header() + &outcome.text,
        Format::Csv => match &outcome.csv {
            Some(csv) => header() + csv,
            None => bail!("--format csv is not available for `{}`", command_name(&cli.command)),
        },
    };
    match &cli.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Qbinom { n, k, q } => {
            FieldSpec::get(*q as u32)?;
            let v = gauss_binom(*n, *k, *q);
            let mut outcome = Outcome::ok(&json!({ "n": n, "k": k, "q": q, "value": v }), format!("{v}\n"))?;
            outcome.csv = Some(format!("n,k,q,value\n{n},{k},{q},{v}\n"));
            Ok(outcome)
        }
        Command::Scan(args) => cmd_scan(args),
        Command::Enum { n, k, q, limit } => {
            let field = FieldSpec::get(*q)?;
            if k > n {
                bail!("-k {k} exceeds -n {n}");
            }
            let list: Vec<String> = enumerate_grassmannian(field, *n, *k)
                .take(limit.unwrap_or(usize::MAX))
                .map(|s| s.to_string())
                .collect();
            let total = gauss_binom(*n as i64, *k as i64, *q as u64);
            let text = list.iter().map(|s| format!("{s}\n")).collect::<String>();
            let mut outcome = Outcome::ok(&json!({ "q": q, "n": n, "k": k, "total": total, "listed": list.len(), "subspaces": list }), text)?;
            outcome.csv = Some(std::iter::once("index,subspace\n".to_string()).chain(list.iter().enumerate().map(|(i, s)| format!("{i},{s}\n"))).collect());
            Ok(outcome)
        }
        Command::Construct(args) => cmd_construct(args),
        Command::Verify(args) => cmd_verify(args, cli.seed),
        Command::Covers { file, t, max_dim } => {
            let fam = read_family(file)?;
            let rep = covering_number(&fam, *t, max_dim.unwrap_or(fam.ambient_dim()))?;
            let text = format!(
                "tau_{t} = {}\nwitness <{}>\nminimum covers: {}\nspan <{}>\n",
                rep.tau,
                rep.witness,
                rep.cover_set.len(),
                rep.spanned
            );
            Outcome::ok(&rep, text)
        }
        Command::Search(args) => cmd_search(args, cli.seed),
        Command::Report { record, claim } => {
            let claim: Claim = claim.parse()?;
            let rec = read_record(record)?;
            let rep = compare_to_theorem(&rec, claim, None)?;
            let text = format!(
                "{claim}: best {} vs claimed {} ({}), status {:?}{}\n",
                rep.best_product,
                rep.claimed_value,
                rep.label,
                rep.status,
                rep.structure.as_deref().map(|s| format!(", structure: {s}")).unwrap_or_default()
            );
            let failed = rep.status == ComparisonStatus::Fail;
            let mut outcome = Outcome::ok(&rep, text)?;
            outcome.failed = failed;
            Ok(outcome)
        }
    }
}

fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> anyhow::Result<Vec<T>> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| anyhow!("{flag}: cannot parse {s:?}")))
        .collect()
}

fn cmd_scan(args: &ScanArgs) -> anyhow::Result<Outcome> {
    let mut lemmas: Vec<Lemma> = Vec::new();
    for name in args.lemmas.split(',') {
        for l in Lemma::resolve(name).map_err(|_| anyhow!("--lemmas: unknown claim {name:?}"))? {
            if !lemmas.contains(&l) {
                lemmas.push(l);
            }
        }
    }
    let qs: Vec<u64> = parse_list("--q", &args.q)?;
    for &q in &qs {
        FieldSpec::get(q as u32).with_context(|| format!("--q {q}"))?;
    }
    let grid = ScanGrid {
        qs,
        m_max: args.m_max,
        k_max: args.k_max,
        n_span: args.n_span,
    };
    let uses_h1 = lemmas.iter().any(|l| matches!(l, Lemma::H1VsF | Lemma::H1VsH2 | Lemma::H1H2Coincide));
    let mut report = ScanReport::default();
    if uses_h1 {
        let gate = families::h1_gate_rows()?;
        let gate_ok = gate.iter().all(|r| r.status == Status::Pass);
        report.extend_with("h1-gate", gate);
        if !gate_ok {
            lemmas.retain(|l| !matches!(l, Lemma::H1VsF | Lemma::H1VsH2 | Lemma::H1H2Coincide));
        }
    }
    if !lemmas.is_empty() {
        let scanned = scan_numeric_lemmas(&lemmas, &grid)?;
        report.summaries.extend(scanned.summaries);
        report.rows.extend(scanned.rows);
    }
    let mut text = String::new();
    for s in &report.summaries {
        text += &format!("{:<22} checked {:>7}  filtered {:>7}  violations {}\n", s.lemma_id, s.checked, s.filtered, s.violations);
    }
    for r in report.failures() {
        text += &format!("FAIL {} at {}: {} {} {}\n", r.lemma_id, r.grid_point_string(), r.lhs, r.relation.symbol(), r.rhs);
    }
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    let failed = report.violations() > 0;
    let mut outcome = Outcome::ok(&report, text)?;
    outcome.csv = Some(String::from_utf8(csv)?);
    outcome.failed = failed;
    Ok(outcome)
}

fn parse_subspace(flag: &str, field: &'static FieldSpec, n: usize, text: &Option<String>) -> anyhow::Result<Subspace> {
    let text = text.as_ref().ok_or_else(|| anyhow!("{flag} is required"))?;
    Subspace::parse(field, n, text).with_context(|| format!("{flag} {text:?}"))
}

fn cmd_construct(args: &ConstructArgs) -> anyhow::Result<Outcome> {
    let field = FieldSpec::get(args.q)?;
    let n = args.n;
    let fam = match args.kind {
        ConstructKind::Trivial => {
            let t = parse_subspace("--t-space", field, n, &args.t_space)?;
            families::trivial_family(&t, args.k)?
        }
        ConstructKind::H1 => {
            let m = parse_subspace("--m", field, n, &args.m)?;
            let l = match &args.l {
                Some(_) => parse_subspace("--l", field, n, &args.l)?,
                None => m.clone(),
            };
            let t = parse_subspace("--t-space", field, n, &args.t_space)?;
            families::construct_h1(&l, &m, &t, args.k)?
        }
        ConstructKind::H2 => {
            let z = parse_subspace("--z", field, n, &args.z)?;
            let threshold = args.threshold.unwrap_or(z.dim().saturating_sub(1));
            families::construct_h2(&z, args.k, threshold)?
        }
    };
    let text = fam.members().iter().map(|m| format!("{m}\n")).collect();
    Outcome::ok(&fam, text)
}

/// File contents, unwrapped from the `{provenance, result}` envelope if present.
fn read_payload(path: &Path) -> anyhow::Result<String> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(Value::Object(map)) = serde_json::from_str::<Value>(&text) {
        if map.contains_key("provenance") {
            if let Some(result) = map.get("result") {
                return Ok(serde_json::to_string_pretty(result)?);
            }
        }
    }
    Ok(text)
}

fn read_family(path: &Path) -> anyhow::Result<Family> {
    let text = read_payload(path)?;
    Family::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_record(path: &Path) -> anyhow::Result<SearchRecord> {
    let text = read_payload(path)?;
    SearchRecord::from_json(&text).with_context(|| format!("loading {}", path.display()))
}

fn files_exactly(args: &VerifyArgs, count: usize) -> anyhow::Result<Vec<Family>> {
    if args.files.len() != count {
        bail!("{:?} takes {count} family file(s), got {}", args.predicate, args.files.len());
    }
    args.files.iter().map(|p| read_family(p)).collect()
}

fn cmd_verify(args: &VerifyArgs, seed: u64) -> anyhow::Result<Outcome> {
    let t = args.t;
    match args.predicate {
        Predicate::CrossT => {
            let r = args.r.unwrap_or(args.files.len());
            if r < 2 {
                bail!("--r must be at least 2");
            }
            let fams = files_exactly(args, r)?;
            let (holds, outcome) = if r == 2 {
                let holds = is_cross_t_intersecting(&fams[0], &fams[1], t)?;
                let outcome = min_r_wise_intersection(&fams, EXACT_TUPLE_BUDGET, seed)?;
                (holds, outcome)
            } else {
                families::is_r_cross_t_intersecting(&fams, t, EXACT_TUPLE_BUDGET)?
            };
            let witness: Vec<String> = outcome.witness.iter().map(ToString::to_string).collect();
            let text = if holds {
                format!("{r}-cross {t}-intersecting: yes (minimum intersection dimension {})\n", outcome.min_dim)
            } else {
                format!("{r}-cross {t}-intersecting: no; witness {} meets in dimension {}\n", witness.join(" | "), outcome.min_dim)
            };
            let mut o = Outcome::ok(&json!({ "predicate": "cross-t", "t": t, "r": r, "holds": holds, "min_dim": outcome.min_dim, "witness": witness }), text)?;
            o.failed = !holds;
            Ok(o)
        }
        Predicate::TIntersecting => {
            let fam = files_exactly(args, 1)?.remove(0);
            if fam.is_empty() {
                return Err(Error::EmptyFamily.into());
            }
            let holds = is_t_intersecting(&fam, t);
            let mut o = Outcome::ok(&json!({ "predicate": "t-intersecting", "t": t, "holds": holds }), format!("{t}-intersecting: {holds}\n"))?;
            o.failed = !holds;
            Ok(o)
        }
        Predicate::TCover => {
            let fam = files_exactly(args, 1)?.remove(0);
            let cover = parse_subspace("--cover", fam.field(), fam.ambient_dim(), &args.cover)?;
            let holds = is_t_cover(&cover, &fam, t)?;
            let mut o = Outcome::ok(&json!({ "predicate": "t-cover", "t": t, "cover": cover, "holds": holds }), format!("{t}-cover: {holds}\n"))?;
            o.failed = !holds;
            Ok(o)
        }
        Predicate::SizeBound => {
            let fams = files_exactly(args, 2)?;
            let out = verify_size_bound(&fams[0], &fams[1], t)?;
            let text = format!("|F| = {} <= {} (tau = {}, {}): {}\n", out.size, out.bound, out.tau_f, out.tau_g, out.holds);
            let failed = !out.holds;
            let mut o = Outcome::ok(&out, text)?;
            o.failed = failed;
            Ok(o)
        }
        Predicate::Pushup => {
            let fam = files_exactly(args, 1)?.remove(0);
            let x = parse_subspace("--x", fam.field(), fam.ambient_dim(), &args.x)?;
            let s = parse_subspace("--s", fam.field(), fam.ambient_dim(), &args.s)?;
            let out = verify_pushup(&fam, &x, &s, t)?;
            let text = format!("R = <{}>: |F_S| = {} <= {} * |F_R| = {}\n", out.r, out.size_s, out.factor, out.size_r);
            Outcome::ok(&out, text)
        }
        Predicate::Avoiders => {
            let fams = files_exactly(args, 2)?;
            let out = b_family(&fams[0], &fams[1], t)?;
            let text = format!(
                "|B| = {} vs {} ({}): {}\n",
                out.size,
                out.bound,
                if out.asserted { "asserted" } else { "exploratory" },
                out.within_bound
            );
            let failed = out.asserted && !out.within_bound;
            let mut o = Outcome::ok(&out, text)?;
            o.failed = failed;
            Ok(o)
        }
        Predicate::Structure => {
            let fams = files_exactly(args, 2)?;
            let rep = check_cover_structure(&fams[0], &fams[1], t)?;
            let text = rep
                .clauses
                .iter()
                .map(|c| format!("{:<26} {:<15} {}\n", c.clause, format!("{:?}", c.status), c.detail))
                .collect();
            let failed = rep.clauses.iter().any(|c| c.status == ClauseStatus::Fail);
            let mut o = Outcome::ok(&rep, text)?;
            o.failed = failed;
            Ok(o)
        }
    }
}

fn cmd_search(args: &SearchArgs, seed: u64) -> anyhow::Result<Outcome> {
    let mode: SearchMode = args.mode.parse().map_err(|_| anyhow!("--mode: unknown mode {:?}", args.mode))?;
    let config = SearchConfig {
        params: SearchParams {
            q: args.q,
            n: args.n,
            k: args.k,
            t: args.t,
            r: args.r,
        },
        mode,
        seed_size: args.seed_size,
        rng_seed: seed,
        iteration_budget: args.budget,
    };
    let record = match args.method {
        Method::Exhaustive => {
            if args.resume.is_some() {
                bail!("--resume applies to the stochastic search only");
            }
            exhaustive_closed_pairs(&config)?
        }
        Method::Stochastic => {
            let start = match &args.resume {
                Some(path) => Some(read_record(path)?.families),
                None => None,
            };
            stochastic_improve(&config, start.as_deref().filter(|s| !s.is_empty()))?
        }
    };
    let sizes: Vec<String> = record.families.iter().map(|f| f.len().to_string()).collect();
    let text = format!(
        "best product {} (sizes {}), certificates {:?}, optima {}\n",
        record.best_product,
        sizes.join(" x "),
        record.certificates,
        record.optima_count
    );
    Outcome::ok(&record, text)
}
