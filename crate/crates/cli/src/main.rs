use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use ttk_core::braid::{ttk_braid, BraidWord, TtkParams};
use ttk_core::certificate::{validate_certificate, GapCertificate};
use ttk_core::families::{
    berge_family, certify_gaps, dean_family, primitive_h1, primitive_h2, tunnel_number_one, DeanKind, FamilyError,
    TwistPair, DEFAULT_SEARCH_BOUND,
};
use ttk_core::invariants::{
    alexander, burau_characteristic, torus_oracle_check, InvariantError, InvariantReport, DEFAULT_JONES_CAP,
};
use ttk_core::oracle::{jones_suite, symmetry_suite, torus_suite, SuiteReport, DEFAULT_SEED};
use ttk_core::poly::LaurentPoly;
use ttk_core::spectrum::{hyperbolicity, spectrum_report, surface_slope};

#[derive(Parser)]
#[command(
    name = "ttk",
    version,
    about = "Twisted torus knots: invariants, bridge bounds and gap certificates"
)]
struct Cli {
    /// Output format; defaults to csv for `enumerate` and json otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Largest crossing count for which the Jones polynomial is computed.
    #[arg(long, global = true, default_value_t = DEFAULT_JONES_CAP)]
    jones_cap: usize,
    /// Upper limit for searches over the twist count n.
    #[arg(long, global = true, env = "TTK_SEARCH_BOUND", default_value_t = DEFAULT_SEARCH_BOUND)]
    search_bound: u64,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct KnotArgs {
    p: i64,
    q: i64,
    r: i64,
    s: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Braid statistics, surface slope, bridge bounds, hyperbolicity and primitivity.
    #[command(allow_negative_numbers = true)]
    Info(KnotArgs),
    /// The braid word of T(p, q, r, s).
    #[command(allow_negative_numbers = true)]
    Braid(KnotArgs),
    /// Alexander polynomial, determinant and (capped) Jones polynomial.
    #[command(allow_negative_numbers = true)]
    Invariants(KnotArgs),
    /// Issue a certificate for two bridge-spectrum gaps of size at least C.
    #[command(allow_negative_numbers = true)]
    CertifyGaps {
        #[arg(value_name = "C")]
        gap: u64,
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        e: i64,
        f: i64,
    },
    /// Tabulate a knot family over inclusive parameter ranges such as 2..5.
    #[command(subcommand)]
    Enumerate(Family),
    /// Run the invariant property suites.
    Oracle(OracleArgs),
    /// Re-derive a certificate from its defining fields and compare.
    Validate { file: PathBuf },
}

#[derive(Subcommand)]
enum Family {
    /// T(mn + 1, mn + n + 1, n, ±1).
    Berge {
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        sign: i64,
    },
    /// Dean knots T(p, q, 2q - p, ±1).
    Dean1 {
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        sign: i64,
    },
    /// Dean knots T(p, q, p - lq, ±1).
    Dean2 {
        #[arg(long)]
        l: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        sign: i64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scope {
    Torus,
    Symmetry,
    All,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(value_enum)]
    scope: Scope,
    /// Largest p and q in the torus grid.
    #[arg(long, default_value_t = 8)]
    max_pq: i64,
    /// Largest |f| in the torus grid.
    #[arg(long, default_value_t = 3)]
    max_f: i64,
    /// Number of random knots in the symmetry suite.
    #[arg(long, default_value_t = 50)]
    count: usize,
    #[arg(long, default_value_t = 14)]
    max_crossings: u128,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Test fixture: drop the cyclotomic correction from the Burau determinant.
    #[arg(long, hide = true)]
    corrupt_burau: bool,
}

enum Failure {
    /// Exit 2.
    Input { kind: &'static str, reason: String },
    /// Exit 1.
    Refused(String),
}

fn input(kind: &'static str, reason: impl ToString) -> Failure {
    Failure::Input {
        kind,
        reason: reason.to_string(),
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::SearchExhausted { .. } => Failure::Refused(e.to_string()),
            FamilyError::Internal(_) => Failure::Refused(e.to_string()),
            _ => input("invalid_pair", e),
        }
    }
}

struct Output {
    body: String,
    ok: bool,
}

fn canonical<T: Serialize>(v: &T) -> String {
    let v = serde_json::to_value(v).expect("output serializes");
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

fn knot(a: &KnotArgs) -> Result<TtkParams, Failure> {
    TtkParams::new(a.p, a.q, a.r, a.s).map_err(|e| input("invalid_parameters", e))
}

fn int(x: i128) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn no_csv(format: Format) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(input("invalid_format", "csv output is only available for enumerate"));
    }
    Ok(())
}

fn cmd_info(k: TtkParams, format: Format) -> Result<Output, Failure> {
    no_csv(format)?;
    let perm = k.closure_permutation();
    let spectrum = spectrum_report(&k);
    let hyp = hyperbolicity(&k);
    let doc = json!({
        "params": k,
        "torus_regime": k.is_torus_regime(),
        "braid": {
            "strands": k.p(),
            "crossing_count": int(k.crossing_count() as i128),
            "exponent_sum": int(k.exponent_sum()),
            "components": perm.cycle_count(),
            "closure_permutation": perm.to_string(),
        },
        "surface_slope": int(surface_slope(&k)),
        "spectrum": spectrum,
        "hyperbolicity": hyp,
        "primitive_h1": primitive_h1(&k),
        "primitive_h2": primitive_h2(&k),
        "tunnel_one": tunnel_number_one(&k),
    });
    let body = match format {
        Format::Text => {
            let mut s = format!("{k}\n");
            s += &format!("crossings {}  components {}\n", k.crossing_count(), perm.cycle_count());
            s += &format!("surface slope {}\n", surface_slope(&k));
            for b in &spectrum {
                let show = |x: Option<i64>| x.map_or("-".to_string(), |v| v.to_string());
                s += &format!(
                    "b{}: lower {} upper {} exact {}\n",
                    b.genus,
                    show(b.lower),
                    show(b.upper),
                    show(b.exact)
                );
            }
            s += &format!("link {:?}  knot {:?}\n", hyp.link_status, hyp.knot_status);
            s += &format!(
                "primitive h1 {}  h2 {}  tunnel one {:?}\n",
                primitive_h1(&k),
                primitive_h2(&k),
                tunnel_number_one(&k)
            );
            s
        }
        _ => canonical(&doc),
    };
    Ok(Output { body, ok: true })
}

fn cmd_braid(k: TtkParams, format: Format) -> Result<Output, Failure> {
    no_csv(format)?;
    let w = ttk_braid(&k).map_err(|e| input("too_long", e))?;
    let body = match format {
        Format::Text => format!("{w}\n"),
        _ => canonical(&json!({"params": k, "braid": w, "components": w.component_count()})),
    };
    Ok(Output { body, ok: true })
}

fn cmd_invariants(k: TtkParams, format: Format, cap: usize) -> Result<Output, Failure> {
    no_csv(format)?;
    let w = ttk_braid(&k).map_err(|e| input("too_long", e))?;
    let report = InvariantReport::compute(&w, cap).map_err(|e| match e {
        InvariantError::NotAKnot(_) => input("not_a_knot", e),
        _ => Failure::Refused(e.to_string()),
    })?;
    let torus = torus_oracle_check(&k).map_err(|e| Failure::Refused(e.to_string()))?;
    let body = match format {
        Format::Text => {
            let jones = report
                .jones
                .as_ref()
                .map_or("not computed (crossings exceed cap)".into(), |j| j.to_string());
            format!(
                "{k}\nalexander {}\ndeterminant {}\njones {}\ntorus check {:?}\n",
                report.alexander, report.determinant, jones, torus
            )
        }
        _ => canonical(&json!({
            "params": k,
            "alexander_text": report.alexander.to_string(),
            "jones_text": report.jones.as_ref().map(|j| j.to_string()),
            "invariants": report,
            "torus_check": torus,
            "note": "a matching Alexander polynomial shows consistency with a torus knot, not equality",
        })),
    };
    Ok(Output { body, ok: true })
}

fn cmd_certify(gap: u64, alpha: [i64; 2], beta: [i64; 4], format: Format, bound: u64) -> Result<Output, Failure> {
    no_csv(format)?;
    if gap == 0 {
        return Err(input("invalid_input", "C must be positive"));
    }
    let pair = TwistPair::new(alpha, beta).map_err(|e| input("invalid_pair", e))?;
    let cert = certify_gaps(gap, &pair, bound)?;
    if let Err(e) = validate_certificate(&cert) {
        return Err(Failure::Refused(format!("self-validation failed: {e}")));
    }
    let body = match format {
        Format::Text => format!(
            "C = {}  n = {}  T({}, {}, {}, {})\nb0 = {}  b1 in [{}, {}]  b2 <= {}  gaps ({}, {})\n",
            cert.c,
            cert.n,
            cert.params[0],
            cert.params[1],
            cert.params[2],
            cert.params[3],
            cert.bounds.b0,
            cert.bounds.b1[0],
            cert.bounds.b1[1],
            cert.bounds.b2_upper,
            cert.gaps[0],
            cert.gaps[1]
        ),
        _ => cert.to_canonical_json() + "\n",
    };
    Ok(Output { body, ok: true })
}

/// Parses `a..b` (inclusive) or a single integer.
fn parse_range(name: &str, text: &str) -> Result<Vec<i64>, Failure> {
    let bad = || input("invalid_range", format!("{name}: cannot parse range `{text}`"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            (
                a.trim().parse::<i64>().map_err(|_| bad())?,
                b.trim().parse::<i64>().map_err(|_| bad())?,
            )
        }
        None => {
            let v = text.trim().parse::<i64>().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(input("invalid_range", format!("{name}: empty range `{text}`")));
    }
    if hi - lo > 1_000_000 {
        return Err(input("invalid_range", format!("{name}: range `{text}` is too large")));
    }
    Ok((lo..=hi).collect())
}

fn positive(name: &str, vals: &[i64], min: i64) -> Result<(), Failure> {
    if vals[0] < min {
        return Err(input("invalid_range", format!("{name} must be at least {min}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct BergeRow {
    m: i64,
    n: u64,
    sign: i64,
    p: i64,
    q: i64,
    r: i64,
    s: i64,
    primitive_h1: bool,
    primitive_h2: bool,
    doubly_primitive: bool,
    chi_q: i64,
    b1_lower: i64,
}

#[derive(Serialize)]
struct DeanRow {
    l: Option<i64>,
    m: i64,
    n: u64,
    sign: i64,
    p: i64,
    q: i64,
    r: i64,
    s: i64,
    r_identity: bool,
    range_ok: bool,
    primitive_h1: bool,
    primitive_h2: bool,
    tunnel_one: bool,
    chi_q: i64,
    b1_lower: i64,
}

fn emit_rows<T: Serialize>(rows: &[T], format: Format) -> Result<String, Failure> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| Failure::Refused(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Refused(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is ascii"))
        }
        Format::Json => Ok(canonical(&rows)),
        Format::Text => {
            let mut out = String::new();
            for r in rows {
                let v = serde_json::to_value(r).expect("row serializes");
                let cells: Vec<String> = v.as_object().unwrap().iter().map(|(k, v)| format!("{k}={v}")).collect();
                out += &cells.join(" ");
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn cmd_enumerate(family: Family, format: Format, bound: u64) -> Result<Output, Failure> {
    let check_sign = |s: i64| {
        if s.abs() == 1 {
            Ok(())
        } else {
            Err(input("invalid_input", format!("sign must be 1 or -1, got {s}")))
        }
    };
    let body = match family {
        Family::Berge { m, n, sign } => {
            check_sign(sign)?;
            let (ms, ns) = (parse_range("m", &m)?, parse_range("n", &n)?);
            positive("m", &ms, 2)?;
            positive("n", &ns, 1)?;
            let grid: Vec<(i64, i64)> = ms.iter().flat_map(|&m| ns.iter().map(move |&n| (m, n))).collect();
            let mut rows = grid
                .par_iter()
                .map(|&(m, n)| {
                    let (k, rec) = berge_family(m, n as u64, sign)?;
                    Ok(BergeRow {
                        m,
                        n: rec.n,
                        sign,
                        p: k.p(),
                        q: k.q(),
                        r: k.r(),
                        s: k.s(),
                        primitive_h1: rec.primitive_h1,
                        primitive_h2: rec.primitive_h2,
                        doubly_primitive: rec.doubly_primitive,
                        chi_q: rec.chi_q,
                        b1_lower: rec.b1_lower,
                    })
                })
                .collect::<Result<Vec<_>, FamilyError>>()?;
            rows.sort_by_key(|r| (r.m, r.n));
            emit_rows(&rows, format)?
        }
        Family::Dean1 { m, n, sign } => dean_rows(DeanKind::One, vec![0], &m, &n, sign, format, bound, check_sign)?,
        Family::Dean2 { l, m, n, sign } => {
            let ls = parse_range("l", &l)?;
            positive("l", &ls, 2)?;
            dean_rows(DeanKind::Two, ls, &m, &n, sign, format, bound, check_sign)?
        }
    };
    Ok(Output { body, ok: true })
}

#[allow(clippy::too_many_arguments)]
fn dean_rows(
    kind: DeanKind,
    ls: Vec<i64>,
    m: &str,
    n: &str,
    sign: i64,
    format: Format,
    bound: u64,
    check_sign: impl Fn(i64) -> Result<(), Failure>,
) -> Result<String, Failure> {
    check_sign(sign)?;
    let (ms, ns) = (parse_range("m", m)?, parse_range("n", n)?);
    positive("m", &ms, 2)?;
    positive("n", &ns, 2)?;
    let mut grid = Vec::new();
    for &l in &ls {
        for &m in &ms {
            for &n in &ns {
                grid.push((l, m, n));
            }
        }
    }
    let mut rows = grid
        .par_iter()
        .map(|&(l, m, n)| {
            let l_opt = (kind == DeanKind::Two).then_some(l);
            let (k, rec) = dean_family(kind, l_opt, m, n as u64, sign, bound)?;
            Ok(DeanRow {
                l: rec.l,
                m,
                n: rec.n,
                sign,
                p: k.p(),
                q: k.q(),
                r: k.r(),
                s: k.s(),
                r_identity: rec.r_identity,
                range_ok: rec.range_ok,
                primitive_h1: rec.primitive_h1,
                primitive_h2: rec.primitive_h2,
                tunnel_one: rec.tunnel_one,
                chi_q: rec.chi_q,
                b1_lower: rec.b1_lower,
            })
        })
        .collect::<Result<Vec<_>, FamilyError>>()?;
    rows.sort_by_key(|r| (r.l, r.m, r.n));
    emit_rows(&rows, format)
}

fn corrupted_alexander(b: &BraidWord) -> Result<LaurentPoly, InvariantError> {
    let raw = burau_characteristic(b)?;
    raw.normalize_symmetric()
        .map_err(|e| InvariantError::Internal(e.to_string()))
}

fn cmd_oracle(args: OracleArgs, format: Format, cap: usize) -> Result<Output, Failure> {
    no_csv(format)?;
    if args.max_pq < 2 || args.max_f < 0 {
        return Err(input("invalid_input", "need --max-pq >= 2 and --max-f >= 0"));
    }
    let alex: fn(&BraidWord) -> Result<LaurentPoly, InvariantError> = if args.corrupt_burau {
        corrupted_alexander
    } else {
        alexander
    };
    let mut suites: Vec<SuiteReport> = Vec::new();
    if matches!(args.scope, Scope::Torus | Scope::All) {
        suites.push(torus_suite(args.max_pq, args.max_f, alex));
    }
    if matches!(args.scope, Scope::Symmetry | Scope::All) {
        suites.push(symmetry_suite(args.count, args.max_crossings, args.seed, alex));
    }
    if args.scope == Scope::All {
        suites.push(jones_suite(
            args.count,
            args.max_crossings.min(cap as u128),
            args.seed,
            cap,
        ));
    }
    let ok = suites.iter().all(SuiteReport::passed);
    let body = match format {
        Format::Text => {
            let mut s = String::new();
            for r in &suites {
                let verdict = if r.passed() { "pass" } else { "FAIL" };
                s += &format!("{:<9} {verdict} ({} checked)\n", r.name, r.checked);
                for f in &r.failures {
                    s += &format!(
                        "  T({}, {}, {}, {}): {}\n",
                        f.params[0], f.params[1], f.params[2], f.params[3], f.reason
                    );
                }
            }
            s
        }
        _ => canonical(&json!({
            "passed": ok,
            "suites": suites,
            "note": "Alexander agreement is consistent with, not proof of, torus knot type",
        })),
    };
    Ok(Output { body, ok })
}

fn cmd_validate(file: &PathBuf, format: Format) -> Result<Output, Failure> {
    no_csv(format)?;
    let text = fs::read_to_string(file).map_err(|e| input("unreadable", format!("{}: {e}", file.display())))?;
    let cert: GapCertificate = serde_json::from_str(&text).map_err(|e| input("malformed_certificate", e))?;
    let (ok, doc) = match validate_certificate(&cert) {
        Ok(()) => (true, json!({"valid": true})),
        Err(e) => (false, json!({"valid": false, "field": e.field, "detail": e.detail})),
    };
    let body = match format {
        Format::Text if ok => "valid\n".to_string(),
        Format::Text => format!(
            "invalid: field `{}`: {}\n",
            doc["field"].as_str().unwrap(),
            doc["detail"].as_str().unwrap()
        ),
        _ => canonical(&doc),
    };
    if !ok {
        eprintln!("validation failed at field `{}`", doc["field"].as_str().unwrap());
    }
    Ok(Output { body, ok })
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let default = if matches!(cli.command, Command::Enumerate(_)) {
        Format::Csv
    } else {
        Format::Json
    };
    let format = cli.format.unwrap_or(default);
    match cli.command {
        Command::Info(a) => cmd_info(knot(&a)?, format),
        Command::Braid(a) => cmd_braid(knot(&a)?, format),
        Command::Invariants(a) => cmd_invariants(knot(&a)?, format, cli.jones_cap),
        Command::CertifyGaps { gap, a, b, c, d, e, f } => {
            cmd_certify(gap, [a, b], [c, d, e, f], format, cli.search_bound)
        }
        Command::Enumerate(fam) => cmd_enumerate(fam, format, cli.search_bound),
        Command::Oracle(args) => cmd_oracle(args, format, cli.jones_cap),
        Command::Validate { file } => cmd_validate(&file, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli) {
        Ok(o) => {
            let written = match &out {
                Some(path) => fs::write(path, &o.body),
                None => io::stdout().write_all(o.body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("{}", json!({"error": "io", "reason": e.to_string()}));
                return ExitCode::from(2);
            }
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input { kind, reason }) => {
            eprintln!("{}", json!({"error": kind, "reason": reason}));
            ExitCode::from(2)
        }
        Err(Failure::Refused(reason)) => {
            eprintln!("{}", json!({"error": "refused", "reason": reason}));
            ExitCode::from(1)
        }
    }
}
