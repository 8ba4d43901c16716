//! Command-line front end for the `tpadic` binary.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::capacity::{all_bounds, bound_value, transfinite_diameter, BoundKind, BoundSpec, DiameterMethod};
use crate::heights::{discriminant_valuations, weil_height};
use crate::padic::PrecisionPolicy;
use crate::place::LocalFieldSpec;
use crate::poly::IntPolynomial;
use crate::search::{audit, report, run_search, RecordTable, ReportFormat, SearchConfig};
use crate::splitting::{splits_completely_with, SplittingError};

#[derive(Debug, Parser)]
#[command(name = "tpadic", about = "Totally p-adic algebraic numbers: splitting, heights, capacity bounds, search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a polynomial splits completely at each place; one JSON line per place.
    Check(CheckArgs),
    /// Weil height of the root of an irreducible polynomial, as JSON.
    Height(HeightArgs),
    /// Capacity bounds for a set of places.
    Bounds(BoundsArgs),
    /// Transfinite diameter d_n of the ring of integers at one place.
    Diameter(DiameterArgs),
    /// Exhaustive search for totally split algebraic integers of small height.
    Search(SearchArgs),
    /// Compare a record table against the bounds.
    Report(ReportArgs),
    /// Recheck every record in a table from scratch.
    Audit(AuditArgs),
}

#[derive(Debug, Args)]
struct PrecisionArgs {
    /// Cap on the p-adic working precision (overrides TPADIC_PRECISION_CAP).
    #[arg(long)]
    precision_cap: Option<u32>,
}

impl PrecisionArgs {
    fn policy(&self) -> PrecisionPolicy {
        self.precision_cap
            .map(PrecisionPolicy::with_cap)
            .unwrap_or_else(PrecisionPolicy::from_env)
    }
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Place `p[,f]`: the unramified extension of Q_p of degree f.
    #[arg(long = "place", required = true, value_parser = parse_unramified)]
    places: Vec<LocalFieldSpec>,
    /// Coefficients, constant term first, e.g. `-17,0,1`.
    #[arg(allow_hyphen_values = true)]
    coeffs: String,
    #[command(flatten)]
    precision: PrecisionArgs,
}

#[derive(Debug, Args)]
struct HeightArgs {
    /// Coefficients, constant term first.
    #[arg(allow_hyphen_values = true)]
    coeffs: String,
    /// Places `p[,e[,f[,q0[,N]]]]` for the per-place discriminant table.
    #[arg(long = "places", alias = "place", value_parser = parse_place)]
    places: Vec<LocalFieldSpec>,
    /// Also display the height in base-2 logarithms.
    #[arg(long, conflicts_with = "log10")]
    log2: bool,
    /// Also display the height in base-10 logarithms.
    #[arg(long)]
    log10: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    All,
    LowerIntegers,
    Upper,
    BzLowerAll,
    BzUpper,
    Conjecture,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Place `p[,e[,f[,q0[,N]]]]`; repeat for several places.
    #[arg(long = "place", required = true, value_parser = parse_place)]
    places: Vec<LocalFieldSpec>,
    #[arg(long, value_enum, default_value = "all")]
    kind: KindArg,
    /// JSON lines output.
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Aligned text table (the default).
    #[arg(long)]
    table: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Formula,
    BruteForce,
}

#[derive(Debug, Args)]
struct DiameterArgs {
    #[arg(long, value_parser = parse_place)]
    place: LocalFieldSpec,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "formula")]
    method: MethodArg,
    /// Residue depth for the brute-force method.
    #[arg(long, default_value_t = 3)]
    depth: u32,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Place `p[,f]`; repeat for several places.
    #[arg(long = "place", required = true, value_parser = parse_unramified)]
    places: Vec<LocalFieldSpec>,
    /// Degree range `a..b` (inclusive) or a single degree.
    #[arg(long, value_parser = parse_degrees)]
    degrees: (usize, usize),
    #[arg(long)]
    coeff_bound: i64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    records: PathBuf,
    #[command(flatten)]
    precision: PrecisionArgs,
    /// Stop after this many chunks (simulates an interruption).
    #[arg(long, hide = true)]
    stop_after_chunks: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
    Plot,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long)]
    records: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AuditArgs {
    #[arg(long)]
    records: PathBuf,
}

fn parse_place(s: &str) -> Result<LocalFieldSpec, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_unramified(s: &str) -> Result<LocalFieldSpec, String> {
    LocalFieldSpec::parse_unramified(s).map_err(|e| format!("{e}"))
}

fn parse_degrees(s: &str) -> Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad degree range {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => Ok((num(a)?, num(b.trim_start_matches('='))?)),
        None => num(s).map(|d| (d, d)),
    }
}

fn parse_poly(s: &str) -> Result<IntPolynomial, String> {
    s.parse().map_err(|e| format!("{e}"))
}

struct Failure(i32, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(1, e.to_string())
    }
}

/// Runs the CLI on `args` (program name first), returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Check(a) => check(a, out, err),
        Command::Height(a) => height(a, out),
        Command::Bounds(a) => bounds(a, out),
        Command::Diameter(a) => diameter(a, out),
        Command::Search(a) => search(a, out, err),
        Command::Report(a) => report_cmd(a, out),
        Command::Audit(a) => audit_cmd(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn check(a: CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let f = parse_poly(&a.coeffs).map_err(|m| Failure(1, m))?;
    let policy = a.precision.policy();
    let mut undecided = 0;
    for pl in &a.places {
        match splits_completely_with(&f, pl, policy) {
            Ok(r) => writeln!(out, "{}", r.to_json())?,
            Err(SplittingError::Undecided { place, precision }) => {
                undecided += 1;
                writeln!(out, "{}", json!({"place": pl.to_json(), "undecided": true, "precision_cap": precision}))?;
                writeln!(err, "undecided at {place} up to precision {precision}")?;
            }
            Err(e) => return Err(e.into()),
        }
    }
    if undecided > 0 {
        writeln!(err, "{undecided} undecided splitting decision(s)")?;
        return Ok(2);
    }
    Ok(0)
}

fn height(a: HeightArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let f = parse_poly(&a.coeffs).map_err(|m| Failure(1, m))?;
    let rep = weil_height(&f)?;
    let mut v = rep.to_json();
    let units = if a.log2 {
        Some(("log2", std::f64::consts::LN_2))
    } else if a.log10 {
        Some(("log10", std::f64::consts::LN_10))
    } else {
        None
    };
    if let Some((name, scale)) = units {
        v["display"] = json!({
            "units": name,
            "h": format!("{:.12}", rep.h / scale),
            "error_radius": format!("{:.3e}", rep.error_radius / scale),
        });
    }
    if !a.places.is_empty() {
        let monic = f.primitive_part();
        let table = discriminant_valuations(&monic, &a.places)?;
        v["discriminant_table"] = Value::Array(table.iter().map(|t| t.to_json()).collect());
    }
    writeln!(out, "{v}")?;
    Ok(0)
}

fn bounds(a: BoundsArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let values = match a.kind {
        KindArg::All => all_bounds(&a.places),
        k => {
            let kind = match k {
                KindArg::LowerIntegers => BoundKind::LowerIntegers,
                KindArg::Upper => BoundKind::Upper,
                KindArg::BzLowerAll => BoundKind::BzLowerAll,
                KindArg::BzUpper => BoundKind::BzUpper,
                _ => BoundKind::Conjecture,
            };
            vec![bound_value(&BoundSpec { places: a.places.clone(), kind })?]
        }
    };
    if a.json {
        for b in &values {
            writeln!(out, "{}", b.to_json())?;
        }
    } else {
        writeln!(out, "{:<16} {:>14}  exact", "kind", "value")?;
        for b in &values {
            writeln!(out, "{:<16} {:>14.10}  {}", b.kind.name(), b.value(), b.exact)?;
        }
    }
    Ok(0)
}

fn diameter(a: DiameterArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let method = match a.method {
        MethodArg::Formula => DiameterMethod::EquidistributionFormula,
        MethodArg::BruteForce => DiameterMethod::BruteForce { depth: a.depth },
    };
    let r = transfinite_diameter(&a.place, a.n, method)?;
    writeln!(out, "{}", r.to_json())?;
    Ok(0)
}

fn search(a: SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let mut cfg = SearchConfig::new(a.places, a.degrees, a.coeff_bound, a.records);
    cfg.jobs = a.jobs;
    cfg.policy = a.precision.policy();
    cfg.stop_after_chunks = a.stop_after_chunks;
    let outcome = run_search(&cfg)?;
    let s = &outcome.stats;
    writeln!(
        out,
        "{}",
        json!({
            "records": cfg.records.display().to_string(),
            "complete": outcome.table.header.complete,
            "interrupted": outcome.interrupted,
            "chunks_computed": outcome.chunks_computed,
            "enumerated": s.enumerated,
            "residue_pass": s.residue_pass,
            "split": s.split,
            "irreducible": s.irreducible,
            "undecided": outcome.undecided.len(),
            "violations": outcome.violations.len(),
            "records_found": outcome.table.records.len(),
        })
    )?;
    for v in &outcome.violations {
        writeln!(err, "lower-bound assertion failed: {v}")?;
    }
    if !outcome.undecided.is_empty() {
        writeln!(err, "{} undecided splitting decision(s)", outcome.undecided.len())?;
    }
    Ok(outcome.exit_code())
}

fn report_cmd(a: ReportArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let table = RecordTable::load(&a.records)?;
    let format = match a.format {
        FormatArg::Json => ReportFormat::Json,
        FormatArg::Csv => ReportFormat::Csv,
        FormatArg::Text => ReportFormat::Text,
        FormatArg::Plot => ReportFormat::Plot,
    };
    let text = report(&table, format)?;
    match a.output {
        Some(path) => std::fs::write(&path, text).map_err(|e| Failure(1, format!("{}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn audit_cmd(a: AuditArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let rep = audit(&a.records)?;
    writeln!(out, "{}", json!({"checked": rep.checked, "failures": rep.failures.len(), "ok": rep.ok()}))?;
    for f in &rep.failures {
        writeln!(err, "audit: {f}")?;
    }
    Ok(if rep.ok() { 0 } else { 3 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("tpadic").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn check_emits_one_line_per_place() {
        let (code, out, _) = run_capture(&["check", "--place", "2", "--place", "3,2", "-17,0,1"]);
        assert_eq!(code, 0);
        let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0]["splits"], true);
        assert_eq!(lines[1]["splits"], true);
    }

    #[test]
    fn check_reports_undecided_with_exit_code() {
        // roots 1 and 1 + 2^40 are not separated below precision 40
        let c = format!("{},{},1", 1i64 + (1 << 40), -(2 + (1i64 << 40)));
        let (code, _, err) = run_capture(&["check", "--place", "2", "--precision-cap", "16", &c]);
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn height_and_units() {
        let (code, out, _) = run_capture(&["height", "--log2", "-2,1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert!(v["h"].as_str().unwrap().starts_with("0.69314718056"));
        assert!(v["display"]["h"].as_str().unwrap().starts_with("1.000000000000"));
        let (_, out, _) = run_capture(&["height", "--places", "2", "-17,0,1"]);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["discriminant_table"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn bounds_table_and_json() {
        let (code, out, _) = run_capture(&["bounds", "--place", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("0.3465735903") && out.contains("0.6931471806") && out.contains("0.1155245301"));
        let (_, out, _) = run_capture(&["bounds", "--place", "2", "--place", "3", "--kind", "bz-upper", "--json"]);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["value"], "1.2424533249");
        let (code, _, _) = run_capture(&["bounds", "--place", "2,1,2", "--kind", "bz-upper"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn diameter_methods_agree() {
        let (_, a, _) = run_capture(&["diameter", "--place", "3", "--n", "5"]);
        let (_, b, _) = run_capture(&["diameter", "--place", "3", "--n", "5", "--method", "brute-force", "--depth", "2"]);
        let a: Value = serde_json::from_str(a.trim()).unwrap();
        let b: Value = serde_json::from_str(b.trim()).unwrap();
        assert_eq!(a["coefficient"], b["coefficient"]);
    }

    #[test]
    fn search_report_audit_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let rec = dir.path().join("r.jsonl");
        let rec = rec.to_str().unwrap();
        let (code, out, err) =
            run_capture(&["search", "--place", "2", "--degrees", "2..3", "--coeff-bound", "3", "--jobs", "2", "--records", rec]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("\"complete\":true"));
        let (code, text, _) = run_capture(&["report", "--records", rec, "--format", "text"]);
        assert_eq!(code, 0);
        assert!(text.contains("minimum over the enumerated box"));
        let (code, out, _) = run_capture(&["audit", "--records", rec]);
        assert_eq!(code, 0);
        assert!(out.contains("\"ok\":true"));
    }

    #[test]
    fn degree_ranges() {
        assert_eq!(parse_degrees("2..6"), Ok((2, 6)));
        assert_eq!(parse_degrees("4"), Ok((4, 4)));
        assert!(parse_degrees("a..3").is_err());
    }
}
