//! The `dicksonlab` command line.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 when a
//! mathematical check fails. Data goes to stdout (or `--out`), diagnostics to
//! stderr.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::dickson::{
    eval_direct, eval_e1_functional, eval_e1_recursive, eval_e1_via_f, genfun_coeffs, reduce_index,
    EvalRequest, DIRECT_LIMIT, RECURSIVE_LIMIT,
};
use crate::error::Error;
use crate::ff::{FieldElement, FieldOptions, FieldSpec};
use crate::filters::{filter_report, FilterReport};
use crate::pp::{
    build_v, check_two_to_one_with, exhaustive_from_images, power_sum_from_images, E1Images,
    PpVerdict,
};
use crate::sums::{sum_table_bruteforce, sum_table_recurrence};
use crate::verify::{run_suites, Status};

/// Default cap on `q` for `sums`.
pub const SUMS_GUARD: u64 = 64;
/// Default cap on `q` for `survey` and `verify`.
pub const SURVEY_GUARD: u64 = 128;
/// `genfun` evaluation builds a series of length `n + 1`.
const GENFUN_LIMIT: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "dicksonlab",
    version,
    about = "Reversed Dickson polynomials E_n(a, x) over finite fields"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: u64,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Monic modulus coefficients, lowest first: "c0,c1,...,1".
    #[arg(long)]
    modulus: Option<String>,
    /// Lift the size guards.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write data here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum EvalMethod {
    All,
    Direct,
    Recursive,
    Functional,
    ViaF,
    Genfun,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PpMethodArg {
    All,
    Exhaustive,
    PowerSum,
    TwoToOne,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Field parameters as JSON.
    FieldInfo {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Evaluate E_n(a, x).
    Eval {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u64,
        /// Element as "c0.c1...".
        #[arg(long)]
        x: String,
        /// Parameter a; methods other than `direct` need a = 1.
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, value_enum, default_value = "all")]
        method: EvalMethod,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether x -> E_n(1, x) permutes F_q.
    Pp {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "all")]
        method: PpMethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Permutation verdicts and filter outcomes for n = 0..=n_max.
    Survey {
        #[command(flatten)]
        field: FieldArgs,
        /// Defaults to q^2 - 1.
        #[arg(long)]
        n_max: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Necessary-condition filters for n = 1..=n_max.
    Filters {
        #[command(flatten)]
        field: FieldArgs,
        /// Defaults to q^2 - 1.
        #[arg(long)]
        n_max: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sums of E_n(1, a) over F_q, by recurrence and by brute force.
    Sums {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the self-check suites.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        /// Run a single suite.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o: {e}"))
    }
}

type CliResult<T = ()> = Result<T, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(stderr, "check failed: {msg}");
            2
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    match command {
        Command::FieldInfo { field } => field_info(&field, stdout),
        Command::Eval {
            field,
            n,
            x,
            a,
            method,
            out,
        } => eval(&field, n, &x, &a, method, out, stdout),
        Command::Pp {
            field,
            n,
            method,
            out,
        } => pp(&field, n, method, out, stdout),
        Command::Survey { field, n_max, out } => survey(&field, n_max, &out, stdout),
        Command::Filters { field, n_max, out } => filters(&field, n_max, &out, stdout),
        Command::Sums { field, out } => sums(&field, &out, stdout),
        Command::Verify { field, suite, out } => {
            verify(&field, suite.as_deref(), out, stdout, stderr)
        }
    }
}

fn build_field(args: &FieldArgs) -> CliResult<FieldSpec> {
    let modulus = match &args.modulus {
        None => None,
        Some(text) => Some(
            text.split(',')
                .map(|c| c.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::Usage(format!("cannot parse modulus {text:?}")))?,
        ),
    };
    let opts = FieldOptions {
        modulus,
        force: args.force,
    };
    Ok(FieldSpec::with_options(args.p, args.e, opts)?)
}

fn guard(field: &FieldSpec, args: &FieldArgs, limit: u64, what: &str) -> CliResult {
    if field.order() > limit && !args.force {
        return Err(Failure::Usage(format!(
            "q = {} exceeds the {what} limit {limit}; pass --force to run anyway",
            field.order()
        )));
    }
    Ok(())
}

fn parse_element<'f>(field: &'f FieldSpec, text: &str, name: &str) -> CliResult<FieldElement<'f>> {
    field
        .parse_element(text)
        .map_err(|e| Failure::Usage(format!("--{name}: {e}")))
}

/// Runs `body` against stdout or the `--out` file.
fn emit(
    out: Option<&PathBuf>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> CliResult,
) -> CliResult {
    match out {
        Some(path) => {
            let mut file = io::BufWriter::new(File::create(path)?);
            body(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

fn write_json(w: &mut dyn Write, value: &serde_json::Value) -> CliResult {
    serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

fn write_rows<R: Serialize>(w: &mut dyn Write, format: Format, rows: &[R]) -> CliResult {
    match format {
        Format::Json => write_json(
            w,
            &serde_json::to_value(rows).map_err(|e| Failure::Usage(e.to_string()))?,
        ),
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            for row in rows {
                csv.serialize(row)
                    .map_err(|e| Failure::Usage(e.to_string()))?;
            }
            csv.flush()?;
            Ok(())
        }
    }
}

fn field_info(args: &FieldArgs, stdout: &mut dyn Write) -> CliResult {
    let field = build_field(args)?;
    let odd = field.is_odd();
    let doc = json!({
        "p": field.characteristic(),
        "e": field.degree(),
        "q": field.order(),
        "modulus": field.modulus(),
        "nu": field.quad_nonresidue().map(|v| v.to_string()),
        // |V| = q; V lives in F_{q^2} = F_q(sqrt(nu)) only for odd p
        "v_size": if odd { Some(field.order()) } else { None },
    });
    write_json(stdout, &doc)
}

fn eval(
    args: &FieldArgs,
    n: u64,
    x: &str,
    a: &str,
    method: EvalMethod,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> CliResult {
    let field = build_field(args)?;
    let x = parse_element(&field, x, "x")?;
    let a = parse_element(&field, a, "a")?;
    let odd = field.is_odd();
    let methods: Vec<EvalMethod> = match method {
        EvalMethod::All if a.is_one() => [
            (EvalMethod::Direct, n <= DIRECT_LIMIT),
            (EvalMethod::Recursive, n <= RECURSIVE_LIMIT),
            (EvalMethod::Functional, odd),
            (EvalMethod::ViaF, odd && n < DIRECT_LIMIT),
            (EvalMethod::Genfun, n <= GENFUN_LIMIT),
        ]
        .into_iter()
        .filter_map(|(m, ok)| ok.then_some(m))
        .collect(),
        EvalMethod::All | EvalMethod::Direct => vec![EvalMethod::Direct],
        m if !a.is_one() => {
            return Err(Failure::Usage(format!("method {m:?} needs a = 1")));
        }
        m => vec![m],
    };
    let mut values = serde_json::Map::new();
    let mut first: Option<FieldElement<'_>> = None;
    let mut agree = true;
    for m in methods {
        let v = match m {
            EvalMethod::Direct => eval_direct(&EvalRequest::reversed(n, a, x))?,
            EvalMethod::Recursive => eval_e1_recursive(n, x)?,
            EvalMethod::Functional => eval_e1_functional(n, x)?,
            EvalMethod::ViaF => eval_e1_via_f(n, x)?,
            EvalMethod::Genfun => {
                if n > GENFUN_LIMIT {
                    return Err(Error::IndexTooLarge {
                        n,
                        limit: GENFUN_LIMIT,
                        method: "genfun",
                    }
                    .into());
                }
                genfun_coeffs(x, n as usize)[n as usize]
            }
            EvalMethod::All => unreachable!("expanded above"),
        };
        agree &= first.is_none_or(|f| f == v);
        first.get_or_insert(v);
        let key = serde_json::to_value(m).expect("enum serializes");
        values.insert(
            key.as_str().expect("string").to_string(),
            json!(v.to_string()),
        );
    }
    let doc = json!({
        "q": field.order(),
        "n": n,
        "a": a.to_string(),
        "x": x.to_string(),
        "value": first.map(|v| v.to_string()),
        "methods": values,
        "agree": agree,
    });
    emit(out.as_ref(), stdout, |w| write_json(w, &doc))?;
    if agree {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "evaluation methods disagree for n={n}, x={x}"
        )))
    }
}

fn verdict_json(v: &PpVerdict<'_>) -> serde_json::Value {
    json!({
        "is_pp": v.is_pp,
        "witness": v.witness.map(|w| w.to_string()),
    })
}

fn pp(
    args: &FieldArgs,
    n: u64,
    method: PpMethodArg,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> CliResult {
    let field = build_field(args)?;
    guard(&field, args, SURVEY_GUARD, "survey")?;
    let images: Vec<_> = field
        .elements()
        .map(|x| {
            if n <= RECURSIVE_LIMIT {
                eval_e1_recursive(n, x)
            } else {
                eval_e1_functional(n, x)
            }
        })
        .collect::<Result<_, _>>()?;
    let want = |m: PpMethodArg| method == PpMethodArg::All || method == m;
    let mut verdicts = serde_json::Map::new();
    let mut seen = Vec::new();
    if want(PpMethodArg::Exhaustive) {
        let v = exhaustive_from_images(&field, &images);
        seen.push(v.is_pp);
        verdicts.insert("exhaustive".into(), verdict_json(&v));
    }
    if want(PpMethodArg::PowerSum) {
        let v = power_sum_from_images(&field, &images);
        seen.push(v.is_pp);
        verdicts.insert("power_sum".into(), verdict_json(&v));
    }
    if want(PpMethodArg::TwoToOne) {
        if field.is_odd() {
            let v = check_two_to_one_with(n, &field, &build_v(&field)?)?;
            seen.push(v.is_pp);
            verdicts.insert("two_to_one".into(), verdict_json(&v));
        } else if method == PpMethodArg::TwoToOne {
            return Err(Error::CharacteristicTwo("the 2-to-1 criterion").into());
        }
    }
    let agree = seen.windows(2).all(|w| w[0] == w[1]);
    let doc = json!({
        "q": field.order(),
        "n": n,
        "is_pp": seen[0],
        "verdicts": verdicts,
        "agree": agree,
    });
    emit(out.as_ref(), stdout, |w| write_json(w, &doc))?;
    if agree {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "permutation criteria disagree for n={n}"
        )))
    }
}

#[derive(Serialize)]
struct FilterRow {
    n: u64,
    period6_applicable: bool,
    period6_passed: bool,
    odd_index_applicable: bool,
    odd_index_passed: bool,
    gcd_q2_applicable: bool,
    gcd_q2_passed: bool,
    filter_overall: &'static str,
}

impl From<&FilterReport> for FilterRow {
    fn from(r: &FilterReport) -> Self {
        FilterRow {
            n: r.n,
            period6_applicable: r.period6.applicable,
            period6_passed: r.period6.applicable && r.period6.passed,
            odd_index_applicable: r.odd_index.applicable,
            odd_index_passed: r.odd_index.applicable && r.odd_index.passed,
            gcd_q2_applicable: r.gcd_q2.applicable,
            gcd_q2_passed: r.gcd_q2.applicable && r.gcd_q2.passed,
            filter_overall: if r.overall() { "pass" } else { "fail" },
        }
    }
}

#[derive(Serialize)]
struct SurveyRow {
    n: u64,
    reduced_n: u64,
    is_pp: bool,
    agree_power_sum: bool,
    agree_two_to_one: Option<bool>,
    // csv cannot serialize a flattened struct, so the filter columns repeat
    period6_applicable: bool,
    period6_passed: bool,
    odd_index_applicable: bool,
    odd_index_passed: bool,
    gcd_q2_applicable: bool,
    gcd_q2_passed: bool,
    filter_overall: &'static str,
}

fn default_n_max(field: &FieldSpec) -> u64 {
    field.order() * field.order() - 1
}

fn survey(
    args: &FieldArgs,
    n_max: Option<u64>,
    out: &OutArgs,
    stdout: &mut dyn Write,
) -> CliResult {
    let field = build_field(args)?;
    guard(&field, args, SURVEY_GUARD, "survey")?;
    let (q, p) = (field.order(), field.characteristic());
    let n_max = n_max.unwrap_or_else(|| default_n_max(&field));
    let v = if field.is_odd() {
        Some(build_v(&field)?)
    } else {
        None
    };
    let mut imgs = E1Images::new(&field);
    let mut rows = Vec::new();
    let mut unsound = Vec::new();
    for n in 0..=n_max {
        let is_pp = exhaustive_from_images(&field, imgs.images()).is_pp;
        let power_sum = power_sum_from_images(&field, imgs.images()).is_pp;
        let two_to_one = match &v {
            Some(v) => Some(check_two_to_one_with(n, &field, v)?.is_pp),
            None => None,
        };
        let report = filter_report(n, q, p);
        if is_pp && !report.overall() {
            unsound.push(n);
        }
        let f = FilterRow::from(&report);
        rows.push(SurveyRow {
            n,
            reduced_n: reduce_index(n, q),
            is_pp,
            agree_power_sum: power_sum == is_pp,
            agree_two_to_one: two_to_one.map(|t| t == is_pp),
            period6_applicable: f.period6_applicable,
            period6_passed: f.period6_passed,
            odd_index_applicable: f.odd_index_applicable,
            odd_index_passed: f.odd_index_passed,
            gcd_q2_applicable: f.gcd_q2_applicable,
            gcd_q2_passed: f.gcd_q2_passed,
            filter_overall: f.filter_overall,
        });
        imgs.advance();
    }
    emit(out.out.as_ref(), stdout, |w| {
        write_rows(w, out.format, &rows)
    })?;
    let disagree: Vec<u64> = rows
        .iter()
        .filter(|r| !r.agree_power_sum || r.agree_two_to_one == Some(false))
        .map(|r| r.n)
        .collect();
    if !unsound.is_empty() {
        return Err(Failure::Check(format!(
            "permutation exponents rejected by a filter: {unsound:?}"
        )));
    }
    if !disagree.is_empty() {
        return Err(Failure::Check(format!(
            "permutation criteria disagree at n = {disagree:?}"
        )));
    }
    Ok(())
}

fn filters(
    args: &FieldArgs,
    n_max: Option<u64>,
    out: &OutArgs,
    stdout: &mut dyn Write,
) -> CliResult {
    let field = build_field(args)?;
    let n_max = n_max.unwrap_or_else(|| default_n_max(&field));
    let rows: Vec<FilterRow> = (1..=n_max)
        .map(|n| FilterRow::from(&filter_report(n, field.order(), field.characteristic())))
        .collect();
    emit(out.out.as_ref(), stdout, |w| {
        write_rows(w, out.format, &rows)
    })
}

#[derive(Serialize)]
struct SumRow {
    n: u64,
    #[serde(rename = "S_recurrence")]
    recurrence: String,
    #[serde(rename = "S_brute")]
    brute: String,
    #[serde(rename = "match")]
    matches: bool,
}

fn sums(args: &FieldArgs, out: &OutArgs, stdout: &mut dyn Write) -> CliResult {
    let field = build_field(args)?;
    if !field.is_odd() {
        return Err(Failure::Usage(
            "the recurrence for the sum table divides by 2 and needs odd p".into(),
        ));
    }
    guard(&field, args, SUMS_GUARD, "sums")?;
    let rec = sum_table_recurrence(&field)?;
    let brute = sum_table_bruteforce(&field);
    let rows: Vec<SumRow> = rec
        .values
        .iter()
        .zip(&brute.values)
        .enumerate()
        .map(|(i, (r, b))| SumRow {
            n: i as u64 + 1,
            recurrence: r.to_string(),
            brute: b.to_string(),
            matches: r == b,
        })
        .collect();
    emit(out.out.as_ref(), stdout, |w| {
        write_rows(w, out.format, &rows)
    })?;
    let bad: Vec<u64> = rows.iter().filter(|r| !r.matches).map(|r| r.n).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("sum tables differ at n = {bad:?}")))
    }
}

fn verify(
    args: &FieldArgs,
    suite: Option<&str>,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult {
    let field = build_field(args)?;
    guard(&field, args, SURVEY_GUARD, "verify")?;
    let results = run_suites(&field, suite)?;
    for r in &results {
        let tag = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        match &r.detail {
            Some(d) => writeln!(stderr, "{tag} {:<17} {:>8} checked  {d}", r.name, r.checked)?,
            None => writeln!(stderr, "{tag} {:<17} {:>8} checked", r.name, r.checked)?,
        }
    }
    let passed = results.iter().all(|r| r.passed());
    let doc = json!({
        "p": field.characteristic(),
        "e": field.degree(),
        "q": field.order(),
        "passed": passed,
        "suites": results,
    });
    emit(out.as_ref(), stdout, |w| write_json(w, &doc))?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Check("one or more suites failed".into()))
    }
}
