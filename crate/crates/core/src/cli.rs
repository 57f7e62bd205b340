//! Command-line front end: compute one field, enumerate a discriminant
//! range, emit figure data, and run the verification suites.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad usage or input.

use std::ffi::OsString;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{verify_family_bounds, FamilyId, FamilyReport, FamilySpec};
use crate::fields::{canonicalize_biquadratic, classify_cyclic, enumerate_biquadratic, enumerate_cyclic, QuarticField, Signature};
use crate::measure::{theoretical_bounds, PrecisionContext};
use crate::rootsofunity::{reproduce_tables, TableRow};
use crate::search::{brute_force_min, min_mahler, search_box};

pub const SCHEMA_LINE: &str = concat!("# quartic-mahler v", env!("CARGO_PKG_VERSION"), " schema=1");

/// Fields processed between journal checkpoints.
pub const CHECKPOINT: usize = 10_000;

const WARN_DISC: u128 = 1_000_000;
const REL_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "quartic-mahler", version, about = "Minimal integral Mahler measure of Galois quartic fields")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Starting fixed-point precision for measure evaluation.
    #[arg(long, global = true, default_value_t = 128)]
    pub precision_bits: u32,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignatureArg {
    Real,
    Imaginary,
}

impl From<SignatureArg> for Signature {
    fn from(s: SignatureArg) -> Self {
        match s {
            SignatureArg::Real => Signature::TotallyReal,
            SignatureArg::Imaginary => Signature::TotallyImaginary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Cyclic,
    Biquadratic,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// M(O_K), the minimizing generator and the applicable bounds for one field.
    Compute(ComputeArgs),
    /// Every field up to a discriminant bound, with M(O_K).
    Enumerate(RangeArgs),
    /// CSV of D_K, M, M D^(-1/4), M D^(-1/6) and field parameters.
    FigureData(RangeArgs),
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ComputeArgs {
    /// Two radicands `d1,d2`, canonicalized.
    #[arg(long, allow_hyphen_values = true)]
    pub biquadratic: Option<String>,
    /// Cyclic parameters `A,B,C,D`.
    #[arg(long, allow_hyphen_values = true)]
    pub cyclic: Option<String>,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    /// Discriminant bound E.
    #[arg(long)]
    pub max_disc: u128,
    #[arg(long, value_enum)]
    pub signature: Option<SignatureArg>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Journal file; created if missing, resumed from if present.
    #[arg(long)]
    pub resume: Option<PathBuf>,
    /// Refuse bounds above this.
    #[arg(long, default_value_t = 20_000_000)]
    pub disc_cap: u128,
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// Proven lower and upper bounds against computed M(O_K).
    Bounds {
        #[arg(long, default_value_t = 100_000)]
        max_disc: u128,
        #[arg(long, value_enum)]
        signature: Option<SignatureArg>,
        #[arg(long, value_enum, default_value_t = Kind::All)]
        kind: Kind,
    },
    /// Family constants over a range of k.
    Families {
        /// Family id, e.g. IB-1 or RC-[3/10,1/2); all unconditional ones if absent.
        #[arg(long)]
        family: Option<String>,
        /// Exponent p/q for the general families.
        #[arg(long)]
        exponent: Option<String>,
        #[arg(long, default_value_t = 1)]
        kmin: u64,
        #[arg(long)]
        kmax: Option<u64>,
    },
    /// The two bespoke generator tables for fields with √-1 or √-3.
    Tables,
    /// Pruned search against the plain box scan.
    Oracle {
        #[arg(long, default_value_t = 10_000)]
        max_disc: u128,
    },
}

/// One field's result, as written to CSV, JSON and the journal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub kind: String,
    pub signature: String,
    pub params: Vec<i64>,
    pub disc: u128,
    pub m: f64,
    /// Quarter numerators of the minimizer.
    pub generator: [i64; 4],
    pub minimal_polynomial: String,
    pub lower_bound: f64,
    pub lower_name: String,
    pub upper_bound: f64,
    pub upper_name: String,
    pub bounds_ok: bool,
}

impl FieldRecord {
    pub fn compute(field: &QuarticField, ctx: &PrecisionContext) -> Result<Self> {
        let r = min_mahler(field, ctx)?;
        let b = theoretical_bounds(field);
        let best = b.best_lower();
        Ok(Self {
            kind: field.kind().into(),
            signature: field.signature().to_string(),
            params: field.params(),
            disc: field.disc(),
            m: r.m,
            generator: r.coords,
            minimal_polynomial: r.minimal_polynomial.to_string(),
            lower_bound: best.value,
            lower_name: best.name.into(),
            upper_bound: b.upper.value,
            upper_name: b.upper.name.into(),
            bounds_ok: b.admits(r.m, REL_TOL),
        })
    }

    fn d14(&self) -> f64 {
        self.m * (self.disc as f64).powf(-0.25)
    }

    fn d16(&self) -> f64 {
        self.m * (self.disc as f64).powf(-1.0 / 6.0)
    }
}

fn num(x: f64) -> String {
    format!("{x:.9}")
}

fn join(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_ints(s: &str, n: usize) -> Result<Vec<i64>> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Usage(format!("'{t}': {e}"))))
        .collect::<Result<_>>()?;
    if v.len() != n {
        return Err(Error::Usage(format!("expected {n} comma-separated integers, got '{s}'")));
    }
    Ok(v)
}

fn parse_field(args: &ComputeArgs) -> Result<QuarticField> {
    if let Some(s) = &args.biquadratic {
        let v = parse_ints(s, 2)?;
        return Ok(canonicalize_biquadratic(v[0], v[1])?.into());
    }
    let s = args.cyclic.as_deref().expect("clap enforces one of the two");
    let v = parse_ints(s, 4)?;
    Ok(classify_cyclic(v[0], v[1], v[2], v[3])?.into())
}

fn parse_exponent(s: &str) -> Result<(i64, i64)> {
    let (p, q) = s.split_once('/').ok_or_else(|| Error::Usage(format!("exponent '{s}' is not p/q")))?;
    let p = p.trim().parse().map_err(|_| Error::Usage(format!("bad numerator in '{s}'")))?;
    let q = q.trim().parse().map_err(|_| Error::Usage(format!("bad denominator in '{s}'")))?;
    Ok((p, q))
}

/// Fields for a range command, sorted by `(D_K, kind, parameters)`.
pub fn range_fields(max_disc: u128, kind: Kind, signature: Option<Signature>) -> Vec<QuarticField> {
    let sigs = match signature {
        Some(s) => vec![s],
        None => vec![Signature::TotallyReal, Signature::TotallyImaginary],
    };
    let mut out: Vec<QuarticField> = Vec::new();
    for s in sigs {
        if kind != Kind::Biquadratic {
            out.extend(enumerate_cyclic(max_disc, s).into_iter().map(QuarticField::from));
        }
        if kind != Kind::Cyclic {
            out.extend(enumerate_biquadratic(max_disc, s).into_iter().map(QuarticField::from));
        }
    }
    out.sort_by(|a, b| (a.disc(), a.kind(), a.params()).cmp(&(b.disc(), b.kind(), b.params())));
    out
}

/// Measure every field, checkpointing to `journal` every [`CHECKPOINT`]
/// fields and skipping whatever an existing journal already holds.
pub fn measure_fields(
    fields: &[QuarticField],
    ctx: &PrecisionContext,
    journal: Option<&Path>,
    key: &str,
) -> Result<Vec<FieldRecord>> {
    let header = format!("# quartic-mahler journal {key}");
    let mut done: Vec<FieldRecord> = Vec::new();
    let mut sink = None;
    if let Some(path) = journal {
        if path.exists() {
            let mut lines = BufReader::new(File::open(path).map_err(io_err)?).lines();
            let first = lines.next().transpose().map_err(io_err)?.unwrap_or_default();
            if first != header {
                return Err(Error::Usage(format!("journal {} belongs to another run: {first}", path.display())));
            }
            for line in lines {
                let line = line.map_err(io_err)?;
                if line.is_empty() {
                    continue;
                }
                let rec: FieldRecord =
                    serde_json::from_str(&line).map_err(|e| Error::Usage(format!("corrupt journal line: {e}")))?;
                let i = done.len();
                if fields.get(i).map(|f| f.params()) != Some(rec.params.clone()) {
                    return Err(Error::Usage(format!("journal entry {i} does not match the enumeration")));
                }
                done.push(rec);
            }
            sink = Some(OpenOptions::new().append(true).open(path).map_err(io_err)?);
        } else {
            let mut f = File::create(path).map_err(io_err)?;
            writeln!(f, "{header}").map_err(io_err)?;
            sink = Some(f);
        }
    }
    let start = done.len();
    for chunk in fields[start..].chunks(CHECKPOINT) {
        let recs: Vec<FieldRecord> = chunk.par_iter().map(|f| FieldRecord::compute(f, ctx)).collect::<Result<_>>()?;
        if let Some(f) = sink.as_mut() {
            for r in &recs {
                writeln!(f, "{}", serde_json::to_string(r).expect("record serializes")).map_err(io_err)?;
            }
            f.flush().map_err(io_err)?;
        }
        done.extend(recs);
    }
    Ok(done)
}

fn io_err(e: std::io::Error) -> Error {
    Error::Usage(format!("i/o: {e}"))
}

pub fn enumerate_csv(records: &[FieldRecord]) -> String {
    let mut s = format!("{SCHEMA_LINE}\n");
    s.push_str("kind,signature,disc,params,m,m_d14,m_d16,generator,minimal_polynomial,lower_bound,lower_name,upper_bound,upper_name,bounds_ok\n");
    for r in records {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.kind,
            r.signature,
            r.disc,
            join(&r.params),
            num(r.m),
            num(r.d14()),
            num(r.d16()),
            join(&r.generator),
            r.minimal_polynomial,
            num(r.lower_bound),
            r.lower_name,
            num(r.upper_bound),
            r.upper_name,
            r.bounds_ok
        ));
    }
    s
}

/// Figure columns; parameters spread over `a,b,c,d` (cyclic) or `r1,r2,r3`.
pub fn figure_csv(records: &[FieldRecord], kind: Kind) -> String {
    let params = if kind == Kind::Biquadratic { "r1,r2,r3" } else { "a,b,c,d" };
    let mut s = format!("{SCHEMA_LINE}\ndisc,m,m_d14,m_d16,{params}\n");
    for r in records {
        let p: Vec<String> = r.params.iter().map(|x| x.to_string()).collect();
        s.push_str(&format!("{},{},{},{},{}\n", r.disc, num(r.m), num(r.d14()), num(r.d16()), p.join(",")));
    }
    s
}

fn records_text(records: &[FieldRecord]) -> String {
    let mut s = format!("{:>10}  {:<11}  {:<9}  {:<22}  {:>14}  {:<6}\n", "D_K", "kind", "signature", "params", "M", "bounds");
    for r in records {
        s.push_str(&format!(
            "{:>10}  {:<11}  {:<9}  {:<22}  {:>14.6}  {:<6}\n",
            r.disc,
            r.kind,
            r.signature,
            join(&r.params),
            r.m,
            if r.bounds_ok { "ok" } else { "VIOL" }
        ));
    }
    s
}

/// What a command produced: text to emit and whether checks passed.
struct Outcome {
    body: String,
    passed: bool,
}

fn check_range(args: &RangeArgs, warnings: &mut Vec<String>) -> Result<()> {
    if args.max_disc > args.disc_cap {
        return Err(Error::Usage(format!("--max-disc {} exceeds the cap {}", args.max_disc, args.disc_cap)));
    }
    if args.max_disc > WARN_DISC {
        warnings.push(format!("warning: --max-disc {} is above 10^6; expect a long run", args.max_disc));
    }
    Ok(())
}

fn cmd_compute(args: &ComputeArgs, fmt: Format, ctx: &PrecisionContext) -> Result<Outcome> {
    let field = parse_field(args)?;
    let rec = FieldRecord::compute(&field, ctx)?;
    let generator = min_mahler(&field, ctx)?.generator;
    let body = match fmt {
        Format::Json => serde_json::to_string_pretty(&rec).expect("record serializes") + "\n",
        Format::Csv => enumerate_csv(std::slice::from_ref(&rec)),
        Format::Text => {
            let bounds = theoretical_bounds(&field);
            let mut s = format!(
                "field        {field}\nkind         {} ({})\nD_K          {}\nM(O_K)       {}\ngenerator    {generator}\nminimal poly {}\n",
                rec.kind,
                rec.signature,
                rec.disc,
                num(rec.m),
                rec.minimal_polynomial
            );
            for t in &bounds.lower_terms {
                let ok = rec.m >= t.value * (1.0 - REL_TOL);
                s.push_str(&format!("lower        {:<28} {:>16}  {}\n", t.name, num(t.value), if ok { "ok" } else { "VIOLATED" }));
            }
            let ok = rec.m <= bounds.upper.value * (1.0 + REL_TOL);
            s.push_str(&format!(
                "upper        {:<28} {:>16}  {}\n",
                bounds.upper.name,
                num(bounds.upper.value),
                if ok { "ok" } else { "VIOLATED" }
            ));
            s
        }
    };
    Ok(Outcome { body, passed: true })
}

fn range_key(cmd: &str, args: &RangeArgs, kind: Kind, sig: Option<Signature>) -> String {
    format!("{cmd} max_disc={} kind={kind:?} signature={sig:?}", args.max_disc)
}

fn cmd_enumerate(args: &RangeArgs, fmt: Format, ctx: &PrecisionContext, warnings: &mut Vec<String>) -> Result<Outcome> {
    check_range(args, warnings)?;
    let kind = args.kind.unwrap_or(Kind::All);
    let sig = args.signature.map(Signature::from);
    let fields = range_fields(args.max_disc, kind, sig);
    let recs = measure_fields(&fields, ctx, args.resume.as_deref(), &range_key("enumerate", args, kind, sig))?;
    let body = match fmt {
        Format::Csv => enumerate_csv(&recs),
        Format::Json => serde_json::to_string_pretty(&recs).expect("records serialize") + "\n",
        Format::Text => records_text(&recs),
    };
    Ok(Outcome { body, passed: true })
}

fn cmd_figure_data(args: &RangeArgs, fmt: Format, ctx: &PrecisionContext, warnings: &mut Vec<String>) -> Result<Outcome> {
    check_range(args, warnings)?;
    let kind = args.kind.unwrap_or(Kind::Cyclic);
    if kind == Kind::All {
        return Err(Error::Usage("figure-data needs --kind cyclic or biquadratic".into()));
    }
    let sig = Some(args.signature.map_or(Signature::TotallyReal, Signature::from));
    let fields = range_fields(args.max_disc, kind, sig);
    let recs = measure_fields(&fields, ctx, args.resume.as_deref(), &range_key("figure-data", args, kind, sig))?;
    let body = match fmt {
        Format::Json => serde_json::to_string_pretty(&recs).expect("records serialize") + "\n",
        Format::Csv | Format::Text => figure_csv(&recs, kind),
    };
    Ok(Outcome { body, passed: true })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_verify_bounds(
    max_disc: u128,
    signature: Option<SignatureArg>,
    kind: Kind,
    fmt: Format,
    ctx: &PrecisionContext,
) -> Result<Outcome> {
    let fields = range_fields(max_disc, kind, signature.map(Signature::from));
    let recs = measure_fields(&fields, ctx, None, "")?;
    let bad: Vec<&FieldRecord> = recs.iter().filter(|r| !r.bounds_ok).collect();
    let passed = bad.is_empty();
    let body = match fmt {
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "max_disc": max_disc,
            "fields": recs.len(),
            "violations": bad,
            "passed": passed,
        }))
        .expect("report serializes")
            + "\n",
        Format::Csv => enumerate_csv(&bad.into_iter().cloned().collect::<Vec<_>>()),
        Format::Text => {
            let mut s = format!("{} bounds: {} fields with D_K <= {max_disc}, {} violations\n", verdict(passed), recs.len(), bad.len());
            for r in bad {
                s.push_str(&format!(
                    "  {} {} D_K={} M={} lower {}={} upper {}={}\n",
                    r.kind,
                    join(&r.params),
                    r.disc,
                    num(r.m),
                    r.lower_name,
                    num(r.lower_bound),
                    r.upper_name,
                    num(r.upper_bound)
                ));
            }
            s
        }
    };
    Ok(Outcome { body, passed })
}

/// Default `k` range cap per family.
pub fn default_kmax(id: FamilyId) -> u64 {
    match id {
        FamilyId::Rb16 => 30,
        FamilyId::Rb14 => 80,
        FamilyId::Rb12 => 200,
        _ => 100,
    }
}

fn family_text(r: &FamilyReport) -> String {
    let fmt_c = |c: Option<f64>| c.map_or("-".to_string(), |c| format!("{c:.6e}"));
    let hard = r.hard_failures();
    let mut s = format!(
        "{} {}  exponent {}/{}  rows {}  excluded {}  threshold {}  c1 {} (observed {:.6e})  c2 {} (observed {:.6})\n",
        verdict(r.passed()),
        r.family,
        r.p,
        r.q,
        r.rows.len(),
        r.excluded.len(),
        r.threshold.map_or("none".into(), |t| t.to_string()),
        fmt_c(r.c1),
        r.observed_c1,
        fmt_c(r.c2),
        r.observed_c2
    );
    let soft: Vec<u64> = r.rows.iter().filter(|x| !x.passes() && !hard.contains(&x.k)).map(|x| x.k).collect();
    if !soft.is_empty() {
        s.push_str(&format!("  below threshold (allowed): k = {soft:?}\n"));
    }
    for row in r.rows.iter().filter(|x| hard.contains(&x.k)) {
        s.push_str(&format!(
            "  k={} {} D_K={} M(candidate)={} M={} lower={} upper_ok={:?} lower_ok={:?} true_ok={:?}\n",
            row.k,
            row.field,
            row.disc,
            num(row.m_candidate),
            row.m_true.map_or("-".into(), num),
            num(row.lower_bound),
            row.upper_ok,
            row.lower_ok,
            row.true_ok
        ));
    }
    s
}

fn cmd_verify_families(
    family: Option<&str>,
    exponent: Option<&str>,
    kmin: u64,
    kmax: Option<u64>,
    fmt: Format,
    ctx: &PrecisionContext,
) -> Result<Outcome> {
    let specs: Vec<FamilySpec> = match family {
        None => FamilyId::UNCONDITIONAL.iter().map(|&id| FamilySpec::fixed(id)).collect::<Result<_>>()?,
        Some(name) => {
            let id: FamilyId = name.parse()?;
            let spec = match (id.fixed_exponent(), exponent) {
                (Some(_), None) => FamilySpec::fixed(id)?,
                (_, Some(e)) => {
                    let (p, q) = parse_exponent(e)?;
                    FamilySpec::new(id, p, q)?
                }
                (None, None) => return Err(Error::Usage(format!("{id} needs --exponent p/q"))),
            };
            vec![spec]
        }
    };
    let reports: Vec<FamilyReport> = specs
        .iter()
        .map(|s| verify_family_bounds(s, kmin, kmax.unwrap_or_else(|| default_kmax(s.id)), ctx))
        .collect();
    let passed = reports.iter().all(FamilyReport::passed);
    let body = match fmt {
        Format::Json => serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n",
        Format::Csv => {
            let mut s = format!("{SCHEMA_LINE}\nfamily,p,q,k,field,disc,scale,m_candidate,m_true,lower_bound,chain_ok,passes\n");
            for r in &reports {
                for row in &r.rows {
                    s.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                        r.family,
                        r.p,
                        r.q,
                        row.k,
                        row.field.replace(',', ""),
                        row.disc,
                        num(row.scale),
                        num(row.m_candidate),
                        row.m_true.map_or(String::new(), num),
                        num(row.lower_bound),
                        row.chain_ok,
                        row.passes()
                    ));
                }
            }
            s
        }
        Format::Text => reports.iter().map(family_text).collect(),
    };
    Ok(Outcome { body, passed })
}

fn cmd_verify_tables(fmt: Format, ctx: &PrecisionContext) -> Result<Outcome> {
    let [a, b] = reproduce_tables(ctx)?;
    let rows: Vec<TableRow> = a.into_iter().chain(b).collect();
    let matched = rows.iter().filter(|r| r.matches_printed()).count();
    let passed = matched == rows.len();
    let body = match fmt {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Csv => {
            let mut s = format!("{SCHEMA_LINE}\nk,alpha,m,c_k,printed_m,printed_c_k,match\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.k,
                    r.alpha,
                    num(r.m),
                    num(r.c_k),
                    r.printed.0,
                    r.printed.1,
                    r.matches_printed()
                ));
            }
            s
        }
        Format::Text => {
            let mut s = format!("{} tables: {matched}/{} rows match to 2 decimals\n", verdict(passed), rows.len());
            for r in &rows {
                s.push_str(&format!(
                    "  {} k={:<3} {:<28} M={:<8.2} c_K={:<8.2}\n",
                    verdict(r.matches_printed()),
                    r.k,
                    r.alpha,
                    r.m,
                    r.c_k
                ));
            }
            s
        }
    };
    Ok(Outcome { body, passed })
}

/// Outcome of comparing the pruned search with the plain scan on one field.
#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub field: String,
    pub disc: u128,
    pub m: f64,
    pub m_oracle: f64,
    pub coords: [i64; 4],
    pub coords_oracle: [i64; 4],
    pub agree: bool,
}

/// Real cyclic fields and all biquadratic fields with `D_K ≤ max_disc`.
pub fn oracle_rows(max_disc: u128, ctx: &PrecisionContext) -> Result<Vec<OracleRow>> {
    let mut fields = range_fields(max_disc, Kind::Cyclic, Some(Signature::TotallyReal));
    fields.extend(range_fields(max_disc, Kind::Biquadratic, None));
    fields
        .par_iter()
        .map(|f| {
            let r = min_mahler(f, ctx)?;
            let o = brute_force_min(f, &search_box(f, r.bound)?, ctx)?;
            Ok(OracleRow {
                field: f.to_string(),
                disc: f.disc(),
                m: r.m,
                m_oracle: o.m,
                coords: r.coords,
                coords_oracle: o.coords,
                agree: r.coords == o.coords && (r.m - o.m).abs() <= REL_TOL * o.m,
            })
        })
        .collect()
}

fn cmd_verify_oracle(max_disc: u128, fmt: Format, ctx: &PrecisionContext) -> Result<Outcome> {
    let rows = oracle_rows(max_disc, ctx)?;
    let bad: Vec<&OracleRow> = rows.iter().filter(|r| !r.agree).collect();
    let passed = bad.is_empty();
    let body = match fmt {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Csv => {
            let mut s = format!("{SCHEMA_LINE}\nfield,disc,m,m_oracle,agree\n");
            for r in &rows {
                s.push_str(&format!("{},{},{},{},{}\n", r.field.replace(',', ""), r.disc, num(r.m), num(r.m_oracle), r.agree));
            }
            s
        }
        Format::Text => {
            let mut s = format!("{} oracle: {}/{} fields agree (D_K <= {max_disc})\n", verdict(passed), rows.len() - bad.len(), rows.len());
            for r in bad {
                s.push_str(&format!("  {} M={} oracle={} {:?} vs {:?}\n", r.field, num(r.m), num(r.m_oracle), r.coords, r.coords_oracle));
            }
            s
        }
    };
    Ok(Outcome { body, passed })
}

fn dispatch(cli: &Cli, warnings: &mut Vec<String>) -> Result<Outcome> {
    let ctx = PrecisionContext::with_bits(cli.precision_bits);
    match &cli.command {
        Command::Compute(a) => cmd_compute(a, cli.format.unwrap_or(Format::Text), &ctx),
        Command::Enumerate(a) => cmd_enumerate(a, cli.format.unwrap_or(Format::Csv), &ctx, warnings),
        Command::FigureData(a) => cmd_figure_data(a, cli.format.unwrap_or(Format::Csv), &ctx, warnings),
        Command::Verify { suite } => {
            let fmt = cli.format.unwrap_or(Format::Text);
            match suite {
                Suite::Bounds { max_disc, signature, kind } => cmd_verify_bounds(*max_disc, *signature, *kind, fmt, &ctx),
                Suite::Families { family, exponent, kmin, kmax } => {
                    cmd_verify_families(family.as_deref(), exponent.as_deref(), *kmin, *kmax, fmt, &ctx)
                }
                Suite::Tables => cmd_verify_tables(fmt, &ctx),
                Suite::Oracle { max_disc } => cmd_verify_oracle(*max_disc, fmt, &ctx),
            }
        }
    }
}

/// Parse `args`, run, and write to `out`/`err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let mut warnings = Vec::new();
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut warnings)),
            Err(e) => Err(Error::Usage(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli, &mut warnings),
    };
    for w in &warnings {
        let _ = writeln!(err, "{w}");
    }
    match result {
        Ok(o) => {
            let written = match &cli.out {
                Some(p) => std::fs::write(p, &o.body),
                None => out.write_all(o.body.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            if o.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("quartic-mahler").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn parse_helpers() {
        assert_eq!(parse_ints("-1, 2,1,5", 4).unwrap(), vec![-1, 2, 1, 5]);
        assert!(parse_ints("1,2", 4).is_err());
        assert_eq!(parse_exponent("3/10").unwrap(), (3, 10));
        assert!(parse_exponent("3").is_err());
    }

    #[test]
    fn compute_zeta5() {
        let (code, out, _) = run_str(&["compute", "--cyclic", "-1,2,1,5", "--format", "json"]);
        assert_eq!(code, 0);
        let rec: FieldRecord = serde_json::from_str(&out).unwrap();
        assert_eq!(rec.disc, 125);
        assert!((rec.m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str(&["compute"]).0, 2);
        assert_eq!(run_str(&["compute", "--cyclic", "1,2"]).0, 2);
        assert_eq!(run_str(&["compute", "--biquadratic", "4,9"]).0, 2);
        assert_eq!(run_str(&["enumerate", "--max-disc", "100", "--disc-cap", "10"]).0, 2);
        assert_eq!(run_str(&["verify", "families", "--family", "RB-general"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn journal_resumes_to_identical_output() {
        let dir = tempfile::tempdir().unwrap();
        let j = dir.path().join("j.log");
        let fields = range_fields(20_000, Kind::All, None);
        let ctx = PrecisionContext::default();
        let full = measure_fields(&fields, &ctx, None, "k").unwrap();
        // Simulate an interrupted run: journal holds only a prefix.
        let part = measure_fields(&fields[..3], &ctx, Some(&j), "k").unwrap();
        assert_eq!(part.len(), 3);
        let resumed = measure_fields(&fields, &ctx, Some(&j), "k").unwrap();
        assert_eq!(resumed, full);
        assert!(measure_fields(&fields, &ctx, Some(&j), "other").is_err());
    }
}
