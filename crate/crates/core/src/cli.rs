//! Command-line front end. Every run echoes its resolved configuration, and
//! identical arguments give byte-identical output.
//!
//! Exit status: 0 when every certification in scope passes, 2 when one fails
//! on the data, 1 on usage or domain errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Float, Integer};
use serde_json::{json, Map, Value};

use crate::audit::{
    a_bounds_audit, a_sandwich, apery_asymptotic, b_bounds_audit, b_sandwich, decay_exponent_fit, write_asymptotic_csv,
    AsymOrder,
};
use crate::error::{Error, Result};
use crate::kernel::{fmt_float, fmt_rational, IntPoly, DEFAULT_PRECISION, PRECISION_ENV};
use crate::logbehavior::{
    classify_log_behavior, monotone_ratio_certify, nth_root_ratio_certify, puiseux_fit, r_order, ratio2_seq, Direction,
    RootMode,
};
use crate::recurrence::{catalog, guess_recurrence, ratio_limit, roots_real, verify_recurrence, PRecurrence};
use crate::report::{AnalysisReport, Verdict, SCHEMA_VERSION};
use crate::sequences::{a_direct, a_transformed, AForm, SequenceName, SequenceStore, SequenceValues};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "logbehave", version, about = "Exact analysis of P-recursive sequences and their log-behavior")]
pub struct Cli {
    /// Working precision in bits for floating-point steps [default: 256, or $LOGBEHAVE_PRECISION]
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Output format [default: text; json for report-all]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of stdout
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Significant digits for decimal columns
    #[arg(long, global = true, default_value_t = 30)]
    digits: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SeqArgs {
    /// Sequence: a, b, apery, s, or a path to an `index<TAB>p/q` file
    #[arg(long, default_value = "a")]
    seq: String,
    /// Inclusive index range `start..end`
    #[arg(long, value_parser = parse_range)]
    range: Option<(i64, i64)>,
}

#[derive(Args, Debug, Clone)]
struct RecArgs {
    /// Recurrence file in the `order/offset/p<i>` text form (defaults to the known one)
    #[arg(long)]
    rec: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print exact terms
    Eval(SeqArgs),
    /// Check a recurrence against exact terms
    VerifyRec {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        rec: RecArgs,
    },
    /// Find the smallest recurrence satisfied by the terms in range
    GuessRec {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        #[arg(long, default_value_t = 10)]
        max_degree: usize,
    },
    /// Characteristic polynomial of a recurrence
    CharPoly {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        rec: RecArgs,
    },
    /// Real roots of a characteristic polynomial or of `--poly`
    Roots {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        rec: RecArgs,
        /// Ascending integer coefficients, comma separated (e.g. `-1,35,-35,1`)
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Dominant characteristic root against the empirical term ratio
    RatioLimit {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        rec: RecArgs,
    },
    /// Sign scan of the L operator on the range
    Classify(SeqArgs),
    /// Exact monotonicity of u(n+1)/u(n)
    CertifyRatio {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value = "increasing")]
        direction: String,
    },
    /// Strict decrease of u(n+1)^(1/(n+1)) / u(n)^(1/n)
    CertifyNthRoot {
        #[command(flatten)]
        seq: SeqArgs,
        /// exact, log or auto
        #[arg(long, default_value = "auto")]
        mode: String,
    },
    /// Fit R^2 u(n) = 1 + c/n^alpha and derive the r-order
    FitPuiseux {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_parser = parse_range)]
        window: Option<(i64, i64)>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
    },
    /// Fit the polynomial decay exponent of u(n) / base^n
    FitDecay {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        rec: RecArgs,
        #[arg(long, value_parser = parse_range)]
        window: Option<(i64, i64)>,
        /// Growth base (defaults to the dominant characteristic root)
        #[arg(long)]
        base: Option<f64>,
    },
    /// Exact audit of the explicit bounds for a or b
    AuditBounds(SeqArgs),
    /// Compare the Apéry asymptotic formula with exact values
    AuditAperyAsym {
        #[arg(long, value_parser = parse_range)]
        range: Option<(i64, i64)>,
        /// main or corrected
        #[arg(long, default_value = "corrected")]
        order: String,
    },
    /// Every certification and audit for a and b
    ReportAll {
        #[arg(long, value_parser = parse_range)]
        range: Option<(i64, i64)>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::VerifyRec { .. } => "verify-rec",
            Command::GuessRec { .. } => "guess-rec",
            Command::CharPoly { .. } => "char-poly",
            Command::Roots { .. } => "roots",
            Command::RatioLimit { .. } => "ratio-limit",
            Command::Classify(_) => "classify",
            Command::CertifyRatio { .. } => "certify-ratio",
            Command::CertifyNthRoot { .. } => "certify-nth-root",
            Command::FitPuiseux { .. } => "fit-puiseux",
            Command::FitDecay { .. } => "fit-decay",
            Command::AuditBounds(_) => "audit-bounds",
            Command::AuditAperyAsym { .. } => "audit-apery-asym",
            Command::ReportAll { .. } => "report-all",
        }
    }
}

/// Parses `start..end` (inclusive).
pub fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("range {s:?} is not of the form start..end"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
    if a > b {
        return Err(format!("range {s:?} is empty"));
    }
    Ok((a, b))
}

const DEFAULT_RANGE: (i64, i64) = (1, 200);

struct Ctx {
    prec: u32,
    digits: usize,
    store: SequenceStore,
    config: Map<String, Value>,
}

impl Ctx {
    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.config.insert(key.to_string(), v.into());
    }

    fn f(&self, x: &Float) -> String {
        fmt_float(x, self.digits)
    }
}

enum Selector {
    Named(SequenceName),
    File(PathBuf),
}

fn selector(s: &str) -> Result<Selector> {
    match s.parse::<SequenceName>() {
        Ok(n) => Ok(Selector::Named(n)),
        Err(_) => {
            let p = PathBuf::from(s);
            if p.exists() {
                Ok(Selector::File(p))
            } else {
                Err(Error::Parse(format!("{s:?} is neither a sequence name (a, b, apery, s) nor a readable file")))
            }
        }
    }
}

/// Terms on `[start, end]`, evaluated directly or read from a file.
fn load(ctx: &Ctx, sel: &Selector, start: i64, end: i64) -> Result<SequenceValues> {
    match sel {
        Selector::Named(name) => {
            if start < name.offset() {
                return Err(Error::Domain(format!("{name} starts at n={}, range starts at {start}", name.offset())));
            }
            ctx.store.range(*name, start, end)
        }
        Selector::File(p) => SequenceValues::load(p)?.slice(start, end),
    }
}

fn known_recurrence(sel: &Selector) -> Option<PRecurrence> {
    match sel {
        Selector::Named(SequenceName::A) => Some(catalog::a_recurrence()),
        Selector::Named(SequenceName::B) => Some(catalog::b_recurrence()),
        Selector::Named(SequenceName::Apery) => Some(catalog::apery_recurrence()),
        _ => None,
    }
}

fn recurrence_for(ctx: &mut Ctx, sel: &Selector, rec: &RecArgs) -> Result<PRecurrence> {
    if let Some(p) = &rec.rec {
        ctx.set("rec", p.display().to_string());
        return std::fs::read_to_string(p)?.parse();
    }
    ctx.set("rec", "known");
    known_recurrence(sel).ok_or_else(|| Error::Domain("no known recurrence for this sequence; pass --rec FILE".into()))
}

struct Outcome {
    text: String,
    json: Value,
    csv: Option<String>,
    violation: bool,
}

impl Outcome {
    fn new(text: String, json: Value) -> Self {
        Outcome { text, json, csv: None, violation: false }
    }

    fn from_report(r: &AnalysisReport) -> Self {
        let mut text = r.summary();
        text.push('\n');
        for n in &r.notes {
            text.push_str(&format!("note: {n}\n"));
        }
        let violation = !r.passed();
        Outcome { text, json: serde_json::to_value(r).unwrap(), csv: None, violation }
    }
}

fn seq_setup(ctx: &mut Ctx, a: &SeqArgs, default: (i64, i64)) -> Result<(Selector, (i64, i64))> {
    let range = a.range.unwrap_or(default);
    ctx.set("seq", a.seq.clone());
    ctx.set("range", json!([range.0, range.1]));
    Ok((selector(&a.seq)?, range))
}

fn cmd_eval(ctx: &mut Ctx, a: &SeqArgs) -> Result<Outcome> {
    let (sel, (s, e)) = seq_setup(ctx, a, DEFAULT_RANGE)?;
    let vals = load(ctx, &sel, s, e)?;
    let mut buf = Vec::new();
    vals.write_to(&mut buf)?;
    let text = String::from_utf8(buf).expect("utf8");
    let terms: Vec<Value> = vals.iter().map(|(n, v)| json!({ "n": n, "value": fmt_rational(v) })).collect();
    let mut csv = String::from("n,value\n");
    for (n, v) in vals.iter() {
        csv.push_str(&format!("{n},{}\n", fmt_rational(v)));
    }
    let mut out = Outcome::new(text, json!({ "sequence": vals.name, "terms": terms }));
    out.csv = Some(csv);
    Ok(out)
}

fn cmd_verify(ctx: &mut Ctx, a: &SeqArgs, r: &RecArgs) -> Result<Outcome> {
    let (sel, (s, e)) = seq_setup(ctx, a, DEFAULT_RANGE)?;
    let rec = recurrence_for(ctx, &sel, r)?;
    let vals = load(ctx, &sel, s, e + rec.order() as i64)?;
    Ok(Outcome::from_report(&verify_recurrence(&rec, &vals, s, e)?))
}

fn cmd_guess(ctx: &mut Ctx, a: &SeqArgs, max_order: usize, max_degree: usize) -> Result<Outcome> {
    let (sel, (s, e)) = seq_setup(ctx, a, (1, 80))?;
    ctx.set("max_order", max_order);
    ctx.set("max_degree", max_degree);
    let s = match &sel {
        Selector::Named(n) => s.max(n.offset()),
        Selector::File(_) => s,
    };
    let vals = load(ctx, &sel, s, e)?;
    let found = guess_recurrence(&vals, max_order, max_degree)?;
    let known = known_recurrence(&sel);
    Ok(match found {
        None => Outcome::new(
            format!("no recurrence of order <= {max_order} and degree <= {max_degree}\n"),
            json!({ "found": false }),
        ),
        Some(rec) => {
            let same = known.as_ref().map(|k| k.is_proportional_to(&rec));
            let mut text = rec.to_text();
            text.push_str(&format!("# {rec}\n"));
            if let Some(same) = same {
                text.push_str(&format!(
                    "# proportional to the known recurrence: {}\n",
                    if same { "yes" } else { "no" }
                ));
            }
            Outcome::new(
                text,
                json!({
                    "found": true,
                    "order": rec.order(),
                    "degree": rec.degree(),
                    "recurrence": rec.to_text(),
                    "display": rec.to_string(),
                    "matches_known": same,
                }),
            )
        }
    })
}

fn cmd_char_poly(ctx: &mut Ctx, a: &SeqArgs, r: &RecArgs) -> Result<Outcome> {
    let sel = selector(&a.seq)?;
    ctx.set("seq", a.seq.clone());
    let rec = recurrence_for(ctx, &sel, r)?;
    let p = rec.characteristic_poly();
    let coeffs: Vec<String> = p.coeffs().iter().map(Integer::to_string).collect();
    Ok(Outcome::new(format!("{}\n", p.display_in("x")), json!({ "poly": p.display_in("x"), "coefficients": coeffs })))
}

fn parse_poly(s: &str) -> Result<IntPoly> {
    let cs = s
        .split(',')
        .map(|c| Integer::from_str_radix(c.trim(), 10).map_err(|_| Error::Parse(format!("bad coefficient {c:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPoly::new(cs))
}

fn cmd_roots(ctx: &mut Ctx, a: &SeqArgs, r: &RecArgs, poly: &Option<String>) -> Result<Outcome> {
    let p = match poly {
        Some(s) => {
            ctx.set("poly", s.clone());
            parse_poly(s)?
        }
        None => {
            ctx.set("seq", a.seq.clone());
            let sel = selector(&a.seq)?;
            recurrence_for(ctx, &sel, r)?.characteristic_poly()
        }
    };
    let res = roots_real(&p, ctx.prec)?;
    let dom = res.dominant();
    let mut text = format!("poly {}\n", p.display_in("x"));
    let mut roots = Vec::new();
    for (i, root) in res.roots.iter().enumerate() {
        let mark = if Some(i) == dom { "\tdominant" } else { "" };
        let exact = root.exact.clone().unwrap_or_else(|| "-".into());
        text.push_str(&format!("{}\t{}\t{}{mark}\n", root.kind.as_str(), exact, ctx.f(&root.value)));
        roots.push(json!({
            "kind": root.kind.as_str(),
            "exact": root.exact,
            "value": ctx.f(&root.value),
            "dominant": Some(i) == dom,
        }));
    }
    let resid = res.max_residual();
    text.push_str(&format!("max residual {}\n", fmt_float(&resid, 6)));
    Ok(Outcome::new(
        text,
        json!({
            "poly": p.display_in("x"),
            "roots": roots,
            "nonreal_count": res.nonreal_count,
            "max_residual": fmt_float(&resid, 6),
            "exact_roots_verified": res.exact_roots_verified(),
        }),
    ))
}

fn cmd_ratio_limit(ctx: &mut Ctx, a: &SeqArgs, r: &RecArgs) -> Result<Outcome> {
    let (sel, (s, e)) = seq_setup(ctx, a, DEFAULT_RANGE)?;
    let rec = recurrence_for(ctx, &sel, r)?;
    let vals = load(ctx, &sel, s, e)?;
    let rl = ratio_limit(&rec, &vals, ctx.prec)?;
    let exact = rl.exact_form.clone().unwrap_or_else(|| "-".into());
    let text = format!(
        "limit {exact} ~ {}\nempirical ratio at n={} is {}\ngap {}\nnote: {}\n",
        ctx.f(&rl.limit),
        rl.tail_index,
        ctx.f(&rl.empirical),
        fmt_float(&rl.gap, 8),
        rl.note
    );
    Ok(Outcome::new(
        text,
        json!({
            "limit_exact": rl.exact_form,
            "limit": ctx.f(&rl.limit),
            "tail_index": rl.tail_index,
            "empirical": ctx.f(&rl.empirical),
            "gap": fmt_float(&rl.gap, 8),
            "note": rl.note,
        }),
    ))
}

fn cmd_classify(ctx: &mut Ctx, a: &SeqArgs) -> Result<Outcome> {
    let (sel, (s, e)) = seq_setup(ctx, a, DEFAULT_RANGE)?;
    let vals = load(ctx, &sel, s, e)?;
    Ok(Outcome::from_report(&classify_log_behavior(&vals, e)?))
}

fn cmd_certify_ratio(ctx: &mut Ctx, a: &SeqArgs, direction: &str) -> Result<Outcome> {
    let (sel, (s, e)) = seq_setup(ctx, a, DEFAULT_RANGE)?;
    ctx.set("direction", direction);
    let dir: Direction = direction.parse()?;
    let vals = load(ctx, &sel, s, e + 1)?;
    Ok(Outcome::from_report(&monotone_ratio_certify(&vals, dir, s, e)?))
}

fn cmd_certify_root(ctx: &mut Ctx, a: &SeqArgs, mode: &str) -> Result<Outcome> {
    let (sel, (s, e)) = seq_setup(ctx, a, (3, 200))?;
    ctx.set("mode", mode);
    let mode: RootMode = mode.parse()?;
    let vals = load(ctx, &sel, (s - 1).max(0), e + 1)?;
    Ok(Outcome::from_report(&nth_root_ratio_certify(&vals, s, e, mode)?))
}

fn puiseux_json(ctx: &Ctx, vals: &SequenceValues, window: Option<(i64, i64)>, beta: Option<f64>) -> Result<Value> {
    let r2 = ratio2_seq(vals)?;
    let fit = puiseux_fit(&r2, window, beta, ctx.prec)?;
    let order = match r_order(&fit) {
        Ok(o) => json!({ "r": o.r, "flavor": o.flavor.to_string(), "statement": o.to_string() }),
        Err(err) => json!({ "error": err.to_string() }),
    };
    Ok(json!({
        "c": fmt_float(&fit.c, 12),
        "alpha": fmt_float(&fit.alpha, 12),
        "beta": fmt_float(&fit.beta, 12),
        "window": [fit.window.0, fit.window.1],
        "points": fit.points,
        "residual": fmt_float(&fit.residual, 6),
        "r_order": order,
    }))
}

fn json_text(v: &Value) -> String {
    let mut s = String::new();
    if let Value::Object(m) = v {
        for (k, v) in m {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            s.push_str(&format!("{k}\t{shown}\n"));
        }
    }
    s
}

fn cmd_fit_puiseux(ctx: &mut Ctx, a: &SeqArgs, window: Option<(i64, i64)>, beta: Option<f64>) -> Result<Outcome> {
    let (sel, (s, e)) = seq_setup(ctx, a, DEFAULT_RANGE)?;
    ctx.set("window", window.map(|w| json!([w.0, w.1])).unwrap_or(Value::Null));
    ctx.set("beta", beta);
    let vals = load(ctx, &sel, s, e + 2)?;
    let v = puiseux_json(ctx, &vals, window, beta)?;
    Ok(Outcome::new(json_text(&v), v))
}

fn dominant_base(prec: u32, rec: &PRecurrence) -> Result<Float> {
    Ok(roots_real(&rec.characteristic_poly(), prec)?.dominant_root()?.value.clone())
}

fn cmd_fit_decay(
    ctx: &mut Ctx,
    a: &SeqArgs,
    r: &RecArgs,
    window: Option<(i64, i64)>,
    base: Option<f64>,
) -> Result<Outcome> {
    let (sel, (s, e)) = seq_setup(ctx, a, DEFAULT_RANGE)?;
    ctx.set("window", window.map(|w| json!([w.0, w.1])).unwrap_or(Value::Null));
    let base = match base {
        Some(b) => {
            ctx.set("base", b);
            Float::with_val(ctx.prec, b)
        }
        None => {
            ctx.set("base", "dominant root");
            dominant_base(ctx.prec, &recurrence_for(ctx, &sel, r)?)?
        }
    };
    let vals = load(ctx, &sel, s, e)?;
    let fit = decay_exponent_fit(&vals, &base, window, ctx.prec)?;
    let v = json!({
        "t": fmt_float(&fit.t, 12),
        "intercept": fmt_float(&fit.intercept, 12),
        "base": ctx.f(&base),
        "window": [fit.window.0, fit.window.1],
        "max_abs_residual": fmt_float(&fit.max_abs_residual, 6),
    });
    Ok(Outcome::new(json_text(&v), v))
}

fn cmd_audit_bounds(ctx: &mut Ctx, a: &SeqArgs) -> Result<Outcome> {
    let (sel, (s, e)) = seq_setup(ctx, a, DEFAULT_RANGE)?;
    let rep = match sel {
        Selector::Named(SequenceName::A) => a_bounds_audit(&ctx.store, s, e)?,
        Selector::Named(SequenceName::B) => b_bounds_audit(&ctx.store, s, e)?,
        _ => return Err(Error::Domain("bounds are audited for a and b only".into())),
    };
    Ok(Outcome::from_report(&rep))
}

fn cmd_audit_apery(ctx: &mut Ctx, range: Option<(i64, i64)>, order: &str) -> Result<Outcome> {
    let (s, e) = range.unwrap_or(DEFAULT_RANGE);
    ctx.set("range", json!([s, e]));
    ctx.set("order", order);
    let order: AsymOrder = order.parse()?;
    let evals = (s..=e).map(|n| apery_asymptotic(n, order, ctx.prec)).collect::<Result<Vec<_>>>()?;
    let mut text = String::from("n\texact\tformula\trelative_error\tn^2*relative_error\n");
    let mut rows = Vec::new();
    for ev in &evals {
        let err = ev.relative_error();
        let scaled = Float::with_val(ctx.prec, &err * (ev.n * ev.n) as u64);
        text.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            ev.n,
            fmt_rational(&ev.exact),
            ctx.f(&ev.formula),
            fmt_float(&err, 8),
            fmt_float(&scaled, 8)
        ));
        rows.push(json!({
            "n": ev.n,
            "exact": fmt_rational(&ev.exact),
            "formula": ctx.f(&ev.formula),
            "relative_error": fmt_float(&err, 8),
        }));
    }
    let mut buf = Vec::new();
    write_asymptotic_csv(&evals, ctx.digits, &mut buf)?;
    let mut out = Outcome::new(text, json!({ "order": order.to_string(), "rows": rows }));
    out.csv = Some(String::from_utf8(buf).expect("utf8"));
    Ok(out)
}

/// Everything for one of `a`, `b`, in a fixed order.
fn report_sequence(ctx: &Ctx, name: SequenceName, s: i64, e: i64) -> Result<(Value, Vec<String>, bool)> {
    let s = s.max(name.offset());
    let rec = match name {
        SequenceName::A => catalog::a_recurrence(),
        _ => catalog::b_recurrence(),
    };
    let vals = ctx.store.range(name, s, e + 3)?;
    let mut lines = Vec::new();
    let mut failed = false;
    let mut reports = Vec::new();
    let mut push = |r: AnalysisReport, lines: &mut Vec<String>, failed: &mut bool| {
        lines.push(r.summary());
        *failed |= !r.passed();
        reports.push(serde_json::to_value(&r).unwrap());
    };

    push(verify_recurrence(&rec, &vals, s, e)?, &mut lines, &mut failed);

    let cp = rec.characteristic_poly();
    let roots = roots_real(&cp, ctx.prec)?;
    let rl = ratio_limit(&rec, &vals.slice(s, e)?, ctx.prec)?;
    let exact = rl.exact_form.clone().unwrap_or_else(|| "-".into());
    lines.push(format!("{name} / characteristic polynomial: {}", cp.display_in("x")));
    lines.push(format!(
        "{name} / ratio limit: {exact} ~ {} (gap at n={} is {})",
        ctx.f(&rl.limit),
        rl.tail_index,
        fmt_float(&rl.gap, 8)
    ));

    let class = classify_log_behavior(&vals.slice(s, e)?, e)?;
    let threshold = match class.verdict {
        Verdict::Threshold { n } => n,
        _ => s,
    };
    let positive_from = class.details["first_positive_index"].as_i64().unwrap_or(s);
    push(class, &mut lines, &mut failed);

    let ratio_start = threshold.max(s);
    push(monotone_ratio_certify(&vals, Direction::Increasing, ratio_start, e)?, &mut lines, &mut failed);

    let root_start = (positive_from + 1).max(name.offset() + 2).max(s).max(2);
    push(nth_root_ratio_certify(&vals, root_start, e, RootMode::Auto)?, &mut lines, &mut failed);

    let puiseux = puiseux_json(ctx, &vals.slice(s, e + 2)?, None, None)?;
    lines.push(format!(
        "{name} / puiseux fit: c={} alpha={} window={} r-order {}",
        puiseux["c"].as_str().unwrap(),
        puiseux["alpha"].as_str().unwrap(),
        puiseux["window"],
        puiseux["r_order"].get("statement").and_then(Value::as_str).unwrap_or("n/a"),
    ));
    let decay = decay_exponent_fit(&vals.slice(s, e)?, &rl.limit, None, ctx.prec)?;
    lines.push(format!(
        "{name} / decay exponent: t={} on window [{}, {}]",
        fmt_float(&decay.t, 12),
        decay.window.0,
        decay.window.1
    ));

    let bounds = match name {
        SequenceName::A => a_bounds_audit(&ctx.store, s, e)?,
        _ => b_bounds_audit(&ctx.store, s, e)?,
    };
    push(bounds, &mut lines, &mut failed);

    let mut identities = Vec::new();
    let mut identity_ok = true;
    for n in s..=e {
        let direct = vals.at(n)?;
        let ok = match name {
            SequenceName::A => {
                a_direct(n, AForm::Dual)? == *direct && a_transformed(n)? == *direct && a_sandwich(n)? == *direct
            }
            _ => b_sandwich(n)? == *direct,
        };
        if !ok {
            identity_ok = false;
            identities.push(n);
        }
    }
    lines.push(format!(
        "{name} / exact identities on [{s}, {e}]: {}",
        if identity_ok { "hold".to_string() } else { format!("fail at {identities:?}") }
    ));
    failed |= !identity_ok;

    let v = json!({
        "reports": reports,
        "characteristic_poly": cp.display_in("x"),
        "roots": roots.roots.iter().map(|r| json!({
            "kind": r.kind.as_str(), "exact": r.exact, "value": ctx.f(&r.value)
        })).collect::<Vec<_>>(),
        "ratio_limit": {
            "exact": rl.exact_form, "value": ctx.f(&rl.limit), "tail_index": rl.tail_index,
            "empirical": ctx.f(&rl.empirical), "gap": fmt_float(&rl.gap, 8),
        },
        "ratio_monotone_from": ratio_start,
        "puiseux": puiseux,
        "decay": {
            "t": fmt_float(&decay.t, 12),
            "window": [decay.window.0, decay.window.1],
        },
        "identities": { "hold": identity_ok, "failures": identities },
    });
    Ok((v, lines, failed))
}

fn cmd_report_all(ctx: &mut Ctx, range: Option<(i64, i64)>) -> Result<Outcome> {
    let (s, e) = range.unwrap_or(DEFAULT_RANGE);
    ctx.set("range", json!([s, e]));
    if e - s < 40 {
        return Err(Error::Domain("report-all needs a range of at least 41 indices".into()));
    }
    let mut doc = Map::new();
    let mut text = String::new();
    let mut violation = false;
    for name in [SequenceName::A, SequenceName::B] {
        let (v, lines, failed) = report_sequence(ctx, name, s, e)?;
        for l in lines {
            text.push_str(&l);
            text.push('\n');
        }
        violation |= failed;
        doc.insert(name.to_string(), v);
    }
    let mut asym = Vec::new();
    for n in [50i64, 100, 200].into_iter().filter(|n| (s.max(1)..=e).contains(n)) {
        let main = apery_asymptotic(n, AsymOrder::Main, ctx.prec)?.relative_error();
        let corr = apery_asymptotic(n, AsymOrder::Corrected, ctx.prec)?.relative_error();
        let scaled = Float::with_val(ctx.prec, &corr * (n * n) as u64);
        text.push_str(&format!(
            "apery / asymptotic at n={n}: main error {}, corrected error {}, n^2 * corrected {}\n",
            fmt_float(&main, 6),
            fmt_float(&corr, 6),
            fmt_float(&scaled, 6)
        ));
        asym.push(json!({
            "n": n,
            "main_relative_error": fmt_float(&main, 8),
            "corrected_relative_error": fmt_float(&corr, 8),
            "n2_corrected": fmt_float(&scaled, 8),
        }));
    }
    doc.insert("apery_asymptotic".into(), Value::Array(asym));
    text.push_str(&format!("overall: {}\n", if violation { "violation" } else { "pass" }));
    doc.insert("overall".into(), json!(if violation { "violation" } else { "pass" }));
    let mut out = Outcome::new(text, Value::Object(doc));
    out.violation = violation;
    Ok(out)
}

fn dispatch(ctx: &mut Ctx, cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Eval(a) => cmd_eval(ctx, a),
        Command::VerifyRec { seq, rec } => cmd_verify(ctx, seq, rec),
        Command::GuessRec { seq, max_order, max_degree } => cmd_guess(ctx, seq, *max_order, *max_degree),
        Command::CharPoly { seq, rec } => cmd_char_poly(ctx, seq, rec),
        Command::Roots { seq, rec, poly } => cmd_roots(ctx, seq, rec, poly),
        Command::RatioLimit { seq, rec } => cmd_ratio_limit(ctx, seq, rec),
        Command::Classify(a) => cmd_classify(ctx, a),
        Command::CertifyRatio { seq, direction } => cmd_certify_ratio(ctx, seq, direction),
        Command::CertifyNthRoot { seq, mode } => cmd_certify_root(ctx, seq, mode),
        Command::FitPuiseux { seq, window, beta } => cmd_fit_puiseux(ctx, seq, *window, *beta),
        Command::FitDecay { seq, rec, window, base } => cmd_fit_decay(ctx, seq, rec, *window, *base),
        Command::AuditBounds(a) => cmd_audit_bounds(ctx, a),
        Command::AuditAperyAsym { range, order } => cmd_audit_apery(ctx, *range, order),
        Command::ReportAll { range } => cmd_report_all(ctx, *range),
    }
}

fn resolve_precision(flag: Option<u32>) -> Result<u32> {
    let p = match flag {
        Some(p) => p,
        None => match std::env::var(PRECISION_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| Error::Parse(format!("{PRECISION_ENV}={v:?} is not a bit count")))?,
            Err(_) => DEFAULT_PRECISION,
        },
    };
    if !(64..=1 << 20).contains(&p) {
        return Err(Error::Domain(format!("precision must be in [64, 1048576] bits, got {p}")));
    }
    Ok(p)
}

fn render(ctx: &Ctx, format: Format, out: Outcome) -> Result<String> {
    let config = Value::Object(ctx.config.clone());
    Ok(match format {
        Format::Text => format!("# config {config}\n{}", out.text),
        Format::Json => {
            let doc = json!({ "schema": SCHEMA_VERSION, "config": config, "result": out.json });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let csv = out.csv.ok_or_else(|| {
                Error::Domain(format!("csv output is not available for {}", ctx.config["subcommand"]))
            })?;
            format!("# config {config}\n{csv}")
        }
    })
}

/// Parses `args` (including the program name) and runs one subcommand,
/// writing the report to `out` (or `--output`) and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, violation)) => {
            let written = match &cli.output {
                Some(p) => File::create(p).and_then(|mut f| f.write_all(text.as_bytes())),
                None => out.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            if violation {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, bool)> {
    let prec = resolve_precision(cli.precision)?;
    let format = cli.format.unwrap_or(match cli.command {
        Command::ReportAll { .. } => Format::Json,
        _ => Format::Text,
    });
    let mut ctx = Ctx { prec, digits: cli.digits, store: SequenceStore::new(), config: Map::new() };
    ctx.set("subcommand", cli.command.name());
    ctx.set("precision", prec);
    ctx.set("format", format.as_str());
    ctx.set("digits", cli.digits);
    ctx.set("output", cli.output.as_ref().map(|p| p.display().to_string()));
    let outcome = dispatch(&mut ctx, &cli.command)?;
    let violation = outcome.violation;
    Ok((render(&ctx, format, outcome)?, violation))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["logbehave"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..5"), Ok((1, 5)));
        assert_eq!(parse_range("3..=3"), Ok((3, 3)));
        assert!(parse_range("5..1").is_err());
        assert!(parse_range("1-5").is_err());
        assert!(parse_range("a..5").is_err());
    }

    #[test]
    fn eval_lines() {
        let (code, out, _) = run_str(&["eval", "--seq", "a", "--range", "1..5"]);
        assert_eq!(code, 0);
        let body: Vec<&str> = out.lines().skip(1).collect();
        assert_eq!(body, ["1\t-1", "2\t1", "3\t9", "4\t61", "5\t587"]);
        assert!(out.starts_with("# config {"));
    }

    #[test]
    fn char_poly_text() {
        let (code, out, _) = run_str(&["char-poly", "--seq", "a"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().nth(1), Some("x^3 - 35x^2 + 35x - 1"));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["eval", "--range", "5..1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["eval", "--seq", "/no/such/file"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["char-poly", "--seq", "s"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["classify", "--format", "csv"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn violation_exits_two() {
        let (code, out, _) = run_str(&["certify-ratio", "--seq", "a", "--range", "2..40"]);
        assert_eq!(code, EXIT_VIOLATION);
        assert!(out.contains("first violation at n=2"), "{out}");
        assert_eq!(run_str(&["certify-ratio", "--seq", "a", "--range", "3..40"]).0, EXIT_OK);
    }

    #[test]
    fn json_has_schema() {
        let (code, out, _) = run_str(&["roots", "--poly", "-2,0,1", "--format", "json", "--precision", "128"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["config"]["precision"], 128);
        assert_eq!(v["result"]["roots"][1]["exact"], "0 + sqrt(2)");
    }
}
