//! Ratio operators, the `L` operator and certification of log-behavior and
//! of the monotonicity of `u_{n+1}/u_n` and `u_{n+1}^{1/(n+1)} / u_n^{1/n}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde_json::json;

use crate::error::{Error, Result};
use crate::fit::least_squares;
use crate::kernel::{fmt_float, fmt_rational, ln_rational};
use crate::report::{AnalysisReport, Verdict};
use crate::sequences::SequenceValues;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "increasing" | "inc" => Ok(Direction::Increasing),
            "decreasing" | "dec" => Ok(Direction::Decreasing),
            _ => Err(Error::Parse(format!("unknown direction {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Convex,
    Concave,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Convex => "log-convex",
            Flavor::Concave => "log-concave",
        })
    }
}

fn nonzero(vals: &SequenceValues, n: i64) -> Result<&Rational> {
    let v = vals.at(n)?;
    if v.is_zero() {
        return Err(Error::ZeroTerm { index: n });
    }
    Ok(v)
}

fn positive(vals: &SequenceValues, n: i64) -> Result<&Rational> {
    let v = vals.at(n)?;
    if v.cmp0() != Ordering::Greater {
        return Err(Error::Domain(format!("{}({n}) = {} is not positive", vals.name, fmt_rational(v))));
    }
    Ok(v)
}

/// `R u_n = u_{n+1} / u_n`, indexed by `n`.
pub fn ratio_seq(vals: &SequenceValues) -> Result<SequenceValues> {
    let out = (vals.offset..vals.end())
        .map(|n| Ok(Rational::from(vals.at(n + 1)? / nonzero(vals, n)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SequenceValues::new(format!("R({})", vals.name), vals.offset, out))
}

/// `R^2 u_n = u_n u_{n+2} / u_{n+1}^2`, indexed by `n`.
pub fn ratio2_seq(vals: &SequenceValues) -> Result<SequenceValues> {
    let out = (vals.offset..vals.end() - 1)
        .map(|n| {
            let mid = nonzero(vals, n + 1)?;
            let num = Rational::from(vals.at(n)? * vals.at(n + 2)?);
            Ok(num / Rational::from(mid.square_ref()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SequenceValues::new(format!("R2({})", vals.name), vals.offset, out))
}

/// `L^k` with `L u_n = u_{n+2} u_n - u_{n+1}^2`, indexed by `n`.
pub fn l_operator(vals: &SequenceValues, k: usize) -> Result<SequenceValues> {
    if k == 0 {
        return Err(Error::Domain("L operator power must be >= 1".into()));
    }
    if vals.len() < 2 * k + 1 {
        return Err(Error::Coverage(format!("L^{k} needs {} terms, got {}", 2 * k + 1, vals.len())));
    }
    let mut cur = vals.values.clone();
    for _ in 0..k {
        cur = cur.windows(3).map(|w| Rational::from(&w[2] * &w[0]) - Rational::from(w[1].square_ref())).collect();
    }
    Ok(SequenceValues::new(format!("L{k}({})", vals.name), vals.offset, cur))
}

/// Sign scan of `L u_n` over the positive tail `[p, horizon - 2]`, where `p` is
/// the first index from which every term up to `horizon` is positive.
///
/// The verdict is `Threshold { n: N }` for the smallest `N` such that `L u_n`
/// keeps one (weak) sign on `[N, horizon - 2]`, or `Mixed` when that `N` is
/// within 10 of the horizon.
pub fn classify_log_behavior(vals: &SequenceValues, horizon: i64) -> Result<AnalysisReport> {
    vals.require(vals.offset, horizon)?;
    let mut p = horizon + 1;
    while p > vals.offset && vals.at(p - 1)?.cmp0() == Ordering::Greater {
        p -= 1;
    }
    if p > horizon - 2 {
        return Err(Error::Domain(format!("{} has no positive tail of length >= 3 up to {horizon}", vals.name)));
    }
    let signs: Vec<(i64, Ordering)> = (p..=horizon - 2)
        .map(|n| {
            let l = Rational::from(vals.at(n + 2)? * vals.at(n)?) - Rational::from(vals.at(n + 1)?.square_ref());
            Ok((n, l.cmp0()))
        })
        .collect::<Result<_>>()?;
    let start_of_tail = |bad: Ordering| signs.iter().rev().find(|(_, s)| *s == bad).map_or(p, |(n, _)| n + 1);
    let n_convex = start_of_tail(Ordering::Less);
    let n_concave = start_of_tail(Ordering::Greater);
    let (flavor, n) = if n_convex <= n_concave { (Flavor::Convex, n_convex) } else { (Flavor::Concave, n_concave) };
    let opposite: Vec<i64> = signs
        .iter()
        .filter(|(_, s)| *s == if flavor == Flavor::Convex { Ordering::Less } else { Ordering::Greater })
        .map(|(n, _)| *n)
        .collect();
    let details = json!({
        "flavor": flavor.to_string(),
        "threshold": n,
        "first_positive_index": p,
        "opposite_sign_indices": opposite,
    });
    let mut report = if n >= horizon - 10 {
        AnalysisReport::new(&vals.name, "log-behavior", (p, horizon), Verdict::Mixed)
            .with_note("no constant sign of L u_n on a tail of length > 10")
    } else {
        AnalysisReport::new(&vals.name, flavor.to_string(), (p, horizon), Verdict::Threshold { n })
            .with_note(format!("sign of L u_n = u(n+2)u(n) - u(n+1)^2 is constant on [{n}, {}]", horizon - 2))
    };
    if p > vals.offset {
        report = report.with_note(format!("terms before n={p} are not all positive and are excluded"));
    }
    Ok(report.with_details(details))
}

/// Exact check that `u_{n+1}/u_n` is strictly monotone on `[start, end]`.
pub fn monotone_ratio_certify(
    vals: &SequenceValues,
    direction: Direction,
    start: i64,
    end: i64,
) -> Result<AnalysisReport> {
    vals.require(start, end + 1)?;
    let property = match direction {
        Direction::Increasing => "ratio-increasing",
        Direction::Decreasing => "ratio-decreasing",
    };
    let ratio = |n: i64| -> Result<Rational> { Ok(Rational::from(vals.at(n + 1)? / nonzero(vals, n)?)) };
    let want = match direction {
        Direction::Increasing => Ordering::Greater,
        Direction::Decreasing => Ordering::Less,
    };
    let mut prev = ratio(start)?;
    for n in start..end {
        let next = ratio(n + 1)?;
        let diff = Rational::from(&next - &prev);
        if diff.cmp0() != want {
            return Ok(AnalysisReport::new(
                &vals.name,
                property,
                (start, end),
                Verdict::FirstViolation { index: n, witness: fmt_rational(&diff) },
            )
            .with_note("witness is u(n+2)/u(n+1) - u(n+1)/u(n)"));
        }
        prev = next;
    }
    Ok(AnalysisReport::new(&vals.name, property, (start, end), Verdict::HoldsOnRange)
        .with_note(format!("{} exact comparisons of consecutive ratios", end - start)))
}

/// How `nth_root_ratio_certify` decides each index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootMode {
    /// Exact integer comparison at every index.
    Exact,
    /// Certified interval logarithms with precision escalation, exact fallback.
    Log,
    /// `Exact` up to [`EXACT_MODE_LIMIT`], `Log` above.
    Auto,
}

impl FromStr for RootMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(RootMode::Exact),
            "log" => Ok(RootMode::Log),
            "auto" => Ok(RootMode::Auto),
            _ => Err(Error::Parse(format!("unknown certification mode {s:?}"))),
        }
    }
}

impl fmt::Display for RootMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootMode::Exact => "exact",
            RootMode::Log => "log",
            RootMode::Auto => "auto",
        })
    }
}

/// Largest index decided exactly in [`RootMode::Auto`].
pub const EXACT_MODE_LIMIT: i64 = 120;

/// Precisions tried in turn by the log mode before falling back to exact.
pub const LOG_PRECISIONS: [u32; 3] = [256, 512, 1024];

/// How a single index was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepMethod {
    Exact,
    Log(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootStep {
    pub n: i64,
    /// True when `u_{n+1}^{1/(n+1)} / u_n^{1/n} < u_n^{1/n} / u_{n-1}^{1/(n-1)}`.
    pub holds: bool,
    pub method: StepMethod,
}

fn root_exponents(n: i64) -> (u32, u32, u32) {
    let n = n as u64;
    let e = |v: u64| u32::try_from(v).expect("exponent fits in u32");
    (e(n * (n - 1)), e(n * (n + 1)), e(2 * (n * n - 1)))
}

fn pow_unless_one(base: &Integer, e: u32) -> Integer {
    if *base == 1 {
        Integer::from(1)
    } else {
        Integer::from(base.pow(e))
    }
}

/// Both sides of `u_{n+1}^{n(n-1)} u_{n-1}^{n(n+1)} < u_n^{2(n^2-1)}` with
/// denominators cleared.
fn root_sides(lo: &Rational, mid: &Rational, hi: &Rational, n: i64) -> (Integer, Integer) {
    let (e1, e2, e3) = root_exponents(n);
    let mut lhs = Integer::from(hi.numer().pow(e1));
    lhs *= Integer::from(lo.numer().pow(e2));
    lhs *= pow_unless_one(mid.denom(), e3);
    let mut rhs = Integer::from(mid.numer().pow(e3));
    rhs *= pow_unless_one(hi.denom(), e1);
    rhs *= pow_unless_one(lo.denom(), e2);
    (lhs, rhs)
}

/// Interval `[lo, hi]` containing `ln r` for `r > 0`, from correctly rounded
/// MPFR operations with outward rounding.
fn ln_interval(r: &Rational, prec: u32) -> (Float, Float) {
    let ln_dir = |x: &Integer, round: Round| {
        let mut f = Float::with_val_round(prec, x, round).0;
        f.ln_round(round);
        f
    };
    let (p, q) = (r.numer(), r.denom());
    let lo = Float::with_val_round(prec, &ln_dir(p, Round::Down) - &ln_dir(q, Round::Up), Round::Down).0;
    let hi = Float::with_val_round(prec, &ln_dir(p, Round::Up) - &ln_dir(q, Round::Down), Round::Up).0;
    (lo, hi)
}

/// `Some(holds)` when the interval for
/// `2(n^2-1) ln u_n - n(n-1) ln u_{n+1} - n(n+1) ln u_{n-1}` excludes zero.
fn root_step_log(lo: &Rational, mid: &Rational, hi: &Rational, n: i64, prec: u32) -> Option<bool> {
    let (e1, e2, e3) = root_exponents(n);
    let (l_lo, l_hi) = ln_interval(lo, prec);
    let (m_lo, m_hi) = ln_interval(mid, prec);
    let (h_lo, h_hi) = ln_interval(hi, prec);
    let scaled = |x: &Float, e: u32, round: Round| Float::with_val_round(prec, x * e, round).0;
    // lower bound of the difference uses lower bounds of the positive part
    let lhs_hi =
        Float::with_val_round(prec, &scaled(&h_hi, e1, Round::Up) + &scaled(&l_hi, e2, Round::Up), Round::Up).0;
    let lhs_lo =
        Float::with_val_round(prec, &scaled(&h_lo, e1, Round::Down) + &scaled(&l_lo, e2, Round::Down), Round::Down).0;
    let d_lo = Float::with_val_round(prec, &scaled(&m_lo, e3, Round::Down) - &lhs_hi, Round::Down).0;
    let d_hi = Float::with_val_round(prec, &scaled(&m_hi, e3, Round::Up) - &lhs_lo, Round::Up).0;
    if d_lo > 0 {
        Some(true)
    } else if d_hi <= 0 {
        Some(false)
    } else {
        None
    }
}

/// Decides one index of the root-ratio comparison.
pub fn nth_root_step(vals: &SequenceValues, n: i64, mode: RootMode) -> Result<RootStep> {
    if n < 2 {
        return Err(Error::Domain(format!("root-ratio comparison needs n >= 2, got {n}")));
    }
    let (lo, mid, hi) = (positive(vals, n - 1)?, positive(vals, n)?, positive(vals, n + 1)?);
    let use_log = match mode {
        RootMode::Exact => false,
        RootMode::Log => true,
        RootMode::Auto => n > EXACT_MODE_LIMIT,
    };
    if use_log {
        for prec in LOG_PRECISIONS {
            if let Some(holds) = root_step_log(lo, mid, hi, n, prec) {
                if holds {
                    return Ok(RootStep { n, holds, method: StepMethod::Log(prec) });
                }
                // A failing verdict is always confirmed exactly so it can carry a witness.
                break;
            }
        }
    }
    let (lhs, rhs) = root_sides(lo, mid, hi, n);
    Ok(RootStep { n, holds: lhs < rhs, method: StepMethod::Exact })
}

fn root_witness(vals: &SequenceValues, n: i64) -> Result<String> {
    let (lo, mid, hi) = (vals.at(n - 1)?, vals.at(n)?, vals.at(n + 1)?);
    let (lhs, rhs) = root_sides(lo, mid, hi, n);
    let d = Integer::from(&rhs - &lhs);
    if d.significant_bits() <= 1024 {
        Ok(d.to_string())
    } else {
        Ok(format!(
            "u({})={}, u({n})={}, u({})={}",
            n - 1,
            fmt_rational(lo),
            fmt_rational(mid),
            n + 1,
            fmt_rational(hi)
        ))
    }
}

/// Certifies that `n -> u_{n+1}^{1/(n+1)} / u_n^{1/n}` strictly decreases:
/// at each `n` in `[start, end]` the value at `n` is below the value at `n-1`.
pub fn nth_root_ratio_certify(vals: &SequenceValues, start: i64, end: i64, mode: RootMode) -> Result<AnalysisReport> {
    let min_start = (vals.offset + 1).max(2);
    if start < min_start {
        return Err(Error::Domain(format!("root-ratio certification must start at n >= {min_start}")));
    }
    vals.require(start - 1, end + 1)?;
    for m in start - 1..=end + 1 {
        positive(vals, m)?;
    }
    let property = "nth-root-ratio-decreasing";
    let mut exact = 0usize;
    let mut by_prec = [0usize; LOG_PRECISIONS.len()];
    for n in start..=end {
        let step = nth_root_step(vals, n, mode)?;
        match step.method {
            StepMethod::Exact => exact += 1,
            StepMethod::Log(p) => by_prec[LOG_PRECISIONS.iter().position(|&q| q == p).unwrap()] += 1,
        }
        if !step.holds {
            return Ok(AnalysisReport::new(
                &vals.name,
                property,
                (start, end),
                Verdict::FirstViolation { index: n, witness: root_witness(vals, n)? },
            )
            .with_note("witness is u(n)^(2(n^2-1)) - u(n+1)^(n(n-1)) u(n-1)^(n(n+1)) with denominators cleared, or the three terms when that number is large"));
        }
    }
    let log_counts: serde_json::Map<String, serde_json::Value> =
        LOG_PRECISIONS.iter().zip(by_prec).map(|(p, c)| (p.to_string(), json!(c))).collect();
    Ok(AnalysisReport::new(&vals.name, property, (start, end), Verdict::HoldsOnRange)
        .with_note(format!(
            "mode {mode}: {exact} indices decided exactly, {} by certified logs",
            by_prec.iter().sum::<usize>()
        ))
        .with_details(json!({ "mode": mode.to_string(), "exact": exact, "log_by_precision": log_counts })))
}

#[derive(Clone, Debug)]
pub struct RootProbe {
    pub n: i64,
    /// `u_{n+1}^{1/(n+1)} / u_n^{1/n}`.
    pub ratio: Float,
    /// `ratio - 1`.
    pub distance: Float,
}

/// Root ratios and their distance to 1 on `[start, end]` at `prec` bits.
pub fn nth_root_limit_probe(vals: &SequenceValues, start: i64, end: i64, prec: u32) -> Result<Vec<RootProbe>> {
    if start < 1 {
        return Err(Error::Domain("root ratios need n >= 1".into()));
    }
    vals.require(start, end + 1)?;
    let work = prec + 32;
    (start..=end)
        .map(|n| {
            let a = ln_rational(positive(vals, n + 1)?, work)? / (n + 1) as u32;
            let b = ln_rational(positive(vals, n)?, work)? / n as u32;
            let ratio = Float::with_val(prec, (a - b).exp());
            let distance = Float::with_val(prec, &ratio - 1u32);
            Ok(RootProbe { n, ratio, distance })
        })
        .collect()
}

/// Elementwise difference used by [`delta_op`].
pub trait Difference: Clone {
    /// `self - prev`.
    fn minus(&self, prev: &Self) -> Self;
}

impl Difference for Rational {
    fn minus(&self, prev: &Self) -> Self {
        Rational::from(self - prev)
    }
}

impl Difference for Float {
    fn minus(&self, prev: &Self) -> Self {
        Float::with_val(self.prec().max(prev.prec()), self - prev)
    }
}

impl Difference for f64 {
    fn minus(&self, prev: &Self) -> Self {
        self - prev
    }
}

/// `k`-fold backward difference `Delta u_n = u_n - u_{n-1}`. Element `i` of the
/// output belongs to element `i + k` of the input.
pub fn delta_op<T: Difference>(series: &[T], k: usize) -> Result<Vec<T>> {
    if k == 0 {
        return Err(Error::Domain("difference order must be >= 1".into()));
    }
    if series.len() <= k {
        return Err(Error::Coverage(format!("{k}-fold difference needs more than {k} values, got {}", series.len())));
    }
    let mut cur = series.to_vec();
    for _ in 0..k {
        cur = cur.windows(2).map(|w| w[1].minus(&w[0])).collect();
    }
    Ok(cur)
}

/// `ln(u_n) / n` for `n` in `[start, end]`.
pub fn log_over_n(vals: &SequenceValues, start: i64, end: i64, prec: u32) -> Result<Vec<Float>> {
    if start < 1 {
        return Err(Error::Domain("ln(u_n)/n needs n >= 1".into()));
    }
    vals.require(start, end)?;
    (start..=end).map(|n| Ok(ln_rational(positive(vals, n)?, prec)? / n as u32)).collect()
}

/// Fitted `R^2 u_n ~ 1 + c / n^alpha`, with `beta` the assumed horizon of the
/// expansion.
#[derive(Clone, Debug)]
pub struct PuiseuxFit {
    pub c: Float,
    pub alpha: Float,
    pub beta: Float,
    pub window: (i64, i64),
    /// `max |c n^-alpha / (R^2 u_n - 1) - 1|` over the window.
    pub residual: Float,
    pub points: usize,
}

impl PuiseuxFit {
    /// Parameters given directly rather than fitted.
    pub fn from_params(c: f64, alpha: f64, beta: f64) -> Self {
        let f = |v: f64| Float::with_val(64, v);
        PuiseuxFit { c: f(c), alpha: f(alpha), beta: f(beta), window: (0, 0), residual: f(0.0), points: 0 }
    }
}

/// Minimum number of points in a default fit window.
pub const MIN_WINDOW: usize = 32;

/// Minimum number of points accepted in any fit window.
pub const MIN_FIT_POINTS: usize = 8;

/// The last 75% of `[first, last]`, widened to at least [`MIN_WINDOW`] points
/// when the data allows.
pub fn default_window(first: i64, last: i64) -> (i64, i64) {
    let avail = (last - first + 1).max(0);
    let take = ((avail * 3 + 3) / 4).max(MIN_WINDOW as i64).min(avail);
    (last - take + 1, last)
}

/// Least-squares fit of `ln|R^2 u_n - 1|` against `ln n` on the window.
/// `ratio2` is indexed like the output of [`ratio2_seq`].
pub fn puiseux_fit(
    ratio2: &SequenceValues,
    window: Option<(i64, i64)>,
    beta: Option<f64>,
    prec: u32,
) -> Result<PuiseuxFit> {
    let (s, e) = window.unwrap_or_else(|| default_window(ratio2.offset.max(1), ratio2.end()));
    if s < 1 {
        return Err(Error::Domain("fit window must start at n >= 1".into()));
    }
    ratio2.require(s, e)?;
    let points = (e - s + 1) as usize;
    if points < MIN_FIT_POINTS {
        return Err(Error::Coverage(format!("fit window has {points} points, need >= {MIN_FIT_POINTS}")));
    }
    let mut sign = Ordering::Equal;
    let mut xs = Vec::with_capacity(points);
    let mut ys = Vec::with_capacity(points);
    let mut devs = Vec::with_capacity(points);
    for n in s..=e {
        let d = Rational::from(ratio2.at(n)? - 1u32);
        let sg = d.cmp0();
        if sg == Ordering::Equal {
            return Err(Error::Precondition(format!("R^2 u_n - 1 vanishes at n={n}")));
        }
        if sign != Ordering::Equal && sg != sign {
            return Err(Error::Precondition(format!("R^2 u_n - 1 changes sign in the window at n={n}")));
        }
        sign = sg;
        xs.push(Float::with_val(prec, n).ln());
        ys.push(ln_rational(&Rational::from(d.abs_ref()), prec)?);
        devs.push(Float::with_val(prec, &d));
    }
    let line = least_squares(&xs, &ys, prec)?;
    let alpha = Float::with_val(prec, -&line.slope);
    if alpha <= 0 {
        return Err(Error::Precondition(format!("fitted exponent {} is not positive", fmt_float(&alpha, 10))));
    }
    let mut c = line.intercept.exp();
    if sign == Ordering::Less {
        c = -c;
    }
    let mut residual = Float::with_val(prec, 0);
    for (x, d) in xs.iter().zip(&devs) {
        let model = Float::with_val(prec, -Float::with_val(prec, &alpha * x)).exp() * &c;
        let r = (model / d - 1u32).abs();
        if r > residual {
            residual = r;
        }
    }
    let beta = match beta {
        Some(b) => Float::with_val(prec, b),
        None => Float::with_val(prec, &alpha + 1u32),
    };
    Ok(PuiseuxFit { c, alpha, beta, window: (s, e), residual, points })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ROrder {
    pub r: u32,
    pub flavor: Flavor,
}

impl fmt::Display for ROrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "asymptotically {}-{}", self.r, self.flavor)
    }
}

fn floor_to_i64(x: Float) -> i64 {
    x.floor().to_integer().and_then(|i| i.to_i64()).unwrap_or(i64::MIN)
}

/// Order `r` of asymptotic log-behavior implied by `R^2 u_n = 1 + c/n^alpha + ...`
/// with correction horizon `beta`:
///
/// * `c > 0, alpha < 2`: `floor(beta/alpha)`, convex
/// * `c > 0, alpha >= 2`: `floor((beta-alpha)/2) + 1`, convex
/// * `c < 0, alpha < 2`: `floor(beta/alpha)`, concave
pub fn r_order(fit: &PuiseuxFit) -> Result<ROrder> {
    if fit.c.is_zero() {
        return Err(Error::Precondition("c must be nonzero".into()));
    }
    if fit.alpha <= 0 {
        return Err(Error::Precondition("alpha must be positive".into()));
    }
    let prec = fit.alpha.prec().max(fit.beta.prec());
    let below_two = fit.alpha < 2;
    let convex = fit.c > 0;
    if !convex && !below_two {
        return Err(Error::OutOfScope("no order rule for c < 0 with alpha >= 2".into()));
    }
    let r = if below_two {
        floor_to_i64(Float::with_val(prec, &fit.beta / &fit.alpha))
    } else {
        floor_to_i64(Float::with_val(prec, &fit.beta - &fit.alpha) / 2u32) + 1
    };
    if r < 1 {
        return Err(Error::Domain(format!("beta is too small to give an order (r = {r})")));
    }
    let flavor = if convex { Flavor::Convex } else { Flavor::Concave };
    Ok(ROrder { r: r as u32, flavor })
}
