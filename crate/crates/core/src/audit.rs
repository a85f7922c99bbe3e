//! Measurements of asymptotic formulas, explicit bounds and decay exponents
//! against exact values. Bounds are never assumed; violations and thresholds are reported.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fit::least_squares;
use crate::kernel::{fmt_float, fmt_rational, ln_rational, pi, sqrt2};
use crate::logbehavior::{default_window, MIN_FIT_POINTS};
use crate::report::{AnalysisReport, Verdict};
use crate::sequences::{apery, apery_products, SequenceName, SequenceStore, SequenceValues};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymOrder {
    Main,
    Corrected,
}

impl FromStr for AsymOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main" => Ok(AsymOrder::Main),
            "corrected" => Ok(AsymOrder::Corrected),
            _ => Err(Error::Parse(format!("unknown asymptotic order {s:?}"))),
        }
    }
}

impl fmt::Display for AsymOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AsymOrder::Main => "main",
            AsymOrder::Corrected => "corrected",
        })
    }
}

#[derive(Clone, Debug)]
pub struct AsymptoticEval {
    pub n: i64,
    pub exact: Rational,
    pub formula: Float,
    pub order: AsymOrder,
}

impl AsymptoticEval {
    /// `|formula / exact - 1|`, recomputed on every call.
    pub fn relative_error(&self) -> Float {
        let prec = self.formula.prec();
        let ratio = Float::with_val(prec, &self.formula / &Float::with_val(prec, &self.exact));
        (ratio - 1u32).abs()
    }
}

/// `(1+sqrt 2)^(4n+2) / (2 pi n sqrt 2)^(3/2)`, times `1 - (48 - 15 sqrt 2)/(64 n)`
/// for the corrected order, paired with the exact Apéry number.
pub fn apery_asymptotic(n: i64, order: AsymOrder, prec: u32) -> Result<AsymptoticEval> {
    if n < 1 {
        return Err(Error::Domain(format!("asymptotic formula needs n >= 1, got {n}")));
    }
    let work = prec + 32;
    let r2 = sqrt2(work);
    let base = Float::with_val(work, &r2 + 1u32);
    let e = u32::try_from(4 * n + 2).map_err(|_| Error::Domain("n too large".into()))?;
    let growth = base.pow(e);
    let mut x = pi(work) * 2u32;
    x *= n as u32;
    x *= &r2;
    let denom = Float::with_val(work, x.sqrt_ref()) * &x;
    let mut formula = growth / denom;
    if order == AsymOrder::Corrected {
        let c = Float::with_val(work, 48u32) - Float::with_val(work, &r2 * 15u32);
        let corr = 1u32 - c / (64 * n as u32);
        formula *= corr;
    }
    Ok(AsymptoticEval { n, exact: Rational::from(apery(n)?), formula: Float::with_val(prec, &formula), order })
}

/// `n, exact, formula, relative_error` rows for external plotting.
pub fn write_asymptotic_csv(evals: &[AsymptoticEval], digits: usize, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    out.write_record(["n", "order", "exact", "formula", "relative_error"]).map_err(csv_err)?;
    for ev in evals {
        out.write_record([
            ev.n.to_string(),
            ev.order.to_string(),
            fmt_rational(&ev.exact),
            fmt_float(&ev.formula, digits),
            fmt_float(&ev.relative_error(), 8),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Lower and upper bound at one index; `None` means unbounded on that side.
pub type BoundPair = (Option<Rational>, Option<Rational>);

fn thresholds(violations: &[i64], start: i64, end: i64) -> Option<i64> {
    match violations.last() {
        None => Some(start),
        Some(&n) if n < end => Some(n + 1),
        Some(_) => None,
    }
}

/// Exact check of `lower(n) <= u_n <= upper(n)` for every `n` in `[start, end]`.
///
/// All violations are listed per side in the details. The verdict is
/// `HoldsOnRange` without violations, `Threshold` when both sides hold on a
/// tail of the range, and otherwise `FirstViolation` at the earliest failing
/// index with witness `u_n - lower` or `upper - u_n` (negative when violated).
pub fn bounds_audit(
    vals: &SequenceValues,
    property: &str,
    start: i64,
    end: i64,
    mut bound: impl FnMut(i64) -> Result<BoundPair>,
) -> Result<AnalysisReport> {
    vals.require(start, end)?;
    let mut low_bad = Vec::new();
    let mut up_bad = Vec::new();
    let mut first: Option<(i64, Rational)> = None;
    let mut witnesses = Vec::new();
    for n in start..=end {
        let u = vals.at(n)?;
        let (lo, hi) = bound(n)?;
        for (side, margin) in
            [("lower", lo.map(|l| Rational::from(u - &l))), ("upper", hi.map(|h| Rational::from(&h - u)))]
        {
            let Some(m) = margin else { continue };
            if m.cmp0() == std::cmp::Ordering::Less {
                if side == "lower" {
                    low_bad.push(n);
                } else {
                    up_bad.push(n);
                }
                witnesses.push(json!({ "n": n, "side": side, "margin": fmt_rational(&m) }));
                if first.is_none() {
                    first = Some((n, m));
                }
            }
        }
    }
    let lt = thresholds(&low_bad, start, end);
    let ut = thresholds(&up_bad, start, end);
    let verdict = match (&first, lt, ut) {
        (None, _, _) => Verdict::HoldsOnRange,
        (Some(_), Some(a), Some(b)) => Verdict::Threshold { n: a.max(b) },
        (Some((n, m)), _, _) => Verdict::FirstViolation { index: *n, witness: fmt_rational(m) },
    };
    let side_note = |side: &str, bad: &[i64], t: Option<i64>| match (bad.is_empty(), t) {
        (true, _) => format!("{side} bound holds at every index"),
        (false, Some(t)) => format!("{side} bound fails at {} indices, holds on [{t}, {end}]", bad.len()),
        (false, None) => format!("{side} bound fails at {} indices, including the range end", bad.len()),
    };
    Ok(AnalysisReport::new(&vals.name, property, (start, end), verdict)
        .with_note(side_note("lower", &low_bad, lt))
        .with_note(side_note("upper", &up_bad, ut))
        .with_note("margins are u(n) - lower and upper - u(n); negative means violated")
        .with_details(json!({
            "lower_violations": low_bad,
            "upper_violations": up_bad,
            "lower_threshold": lt,
            "upper_threshold": ut,
            "violations": witnesses,
        })))
}

/// Which weight profile to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    /// `h_k = k^4 / ((4(k-1)^2 - 1)(n+k)^2)`, `k >= 1`.
    A,
    /// `f_k = (n-k)(3k^2+3k+1) / n^4`, `0 <= k <= n-1`.
    B,
}

impl FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "h" => Ok(WeightKind::A),
            "b" | "f" => Ok(WeightKind::B),
            _ => Err(Error::Parse(format!("unknown weight profile {s:?}"))),
        }
    }
}

pub fn weight_profile_eval(kind: WeightKind, n: i64, k: i64) -> Result<Rational> {
    if n < 1 {
        return Err(Error::Domain(format!("weight profiles need n >= 1, got {n}")));
    }
    match kind {
        WeightKind::A => {
            if k < 1 {
                return Err(Error::Domain(format!("h_k needs k >= 1, got {k}")));
            }
            let num = Integer::from(k).pow(4);
            let den = Integer::from(4 * (k - 1) * (k - 1) - 1) * Integer::from(n + k).square();
            Ok(Rational::from((num, den)))
        }
        WeightKind::B => {
            if !(0..n).contains(&k) {
                return Err(Error::Domain(format!("f_k needs 0 <= k <= n-1, got k={k} with n={n}")));
            }
            let num = Integer::from(n - k) * (3 * k * k + 3 * k + 1);
            Ok(Rational::from((num, Integer::from(n).pow(4))))
        }
    }
}

/// `(1/n^3) sum_{k=1}^n C(n,k)^2 C(n+k,k)^2 h_k`, which equals `a_n`.
pub fn a_sandwich(n: i64) -> Result<Rational> {
    let mut sum = Rational::new();
    for (k, p) in apery_products(n.max(0)).iter().enumerate().skip(1) {
        sum += weight_profile_eval(WeightKind::A, n, k as i64)? * Integer::from(p.square_ref());
    }
    Ok(sum / Integer::from(n).pow(3))
}

/// `sum_{k=0}^{n-1} f_k (n-k)/n C(n,k)^2 C(n+k,k)^2`, which equals `b_n`
/// because `C(n-1,k) = C(n,k) (n-k)/n`.
pub fn b_sandwich(n: i64) -> Result<Rational> {
    b_weighted(n, true)
}

/// `sum_{k=0}^{n-1} f_k C(n,k)^2 C(n+k,k)^2` without the `(n-k)/n` factor.
/// This differs from `b_n` (for `n = 2` it is `127/8`); it is kept to document
/// the discrepancy.
pub fn b_sandwich_literal(n: i64) -> Result<Rational> {
    b_weighted(n, false)
}

fn b_weighted(n: i64, corrected: bool) -> Result<Rational> {
    let mut sum = Rational::new();
    for (k, p) in apery_products(n.max(0)).iter().enumerate().take(n.max(0) as usize) {
        let k = k as i64;
        let mut w = weight_profile_eval(WeightKind::B, n, k)? * Integer::from(p.square_ref());
        if corrected {
            w *= Rational::from((n - k, n));
        }
        sum += w;
    }
    Ok(sum)
}

fn bound_vals(store: &SequenceStore, name: SequenceName, start: i64, end: i64) -> Result<SequenceValues> {
    if start < name.offset() {
        return Err(Error::Domain(format!("{name} starts at n={}", name.offset())));
    }
    store.range(name, start, end)
}

/// `A_n / (4 n^5) <= a_n <= A_n / (16 n^3)` checked exactly on `[start, end]`.
pub fn a_bounds_audit(store: &SequenceStore, start: i64, end: i64) -> Result<AnalysisReport> {
    let a = bound_vals(store, SequenceName::A, start, end)?;
    let big_a = bound_vals(store, SequenceName::Apery, start, end)?;
    let report = bounds_audit(&a, "bounds A(n)/(4n^5) <= a(n) <= A(n)/(16n^3)", start, end, |n| {
        let s = big_a.at(n)?;
        let lo = Rational::from(s / Integer::from(n).pow(5)) / 4u32;
        let hi = Rational::from(s / Integer::from(n).pow(3)) / 16u32;
        Ok((Some(lo), Some(hi)))
    })?;
    let profile = a_profile(end)?;
    let details = merge(report.details.clone(), profile.to_json());
    Ok(report
        .with_note(format!(
            "weights h_k on k in [1, {end}]: min {} at k={}, max {} at k={}; the claimed range is [1/(4n^2), 1/16]",
            fmt_float(&Float::with_val(64, &profile.min.1), 6),
            profile.min.0,
            fmt_float(&Float::with_val(64, &profile.max.1), 6),
            profile.max.0,
        ))
        .with_details(details))
}

fn merge(base: Value, extra: Value) -> Value {
    match (base, extra) {
        (Value::Object(mut a), Value::Object(b)) => {
            a.extend(b);
            Value::Object(a)
        }
        (Value::Null, e) => e,
        (b, _) => b,
    }
}

/// `S_n / (4 n^2) <= b_n <= (4/9) S_n` checked exactly on `[start, end]`.
pub fn b_bounds_audit(store: &SequenceStore, start: i64, end: i64) -> Result<AnalysisReport> {
    let b = bound_vals(store, SequenceName::B, start, end)?;
    let s = bound_vals(store, SequenceName::S, start, end)?;
    let report = bounds_audit(&b, "bounds S(n)/(4n^2) <= b(n) <= (4/9)S(n)", start, end, |n| {
        let sn = s.at(n)?;
        let lo = Rational::from(sn / Integer::from(n).square()) / 4u32;
        let hi = sn * Rational::from((4, 9));
        Ok((Some(lo), Some(hi)))
    })?;
    let profile = b_profile(end, 128)?;
    let mut report = report;
    if end > 4 {
        report = report.with_note(format!(
            "f(0) = 1/n^3 lies below 1/(4n^2) for n > 4 (at n={end}: {} vs {})",
            fmt_float(&Float::with_val(64, &profile.f_first), 6),
            fmt_float(&Float::with_val(64, &Rational::from((1, 4 * end * end))), 6),
        ));
    }
    report = report
        .with_note("the series 4/9 + ... and 1/(4n^2) + ... match n * f(k) (an n^3 normalization), not f(k) itself")
        .with_note("the smaller critical point (n-1-sqrt(n^2+n))/3 is negative and lies outside [0, n-1]");
    let details = merge(report.details.clone(), json!({ "b_profile": profile.to_json() }));
    Ok(report.with_details(details))
}

/// Discrete extremes of the `h_k` weights for one `n`.
#[derive(Clone, Debug)]
pub struct AProfile {
    pub n: i64,
    pub min: (i64, Rational),
    pub max: (i64, Rational),
    pub h_first: Rational,
    pub h_last: Rational,
}

impl AProfile {
    pub fn to_json(&self) -> Value {
        json!({
            "a_profile": {
                "n": self.n,
                "h_min": { "k": self.min.0, "value": fmt_rational(&self.min.1) },
                "h_max": { "k": self.max.0, "value": fmt_rational(&self.max.1) },
                "h_1": fmt_rational(&self.h_first),
                "h_n": fmt_rational(&self.h_last),
                "claimed_lower": fmt_rational(&Rational::from((1, 4 * self.n * self.n))),
                "claimed_upper": "1/16",
            }
        })
    }
}

pub fn a_profile(n: i64) -> Result<AProfile> {
    let hs = (1..=n).map(|k| Ok((k, weight_profile_eval(WeightKind::A, n, k)?))).collect::<Result<Vec<_>>>()?;
    let min = hs.iter().min_by(|x, y| x.1.cmp(&y.1)).cloned().unwrap();
    let max = hs.iter().max_by(|x, y| x.1.cmp(&y.1)).cloned().unwrap();
    Ok(AProfile { n, min, max, h_first: hs[0].1.clone(), h_last: hs[hs.len() - 1].1.clone() })
}

/// The `f_k` profile for one `n`: continuous critical points, endpoint values,
/// discrete extremes, and the two published series evaluated at `n`.
#[derive(Clone, Debug)]
pub struct BProfile {
    pub n: i64,
    /// `((n-1) + sqrt(n^2+n)) / 3` and `((n-1) - sqrt(n^2+n)) / 3`.
    pub k_star: (Float, Float),
    /// `f` at the two critical points, as a real polynomial in `k`.
    pub f_at_k_star: (Float, Float),
    /// `|9k^2 - 6(n-1)k - (3n-1)|` at the larger critical point.
    pub critical_residual: Float,
    pub f_first: Rational,
    pub f_last: Rational,
    pub discrete_max: (i64, Rational),
    pub discrete_min: (i64, Rational),
    /// `4/9 + 2/(3n) + 5/(12n^2) + 7/(72n^3)`.
    pub series_max: Rational,
    /// `1/(4n^2) + 1/(8n^3)`.
    pub series_min: Rational,
}

impl BProfile {
    pub fn to_json(&self) -> Value {
        let f = |x: &Float| fmt_float(x, 12);
        let q = |x: &Rational| fmt_rational(x);
        json!({
            "n": self.n,
            "k_star_plus": f(&self.k_star.0),
            "k_star_minus": f(&self.k_star.1),
            "f_at_k_star_plus": f(&self.f_at_k_star.0),
            "f_at_k_star_minus": f(&self.f_at_k_star.1),
            "critical_residual": fmt_float(&self.critical_residual, 6),
            "f_0": q(&self.f_first),
            "f_n_minus_1": q(&self.f_last),
            "discrete_max": { "k": self.discrete_max.0, "value": q(&self.discrete_max.1) },
            "discrete_min": { "k": self.discrete_min.0, "value": q(&self.discrete_min.1) },
            "series_max": q(&self.series_max),
            "series_min": q(&self.series_min),
            "n_times_discrete_max": q(&Rational::from(&self.discrete_max.1 * self.n)),
        })
    }
}

fn f_real(n: i64, k: &Float) -> Float {
    let prec = k.prec();
    let three_k2 = Float::with_val(prec, k.square_ref()) * 3u32;
    let poly = three_k2 + Float::with_val(prec, k * 3u32) + 1u32;
    let lead = Float::with_val(prec, n) - k;
    lead * poly / Float::with_val(prec, n).pow(4u32)
}

pub fn b_profile(n: i64, prec: u32) -> Result<BProfile> {
    if n < 1 {
        return Err(Error::Domain("b profile needs n >= 1".into()));
    }
    let root = Float::with_val(prec, n * n + n).sqrt();
    let base = Float::with_val(prec, n - 1);
    let kp = Float::with_val(prec, &base + &root) / 3u32;
    let km = Float::with_val(prec, &base - &root) / 3u32;
    let resid = {
        let v = Float::with_val(prec, kp.square_ref()) * 9u32
            - Float::with_val(prec, &kp * (6 * (n - 1)) as u32)
            - (3 * n - 1) as u32;
        v.abs()
    };
    let fs = (0..n).map(|k| Ok((k, weight_profile_eval(WeightKind::B, n, k)?))).collect::<Result<Vec<_>>>()?;
    let dmax = fs.iter().max_by(|x, y| x.1.cmp(&y.1)).cloned().unwrap();
    let dmin = fs.iter().min_by(|x, y| x.1.cmp(&y.1)).cloned().unwrap();
    let nn = Integer::from(n);
    let series_max = Rational::from((4, 9))
        + Rational::from((2, Integer::from(&nn * 3)))
        + Rational::from((5, Integer::from(nn.square_ref()) * 12))
        + Rational::from((7, Integer::from((&nn).pow(3)) * 72));
    let series_min =
        Rational::from((1, Integer::from(nn.square_ref()) * 4)) + Rational::from((1, Integer::from((&nn).pow(3)) * 8));
    Ok(BProfile {
        n,
        f_at_k_star: (f_real(n, &kp), f_real(n, &km)),
        k_star: (kp, km),
        critical_residual: resid,
        f_first: fs[0].1.clone(),
        f_last: fs[fs.len() - 1].1.clone(),
        discrete_max: dmax,
        discrete_min: dmin,
        series_max,
        series_min,
    })
}

#[derive(Clone, Debug)]
pub struct DecayFit {
    /// `u_n ~ C base^n / n^t`.
    pub t: Float,
    pub intercept: Float,
    pub window: (i64, i64),
    pub max_abs_residual: Float,
}

/// Slope of `ln(u_n / base^n)` against `ln n` on the window, reported as
/// `t = -slope`.
pub fn decay_exponent_fit(
    vals: &SequenceValues,
    growth_base: &Float,
    window: Option<(i64, i64)>,
    prec: u32,
) -> Result<DecayFit> {
    if *growth_base <= 0 {
        return Err(Error::Domain("growth base must be positive".into()));
    }
    let (s, e) = window.unwrap_or_else(|| default_window(vals.offset.max(1), vals.end()));
    if s < 1 {
        return Err(Error::Domain("fit window must start at n >= 1".into()));
    }
    vals.require(s, e)?;
    let points = (e - s + 1) as usize;
    if points < MIN_FIT_POINTS {
        return Err(Error::Coverage(format!("fit window has {points} points, need >= {MIN_FIT_POINTS}")));
    }
    let work = prec + 32;
    let ln_base = Float::with_val(work, growth_base.ln_ref());
    let mut xs = Vec::with_capacity(points);
    let mut ys = Vec::with_capacity(points);
    for n in s..=e {
        let u = vals.at(n)?;
        if u.cmp0() != std::cmp::Ordering::Greater {
            return Err(Error::Domain(format!("{}({n}) is not positive", vals.name)));
        }
        let y = ln_rational(u, work)? - Float::with_val(work, &ln_base * n);
        xs.push(Float::with_val(prec, n).ln());
        ys.push(Float::with_val(prec, &y));
    }
    let line = least_squares(&xs, &ys, prec)?;
    Ok(DecayFit { t: -line.slope, intercept: line.intercept, window: (s, e), max_abs_residual: line.max_abs_residual })
}
