//! Linear recurrences with polynomial coefficients,
//! `sum_{i=0}^{d} p_i(n) u_{n+i} = 0` for `n >= offset`.

pub mod catalog;
mod guess;
mod linalg;
mod roots;

pub use guess::{guess_recurrence, GUESS_MARGIN};
pub use linalg::{bareiss_echelon, nullspace};
pub use roots::{roots_real, CharPolyResult, RealRoot, RootKind};

use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::kernel::{fmt_float, IntPoly};
use crate::report::{AnalysisReport, Verdict};
use crate::sequences::SequenceValues;

/// A P-recurrence held in canonical form: the coefficient vector is primitive
/// and `p_d` has a positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PRecurrence {
    coeffs: Vec<IntPoly>,
    offset: i64,
}

impl PRecurrence {
    /// Builds and canonicalizes `sum p_i(n) u_{n+i} = 0`. Requires at least two
    /// coefficients with `p_0` and `p_d` nonzero.
    pub fn new(coeffs: Vec<IntPoly>, offset: i64) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Domain("a recurrence needs order >= 1".into()));
        }
        if coeffs[0].is_zero() || coeffs.last().unwrap().is_zero() {
            return Err(Error::Domain("p_0 and p_d must be nonzero".into()));
        }
        let mut g = coeffs.iter().fold(Integer::new(), |g, p| g.gcd(&p.content()));
        if coeffs.last().unwrap().leading().unwrap().is_negative() {
            g = -g;
        }
        let coeffs = coeffs.iter().map(|p| p.div_exact_scalar(&g)).collect();
        Ok(PRecurrence { coeffs, offset })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[IntPoly] {
        &self.coeffs
    }

    /// Largest coefficient degree.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().filter_map(IntPoly::degree).max().unwrap_or(0)
    }

    /// Degree of each `p_i` (`None` for a zero coefficient).
    pub fn degree_profile(&self) -> Vec<Option<usize>> {
        self.coeffs.iter().map(IntPoly::degree).collect()
    }

    /// Same relation asserted from a different starting index.
    pub fn with_offset(mut self, offset: i64) -> Self {
        self.offset = offset;
        self
    }

    /// `sum p_i(n) u_{n+i}` evaluated exactly.
    pub fn residue(&self, vals: &SequenceValues, n: i64) -> Result<Rational> {
        let mut acc = Rational::new();
        for (i, p) in self.coeffs.iter().enumerate() {
            let u = vals.at(n + i as i64)?;
            acc += Rational::from(u * &p.eval_i64(n));
        }
        Ok(acc)
    }

    /// True when `other` is a nonzero rational multiple of `self`.
    pub fn is_proportional_to(&self, other: &PRecurrence) -> bool {
        // Both are canonical, so proportional means equal coefficient vectors.
        self.coeffs == other.coeffs
    }

    /// `sum_i [n^D] p_i * x^i` with `D` the maximal coefficient degree, made
    /// primitive with a positive leading coefficient.
    pub fn characteristic_poly(&self) -> IntPoly {
        let top = self.degree();
        IntPoly::new(self.coeffs.iter().map(|p| p.coeff(top)).collect()).primitive_part()
    }

    /// Stable text form: `order`, `offset`, then one `p<i>` line of ascending
    /// coefficients per polynomial.
    pub fn to_text(&self) -> String {
        let mut s = String::from("# sum_i p_i(n) u(n+i) = 0; p_i coefficients ascending in n\n");
        s.push_str(&format!("order {}\noffset {}\n", self.order(), self.offset));
        for (i, p) in self.coeffs.iter().enumerate() {
            s.push_str(&format!("p{i}"));
            if p.is_zero() {
                s.push_str(" 0");
            }
            for c in p.coeffs() {
                s.push_str(&format!(" {c}"));
            }
            s.push('\n');
        }
        s
    }
}

impl FromStr for PRecurrence {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut order = None;
        let mut offset = None;
        let mut coeffs: Vec<Option<IntPoly>> = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap();
            let bad = || Error::Parse(format!("recurrence line {line:?}"));
            match key {
                "order" => {
                    let d: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                    order = Some(d);
                    coeffs = vec![None; d + 1];
                }
                "offset" => offset = Some(parts.next().ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?),
                k if k.starts_with('p') => {
                    let i: usize = k[1..].parse().map_err(|_| bad())?;
                    let slot = coeffs.get_mut(i).ok_or_else(bad)?;
                    let cs =
                        parts.map(|c| Integer::from_str_radix(c, 10).map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
                    *slot = Some(IntPoly::new(cs));
                }
                _ => return Err(bad()),
            }
        }
        let order = order.ok_or_else(|| Error::Parse("recurrence text lacks `order`".into()))?;
        let offset = offset.ok_or_else(|| Error::Parse("recurrence text lacks `offset`".into()))?;
        let coeffs = coeffs
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::Parse(format!("recurrence text lacks p{i}"))))
            .collect::<Result<Vec<_>>>()?;
        debug_assert_eq!(coeffs.len(), order + 1);
        PRecurrence::new(coeffs, offset)
    }
}

impl fmt::Display for PRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let shift = if i == 0 { "n".to_string() } else { format!("n+{i}") };
            write!(f, "({}) u({shift})", p.display_in("n"))?;
        }
        f.write_str(" = 0")
    }
}

/// Checks `sum p_i(n) u_{n+i} = 0` for every `n` in `[start, end]`.
pub fn verify_recurrence(rec: &PRecurrence, vals: &SequenceValues, start: i64, end: i64) -> Result<AnalysisReport> {
    vals.require(start, end + rec.order() as i64)?;
    let property = "recurrence";
    for n in start..=end {
        let r = rec.residue(vals, n)?;
        if !r.is_zero() {
            return Ok(AnalysisReport::new(
                &vals.name,
                property,
                (start, end),
                Verdict::FirstViolation { index: n, witness: crate::kernel::fmt_rational(&r) },
            )
            .with_note("witness is the nonzero residue sum_i p_i(n) u(n+i) of the canonical recurrence"));
        }
    }
    Ok(AnalysisReport::new(&vals.name, property, (start, end), Verdict::HoldsOnRange)
        .with_note(format!("zero residue at all {} indices", end - start + 1)))
}

/// Candidate limit of `u_{n+1}/u_n` together with the empirical tail ratio.
#[derive(Clone, Debug)]
pub struct RatioLimit {
    pub limit: Float,
    pub exact_form: Option<String>,
    pub tail_index: i64,
    pub empirical: Float,
    pub gap: Float,
    pub note: String,
}

/// Dominant characteristic root of `rec`, cross-checked against the last
/// ratio `u_{N+1}/u_N` available in `vals`.
pub fn ratio_limit(rec: &PRecurrence, vals: &SequenceValues, prec: u32) -> Result<RatioLimit> {
    let cp = roots_real(&rec.characteristic_poly(), prec)?;
    let dom = cp.dominant_root()?;
    let n = vals.end() - 1;
    let (num, den) = (vals.at(n + 1)?, vals.at(n)?);
    if den.is_zero() {
        return Err(Error::ZeroTerm { index: n });
    }
    let empirical = Float::with_val(prec, &Rational::from(num / den));
    let gap = Float::with_val(prec, &empirical - &dom.value).abs();
    let note = format!(
        "dominant characteristic root {} (Poincare-Perron candidate); empirical ratio at n={n} is {}, gap {}. \
         Agreement is evidence, not a proof of convergence for this particular solution.",
        fmt_float(&dom.value, 20),
        fmt_float(&empirical, 20),
        fmt_float(&gap, 6),
    );
    Ok(RatioLimit { limit: dom.value.clone(), exact_form: dom.exact.clone(), tail_index: n, empirical, gap, note })
}

/// `|u_{n+1}/u_n - limit|` for `n` in `[start, end]`.
pub fn ratio_gaps(vals: &SequenceValues, limit: &Float, start: i64, end: i64) -> Result<Vec<(i64, Float)>> {
    vals.require(start, end + 1)?;
    (start..=end)
        .map(|n| {
            let den = vals.at(n)?;
            if den.is_zero() {
                return Err(Error::ZeroTerm { index: n });
            }
            let r = Float::with_val(limit.prec(), &Rational::from(vals.at(n + 1)? / den));
            Ok((n, Float::with_val(limit.prec(), &r - limit).abs()))
        })
        .collect()
}
