//! Exact evaluation of the four binomial-sum sequences and extension of any
//! sequence along a P-recurrence.
//!
//! * `a_n = (1/n) sum_{k=0}^{n-1} C(n-1,k)^2 C(n+k,k)^2 / (4k^2 - 1)`, `n >= 1`
//! * `b_n = (1/n^3) sum_{k=0}^{n-1} (3k^2+3k+1) C(n-1,k)^2 C(n+k,k)^2`, `n >= 1`
//! * Apéry numbers `A_n = sum_{k=0}^{n} C(n,k)^2 C(n+k,k)^2`, `n >= 0`
//! * `S_n = sum_{k=0}^{n-1} C(n-1,k)^2 C(n+k,k)^2`, `n >= 1`

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::kernel::{binomial_i64, fmt_rational, parse_rational};
use crate::recurrence::PRecurrence;

/// Which of the two equivalent binomial forms of `a_n` to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AForm {
    /// Uses `C(n+k, k)^2`.
    Primary,
    /// Uses `C(-n-1, k)^2`.
    Dual,
}

/// The built-in sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SequenceName {
    A,
    B,
    Apery,
    S,
}

impl SequenceName {
    pub const ALL: [SequenceName; 4] = [SequenceName::A, SequenceName::B, SequenceName::Apery, SequenceName::S];

    /// First valid index.
    pub fn offset(self) -> i64 {
        match self {
            SequenceName::Apery => 0,
            _ => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SequenceName::A => "a",
            SequenceName::B => "b",
            SequenceName::Apery => "apery",
            SequenceName::S => "s",
        }
    }

    /// Exact term at index `n`, straight from the defining sum.
    pub fn term(self, n: i64) -> Result<Rational> {
        match self {
            SequenceName::A => a_direct(n, AForm::Primary),
            SequenceName::B => b_direct(n),
            SequenceName::Apery => apery(n).map(Rational::from),
            SequenceName::S => s_sum(n).map(Rational::from),
        }
    }
}

impl fmt::Display for SequenceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SequenceName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(SequenceName::A),
            "b" => Ok(SequenceName::B),
            "apery" => Ok(SequenceName::Apery),
            "s" => Ok(SequenceName::S),
            _ => Err(Error::Parse(format!("unknown sequence {s:?}"))),
        }
    }
}

/// A contiguous run of exact terms `u_offset, u_{offset+1}, ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceValues {
    pub name: String,
    pub offset: i64,
    pub values: Vec<Rational>,
}

impl SequenceValues {
    pub fn new(name: impl Into<String>, offset: i64, values: Vec<Rational>) -> Self {
        SequenceValues { name: name.into(), offset, values }
    }

    /// Terms `u_n` for `n` in `offset..offset + len` generated by `f`.
    pub fn from_fn(name: impl Into<String>, offset: i64, len: usize, mut f: impl FnMut(i64) -> Rational) -> Self {
        let values = (0..len as i64).map(|i| f(offset + i)).collect();
        SequenceValues::new(name, offset, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Last index held, or `offset - 1` when empty.
    pub fn end(&self) -> i64 {
        self.offset + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Option<&Rational> {
        if n < self.offset {
            return None;
        }
        self.values.get((n - self.offset) as usize)
    }

    /// Like [`get`](Self::get) but with a coverage error naming the index.
    pub fn at(&self, n: i64) -> Result<&Rational> {
        self.get(n).ok_or_else(|| {
            Error::Coverage(format!("{}: index {n} outside held range [{}, {}]", self.name, self.offset, self.end()))
        })
    }

    pub fn covers(&self, start: i64, end: i64) -> bool {
        start >= self.offset && end <= self.end()
    }

    pub fn require(&self, start: i64, end: i64) -> Result<()> {
        if self.covers(start, end) {
            Ok(())
        } else {
            Err(Error::Coverage(format!(
                "{}: need indices [{start}, {end}], have [{}, {}]",
                self.name,
                self.offset,
                self.end()
            )))
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.values.iter().enumerate().map(move |(i, v)| (self.offset + i as i64, v))
    }

    /// Sub-run restricted to `[start, end]`.
    pub fn slice(&self, start: i64, end: i64) -> Result<SequenceValues> {
        self.require(start, end)?;
        let lo = (start - self.offset) as usize;
        let hi = (end - self.offset) as usize;
        Ok(SequenceValues::new(self.name.clone(), start, self.values[lo..=hi].to_vec()))
    }

    /// Every term multiplied by `c`.
    pub fn scaled(&self, c: &Rational) -> SequenceValues {
        let values = self.values.iter().map(|v| Rational::from(v * c)).collect();
        SequenceValues::new(self.name.clone(), self.offset, values)
    }

    /// Writes one `index<TAB>p/q` line per term.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        for (n, v) in self.iter() {
            writeln!(w, "{n}\t{}", fmt_rational(v))?;
        }
        Ok(())
    }

    /// Reads `index<TAB>numerator[/denominator]` lines. Blank lines and lines
    /// starting with `#` are skipped; indices must be contiguous.
    pub fn read_from(name: impl Into<String>, r: impl BufRead) -> Result<SequenceValues> {
        let name = name.into();
        let mut offset = None;
        let mut values = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let mut parts = t.split_whitespace();
            let (Some(idx), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!("line {}: expected `index<TAB>value`", lineno + 1)));
            };
            let idx: i64 = idx.parse().map_err(|_| Error::Parse(format!("line {}: bad index {idx:?}", lineno + 1)))?;
            let start = *offset.get_or_insert(idx);
            if idx != start + values.len() as i64 {
                return Err(Error::Parse(format!(
                    "line {}: index {idx} breaks contiguity (expected {})",
                    lineno + 1,
                    start + values.len() as i64
                )));
            }
            values.push(parse_rational(val)?);
        }
        let offset = offset.ok_or_else(|| Error::Parse("sequence file holds no terms".into()))?;
        Ok(SequenceValues { name, offset, values })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(f);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<SequenceValues> {
        let path = path.as_ref();
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "file".into());
        let f = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        SequenceValues::read_from(name, std::io::BufReader::new(f))
    }
}

fn require_positive(n: i64, what: &str) -> Result<()> {
    if n < 1 {
        Err(Error::Domain(format!("{what} is defined for n >= 1, got {n}")))
    } else {
        Ok(())
    }
}

/// `C(n-1,k) C(n+k,k)` for `k = 0..n-1`, built by ratio updates along `k`.
fn shifted_products(n: i64) -> Vec<Integer> {
    let mut out = Vec::with_capacity(n as usize);
    let mut p = Integer::from(1);
    for k in 0..n {
        out.push(p.clone());
        // P_{k+1} = P_k (n-1-k)(n+k+1) / (k+1)^2
        p *= n - 1 - k;
        p *= n + k + 1;
        p.div_exact_u_mut(((k + 1) * (k + 1)) as u32);
    }
    out
}

/// `C(n,k) C(n+k,k)` for `k = 0..n`.
pub(crate) fn apery_products(n: i64) -> Vec<Integer> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut p = Integer::from(1);
    for k in 0..=n {
        out.push(p.clone());
        p *= n - k;
        p *= n + k + 1;
        p.div_exact_u_mut(((k + 1) * (k + 1)) as u32);
    }
    out
}

/// `a_n` from its defining sum.
pub fn a_direct(n: i64, form: AForm) -> Result<Rational> {
    require_positive(n, "a_n")?;
    let mut sum = Rational::new();
    match form {
        AForm::Primary => {
            for (k, p) in shifted_products(n).iter().enumerate() {
                let k = k as i64;
                sum += Rational::from((Integer::from(p.square_ref()), 4 * k * k - 1));
            }
        }
        AForm::Dual => {
            for k in 0..n {
                let lo = binomial_i64(n - 1, k)?;
                let hi = binomial_i64(-n - 1, k)?;
                let t = Integer::from(&lo * &hi).square();
                sum += Rational::from((t, 4 * k * k - 1));
            }
        }
    }
    Ok(sum / n)
}

/// `a_n` via `(1/n^3) sum_{k=1}^n k^4 C(n,k)^2 C(n+k,k)^2 / ((4(k-1)^2 - 1)(n+k)^2)`.
pub fn a_transformed(n: i64) -> Result<Rational> {
    require_positive(n, "a_n")?;
    let mut sum = Rational::new();
    for (k, p) in apery_products(n).iter().enumerate().skip(1) {
        let k = k as i64;
        let num = Integer::from(p.square_ref()) * Integer::from(k).pow(4);
        let den = Integer::from(4 * (k - 1) * (k - 1) - 1) * Integer::from(n + k).square();
        sum += Rational::from((num, den));
    }
    Ok(sum / Integer::from(n).pow(3))
}

/// `b_n` from its defining sum.
pub fn b_direct(n: i64) -> Result<Rational> {
    require_positive(n, "b_n")?;
    let mut sum = Integer::new();
    for (k, p) in shifted_products(n).iter().enumerate() {
        let k = k as i64;
        sum += Integer::from(p.square_ref()) * (3 * k * k + 3 * k + 1);
    }
    Ok(Rational::from((sum, Integer::from(n).pow(3))))
}

/// Apéry number `A_n`.
pub fn apery(n: i64) -> Result<Integer> {
    if n < 0 {
        return Err(Error::Domain(format!("A_n is defined for n >= 0, got {n}")));
    }
    Ok(apery_products(n).iter().map(|p| Integer::from(p.square_ref())).sum())
}

/// `S_n = sum_{k=0}^{n-1} C(n-1,k)^2 C(n+k,k)^2`.
pub fn s_sum(n: i64) -> Result<Integer> {
    require_positive(n, "S_n")?;
    Ok(shifted_products(n).iter().map(|p| Integer::from(p.square_ref())).sum())
}

/// Terms of a named sequence on `[start, end]`, evaluated directly.
pub fn table(name: SequenceName, start: i64, end: i64) -> Result<SequenceValues> {
    if start < name.offset() {
        return Err(Error::Domain(format!("{name} starts at index {}, requested {start}", name.offset())));
    }
    let values = (start..=end).map(|n| name.term(n)).collect::<Result<Vec<_>>>()?;
    Ok(SequenceValues::new(name.as_str(), start, values))
}

/// Appends `count` terms computed from `u_{n+d} = -(sum_{i<d} p_i(n) u_{n+i}) / p_d(n)`,
/// starting from the last `d` terms of `seed`.
pub fn extend_by_recurrence(rec: &PRecurrence, seed: &SequenceValues, count: usize) -> Result<SequenceValues> {
    let d = rec.order();
    if seed.len() < d {
        return Err(Error::Coverage(format!("recurrence of order {d} needs {d} seed terms, got {}", seed.len())));
    }
    let mut out = seed.clone();
    out.values.reserve(count);
    for _ in 0..count {
        let target = out.end() + 1;
        let n = target - d as i64;
        let lead = rec.coeffs()[d].eval_i64(n);
        if lead.is_zero() {
            return Err(Error::Singular { index: n });
        }
        let mut acc = Rational::new();
        for (i, p) in rec.coeffs()[..d].iter().enumerate() {
            let c = p.eval_i64(n);
            acc += Rational::from(out.at(n + i as i64)? * &c);
        }
        out.values.push(-acc / lead);
    }
    Ok(out)
}

/// Thread-safe memo of directly evaluated terms, keyed by sequence and index.
#[derive(Default)]
pub struct SequenceStore {
    memo: Mutex<HashMap<(SequenceName, i64), Rational>>,
}

impl SequenceStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(&self, name: SequenceName, n: i64) -> Result<Rational> {
        if let Some(v) = self.memo.lock().unwrap().get(&(name, n)) {
            return Ok(v.clone());
        }
        let v = name.term(n)?;
        self.memo.lock().unwrap().insert((name, n), v.clone());
        Ok(v)
    }

    pub fn range(&self, name: SequenceName, start: i64, end: i64) -> Result<SequenceValues> {
        if start < name.offset() {
            return Err(Error::Domain(format!("{name} starts at index {}, requested {start}", name.offset())));
        }
        let values = (start..=end).map(|n| self.term(name, n)).collect::<Result<Vec<_>>>()?;
        Ok(SequenceValues::new(name.as_str(), start, values))
    }

    /// Seeds the memo from a persisted table.
    pub fn absorb(&self, name: SequenceName, vals: &SequenceValues) {
        let mut memo = self.memo.lock().unwrap();
        for (n, v) in vals.iter() {
            memo.insert((name, n), v.clone());
        }
    }

    pub fn len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::catalog;

    fn ints(v: &SequenceValues) -> Vec<Integer> {
        v.values.iter().map(|r| r.numer().clone()).collect()
    }

    #[test]
    fn a_examples() {
        assert_eq!(a_direct(1, AForm::Primary).unwrap(), -1);
        assert_eq!(a_direct(2, AForm::Primary).unwrap(), 1);
        assert_eq!(a_direct(3, AForm::Primary).unwrap(), 9);
        assert_eq!(a_transformed(1).unwrap(), -1);
        assert_eq!(a_transformed(2).unwrap(), 1);
        assert_eq!(a_transformed(3).unwrap(), 9);
        assert!(matches!(a_direct(0, AForm::Primary), Err(Error::Domain(_))));
        assert!(matches!(a_transformed(0), Err(Error::Domain(_))));
    }

    #[test]
    fn dual_form_agrees() {
        for n in 1..=100 {
            assert_eq!(a_direct(n, AForm::Primary).unwrap(), a_direct(n, AForm::Dual).unwrap(), "n={n}");
        }
    }

    #[test]
    fn b_apery_s_examples() {
        assert_eq!(ints(&table(SequenceName::B, 1, 3).unwrap()), [1, 8, 87]);
        assert_eq!(ints(&table(SequenceName::Apery, 0, 2).unwrap()), [1, 5, 73]);
        assert_eq!(ints(&table(SequenceName::S, 1, 3).unwrap()), [1, 10, 165]);
        assert!(b_direct(0).is_err());
        assert!(apery(-1).is_err());
    }

    #[test]
    fn extension_examples() {
        let seed = SequenceValues::new("a", 1, vec![(-1).into(), 1.into(), 9.into()]);
        let ext = extend_by_recurrence(&catalog::a_recurrence(), &seed, 1).unwrap();
        assert_eq!(*ext.get(4).unwrap(), 61);

        let fib = SequenceValues::new("fib", 0, vec![1.into(), 1.into()]);
        let ext = extend_by_recurrence(&catalog::fibonacci(), &fib, 5).unwrap();
        assert_eq!(ints(&ext), [1, 1, 2, 3, 5, 8, 13]);

        let seed = table(SequenceName::B, 1, 3).unwrap();
        let ext = extend_by_recurrence(&catalog::b_recurrence(), &seed, 97).unwrap();
        assert_eq!(ext, table(SequenceName::B, 1, 100).unwrap());
    }

    #[test]
    fn singular_leading_coefficient_is_reported() {
        // n u_{n+1} - u_n = 0 is singular at n = 0
        let rec = PRecurrence::new(vec![crate::IntPoly::constant(-1), crate::IntPoly::x()], 0).unwrap();
        let seed = SequenceValues::new("u", 0, vec![1.into()]);
        assert_eq!(extend_by_recurrence(&rec, &seed, 2), Err(Error::Singular { index: 0 }));
    }

    #[test]
    fn file_format_round_trip() {
        let v = SequenceValues::new("x", 3, vec![Rational::from((-7, 3)), 12.into(), Rational::from((1, 2))]);
        let mut buf = Vec::new();
        v.write_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "3\t-7/3\n4\t12\n5\t1/2\n");
        let back = SequenceValues::read_from("x", &buf[..]).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn file_format_rejects_gaps_and_junk() {
        assert!(SequenceValues::read_from("x", &b"1\t2\n3\t4\n"[..]).is_err());
        assert!(SequenceValues::read_from("x", &b"1\tfoo\n"[..]).is_err());
        assert!(SequenceValues::read_from("x", &b"# only a comment\n"[..]).is_err());
        let v = SequenceValues::read_from("x", &b"# header\n\n0 1\n1 5\n"[..]).unwrap();
        assert_eq!(v.offset, 0);
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn store_memoizes() {
        let store = SequenceStore::new();
        let v = store.range(SequenceName::A, 1, 10).unwrap();
        assert_eq!(store.len(), 10);
        assert_eq!(v, table(SequenceName::A, 1, 10).unwrap());
        assert!(store.range(SequenceName::A, 0, 3).is_err());
    }
}
