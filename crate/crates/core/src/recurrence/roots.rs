//! Real roots of squarefree integer polynomials.
//!
//! Rational roots come from the rational-root theorem, a remaining quadratic
//! factor is solved in closed form, and anything of higher degree is isolated
//! with a Sturm sequence and refined by exact bisection at dyadic points.

use std::cmp::Ordering;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::kernel::{fmt_rational, IntPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    Rational,
    QuadraticSurd,
    Numeric,
}

impl RootKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RootKind::Rational => "rational",
            RootKind::QuadraticSurd => "quadratic-surd",
            RootKind::Numeric => "numeric",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RealRoot {
    pub value: Float,
    pub kind: RootKind,
    /// Closed form for rational and surd roots, e.g. `17 - 12*sqrt(2)`.
    pub exact: Option<String>,
    surd: Option<Surd>,
}

/// `(p + q sqrt(t))` with rational `p, q` and squarefree integer `t > 1`.
#[derive(Clone, Debug, PartialEq)]
struct Surd {
    p: Rational,
    q: Rational,
    t: Integer,
}

impl Surd {
    fn mul(&self, other: &Surd) -> Surd {
        let p = Rational::from(&self.p * &other.p) + Rational::from(&self.q * &other.q) * &self.t;
        let q = Rational::from(&self.p * &other.q) + Rational::from(&self.q * &other.p);
        Surd { p, q, t: self.t.clone() }
    }

    /// Exact `poly(self)` in Q(sqrt t).
    fn eval(&self, poly: &IntPoly) -> Surd {
        let mut acc = Surd { p: Rational::new(), q: Rational::new(), t: self.t.clone() };
        for c in poly.coeffs().iter().rev() {
            acc = acc.mul(self);
            acc.p += c;
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct CharPolyResult {
    pub poly: IntPoly,
    pub roots: Vec<RealRoot>,
    /// Moduli of non-real root pairs found in closed form.
    pub complex_moduli: Vec<Float>,
    /// Number of non-real roots (counted with their conjugates).
    pub nonreal_count: usize,
    pub precision: u32,
}

impl CharPolyResult {
    /// Index into `roots` of the root of strictly maximal modulus.
    pub fn dominant(&self) -> Option<usize> {
        let tol = Float::with_val(64, -(self.precision as i32) / 2).exp2();
        let mut best: Option<(usize, Float)> = None;
        for (i, r) in self.roots.iter().enumerate() {
            let m = Float::with_val(self.precision, r.value.abs_ref());
            if best.as_ref().is_none_or(|(_, b)| m > *b) {
                best = Some((i, m));
            }
        }
        let (idx, top) = best?;
        let close = |m: &Float| {
            let d = Float::with_val(self.precision, m - &top).abs();
            d <= Float::with_val(self.precision, &top * &tol)
        };
        let ties = self.roots.iter().filter(|r| close(&Float::with_val(self.precision, r.value.abs_ref()))).count();
        if ties > 1 || self.complex_moduli.iter().any(|m| close(m) || *m > top) {
            return None;
        }
        if self.nonreal_count > 2 * self.complex_moduli.len() {
            // Non-real roots without a computed modulus: dominance cannot be settled.
            return None;
        }
        Some(idx)
    }

    pub fn dominant_root(&self) -> Result<&RealRoot> {
        match self.dominant() {
            Some(i) => Ok(&self.roots[i]),
            None => Err(Error::Ambiguous(format!("no unique root of maximal modulus for {}", self.poly))),
        }
    }

    /// Largest `|poly(r)|` over the returned roots, at the result precision.
    pub fn max_residual(&self) -> Float {
        let mut worst = Float::with_val(self.precision, 0);
        for r in &self.roots {
            let v = self.poly.eval_float(&r.value).abs();
            if v > worst {
                worst = v;
            }
        }
        worst
    }

    /// Exact substitution check of every rational and surd root.
    pub fn exact_roots_verified(&self) -> bool {
        self.roots.iter().all(|r| match (&r.kind, &r.surd) {
            (RootKind::Numeric, _) => true,
            (_, Some(s)) => {
                let v = s.eval(&self.poly);
                v.p.is_zero() && v.q.is_zero()
            }
            (_, None) => false,
        })
    }
}

fn divisors(n: &Integer) -> Option<Vec<Integer>> {
    let n = Integer::from(n.abs_ref());
    // Trial division is only sensible for modest constants.
    if n.significant_bits() > 48 {
        return None;
    }
    let n = n.to_u64()?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(Integer::from(d));
            if d != n / d {
                out.push(Integer::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

/// Splits `n > 0` as `s^2 t` with `t` squarefree (trial division; `None` if too large).
fn square_split(n: &Integer) -> Option<(Integer, Integer)> {
    if n.significant_bits() > 64 {
        return None;
    }
    let mut t = n.to_u64()?;
    let mut s = 1u64;
    let mut p = 2u64;
    while p * p <= t {
        while t % (p * p) == 0 {
            t /= p * p;
            s *= p;
        }
        p += 1;
    }
    Some((Integer::from(s), Integer::from(t)))
}

fn rational_roots(poly: &IntPoly) -> (Vec<Rational>, IntPoly) {
    let mut rest = poly.clone();
    let mut found = Vec::new();
    if rest.coeff(0).is_zero() {
        found.push(Rational::new());
        rest = rest.div_exact(&IntPoly::x()).expect("x divides");
    }
    let (Some(c0), Some(lc)) = (divisors(&rest.coeff(0)), rest.leading().and_then(divisors)) else {
        return (found, rest);
    };
    let mut cands: Vec<Rational> = Vec::new();
    for p in &c0 {
        for q in &lc {
            for s in [1, -1] {
                let r = Rational::from((Integer::from(p * s), q.clone()));
                if !cands.contains(&r) {
                    cands.push(r);
                }
            }
        }
    }
    cands.sort();
    for r in cands {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        if rest.sign_at_rational(&r) == Ordering::Equal {
            let (p, q) = r.clone().into_numer_denom();
            let factor = IntPoly::new(vec![-p, q]);
            rest = rest.div_exact(&factor).expect("rational root divides");
            found.push(r);
        }
    }
    (found, rest.primitive_part())
}

fn quadratic_roots(q: &IntPoly, prec: u32) -> (Vec<RealRoot>, Vec<Float>) {
    let (c, b, a) = (q.coeff(0), q.coeff(1), q.coeff(2));
    let disc = Integer::from(b.square_ref()) - Integer::from(4) * &a * &c;
    let two_a = Integer::from(&a * 2);
    if disc.is_negative() {
        let m = Float::with_val(prec, &Rational::from((c, a))).abs().sqrt();
        return (Vec::new(), vec![m.clone(), m]);
    }
    let centre = Rational::from((Integer::from(-&b), two_a.clone()));
    let sqrt_disc = Float::with_val(prec, &disc).sqrt();
    let split = square_split(&disc);
    let mut roots = Vec::new();
    for sign in [-1i32, 1] {
        let mut value = Float::with_val(prec, &sqrt_disc * sign);
        value += &Rational::from(-&b);
        value /= &two_a;
        let (exact, surd) = match &split {
            Some((s, t)) => {
                let coef = Rational::from((Integer::from(s * sign), two_a.clone()));
                let text = format!(
                    "{} {} {}*sqrt({t})",
                    fmt_rational(&centre),
                    if coef.is_negative() { "-" } else { "+" },
                    fmt_rational(&Rational::from(coef.abs_ref()))
                )
                .replace(" 1*sqrt", " sqrt");
                (Some(text), Some(Surd { p: centre.clone(), q: coef, t: t.clone() }))
            }
            None => (None, None),
        };
        roots.push(RealRoot { value, kind: RootKind::QuadraticSurd, exact, surd });
    }
    (roots, Vec::new())
}

/// Sturm chain `p, p', -rem(p, p'), ...` with positive scalings only.
fn sturm_chain(p: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let (a, b) = (&chain[chain.len() - 2], &chain[chain.len() - 1]);
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        let mut r = a.pseudo_rem(b);
        let lc = b.leading().unwrap();
        let steps = a.degree().unwrap() - b.degree().unwrap() + 1;
        if lc.is_negative() && steps % 2 == 1 {
            r = -r;
        }
        if r.is_zero() {
            break;
        }
        let g = r.content();
        chain.push(-r.div_exact_scalar(&g));
    }
    chain
}

fn sign_changes(chain: &[IntPoly], m: &Integer, e: u32) -> usize {
    let signs: Vec<Ordering> = chain.iter().map(|p| p.sign_at_dyadic(m, e)).filter(|s| *s != Ordering::Equal).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Isolates and refines the real roots of a squarefree polynomial to `prec` bits.
fn numeric_roots(p: &IntPoly, prec: u32) -> Vec<RealRoot> {
    let chain = sturm_chain(p);
    let lc = Integer::from(p.leading().unwrap().abs_ref());
    let maxc = p.coeffs().iter().map(|c| Integer::from(c.abs_ref())).max().unwrap();
    // Cauchy bound 1 + max|c_i| / |lc|, rounded up to a power of two.
    let bound: Integer = Integer::from(&maxc / &lc) + 2;
    let bits = bound.significant_bits();
    // Work on the grid m / 2^e with e growing as intervals shrink.
    let mut todo = vec![(Integer::from(-1) << bits, Integer::from(1) << bits, 0u32)];
    let mut isolated = Vec::new();
    while let Some((lo, hi, e)) = todo.pop() {
        let n = sign_changes(&chain, &lo, e) - sign_changes(&chain, &hi, e);
        if n == 0 {
            continue;
        }
        if n == 1 {
            isolated.push((lo, hi, e));
            continue;
        }
        let (lo2, hi2, e2) = (Integer::from(&lo << 1), Integer::from(&hi << 1), e + 1);
        let mid = Integer::from(&lo2 + &hi2) >> 1;
        if p.sign_at_dyadic(&mid, e2) == Ordering::Equal {
            // Exact dyadic root: shift the grid so it lies strictly inside.
            todo.push((Integer::from(&lo2 << 1), Integer::from(&hi2 << 1), e2 + 1));
            continue;
        }
        todo.push((lo2, mid.clone(), e2));
        todo.push((mid, hi2, e2));
    }
    isolated.sort_by(|x, y| {
        let a = Rational::from((x.0.clone(), Integer::from(1) << x.2));
        let b = Rational::from((y.0.clone(), Integer::from(1) << y.2));
        a.cmp(&b)
    });
    isolated
        .into_iter()
        .map(|(mut lo, mut hi, mut e)| {
            let slo = p.sign_at_dyadic(&lo, e);
            while e < prec + bits + 8 {
                lo <<= 1;
                hi <<= 1;
                e += 1;
                let mid = Integer::from(&lo + &hi) >> 1;
                let s = p.sign_at_dyadic(&mid, e);
                if s == Ordering::Equal {
                    lo = mid.clone();
                    hi = mid;
                    break;
                }
                if s == slo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let mid = Rational::from((Integer::from(&lo + &hi), Integer::from(1) << (e + 1)));
            RealRoot { value: Float::with_val(prec, &mid), kind: RootKind::Numeric, exact: None, surd: None }
        })
        .collect()
}

/// All real roots of a squarefree polynomial, sorted ascending.
pub fn roots_real(poly: &IntPoly, prec: u32) -> Result<CharPolyResult> {
    let deg = poly.degree().unwrap_or(0);
    if deg == 0 {
        return Err(Error::Precondition("root finding needs degree >= 1".into()));
    }
    let g = poly.gcd(&poly.derivative());
    if g.degree().unwrap_or(0) > 0 {
        return Err(Error::Precondition(format!("polynomial is not squarefree; gcd(p, p') = {g}")));
    }
    let (rats, rest) = rational_roots(poly);
    let mut roots: Vec<RealRoot> = rats
        .into_iter()
        .map(|r| RealRoot {
            value: Float::with_val(prec, &r),
            kind: RootKind::Rational,
            exact: Some(fmt_rational(&r)),
            surd: Some(Surd { p: r, q: Rational::new(), t: Integer::from(2) }),
        })
        .collect();
    let mut complex_moduli = Vec::new();
    let rest_deg = rest.degree().unwrap_or(0);
    let mut nonreal = 0;
    match rest_deg {
        0 => {}
        2 => {
            let (rs, cm) = quadratic_roots(&rest, prec);
            nonreal = cm.len();
            roots.extend(rs);
            complex_moduli = cm;
        }
        _ => {
            let rs = numeric_roots(&rest, prec);
            nonreal = rest_deg - rs.len();
            roots.extend(rs);
        }
    }
    roots.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
    Ok(CharPolyResult { poly: poly.clone(), roots, complex_moduli, nonreal_count: nonreal, precision: prec })
}
