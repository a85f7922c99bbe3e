use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Integer, Rational};

/// Dense univariate polynomial with integer coefficients.
///
/// `coeffs[i]` is the coefficient of `x^i`. The vector is empty for the zero
/// polynomial and otherwise ends in a nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

impl IntPoly {
    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn new(coeffs: Vec<Integer>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    /// Ascending coefficients from machine integers.
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<Integer>) -> Self {
        Self::new(vec![c.into()])
    }

    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `a + b x`.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_i64s(&[a, b])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Integer {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = IntPoly::constant(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Horner evaluation at an integer point.
    pub fn eval(&self, n: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= n;
            acc += c;
        }
        acc
    }

    pub fn eval_i64(&self, n: i64) -> Integer {
        self.eval(&Integer::from(n))
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let mut acc = Float::new(x.prec());
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Sign of `p(m / 2^e)`, evaluated exactly in homogenized form.
    pub fn sign_at_dyadic(&self, m: &Integer, e: u32) -> Ordering {
        let Some(d) = self.degree() else {
            return Ordering::Equal;
        };
        // 2^{ed} p(m / 2^e) = sum c_i m^i 2^{e(d-i)}
        let mut total = Integer::new();
        let mut mpow = Integer::from(1);
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut term = Integer::from(c * &mpow);
            term <<= e * (d - i) as u32;
            total += term;
            mpow *= m;
        }
        total.cmp0()
    }

    /// Sign of `p(x)` at an exact rational point.
    pub fn sign_at_rational(&self, x: &Rational) -> Ordering {
        self.eval_rational(x).cmp0()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| Integer::from(c * i as u32)).collect())
    }

    /// gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> Integer {
        self.coeffs.iter().fold(Integer::new(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_some_and(|l| l.cmp0() == Ordering::Less) {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| Integer::from(c.div_exact_ref(&g))).collect())
    }

    pub fn scale(&self, k: &Integer) -> Self {
        Self::new(self.coeffs.iter().map(|c| Integer::from(c * k)).collect())
    }

    /// Exact division by an integer that divides every coefficient.
    pub fn div_exact_scalar(&self, k: &Integer) -> Self {
        Self::new(self.coeffs.iter().map(|c| Integer::from(c.div_exact_ref(k))).collect())
    }

    /// Pseudo-remainder `lc(d)^(deg a - deg d + 1) * a mod d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("pseudo_rem by zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut r = self.clone();
        let Some(da) = r.degree() else {
            return r;
        };
        if da < dd {
            return r;
        }
        let mut steps = da - dd + 1;
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.leading().unwrap().clone();
            let shift = dr - dd;
            let mut next: Vec<Integer> = r.coeffs.iter().map(|c| Integer::from(c * &lc)).collect();
            for (i, c) in d.coeffs.iter().enumerate() {
                next[i + shift] -= Integer::from(c * &lr);
            }
            r = IntPoly::new(next);
            steps -= 1;
        }
        // Remaining multiplications keep the lc power exact.
        for _ in 0..steps {
            r = r.scale(&lc);
        }
        r
    }

    /// gcd over Q, returned primitive with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }

    /// Quotient `self / d` when `d` divides `self` exactly over Z; `None` otherwise.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        let Some(da) = self.degree() else {
            return Some(IntPoly::zero());
        };
        if da < dd {
            return None;
        }
        let mut q = vec![Integer::new(); da - dd + 1];
        for shift in (0..=da - dd).rev() {
            let top = &r[shift + dd];
            if !top.is_divisible(lc) {
                return None;
            }
            let f = Integer::from(top.div_exact_ref(lc));
            for (i, c) in d.coeffs.iter().enumerate() {
                r[i + shift] -= Integer::from(c * &f);
            }
            q[shift] = f;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Renders with the given variable name, highest power first, e.g.
    /// `x^3 - 35x^2 + 35x - 1`.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.cmp0() == Ordering::Less;
            let mag = Integer::from(c.abs_ref());
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mag != 1 || i == 0 {
                out.push_str(&mag.to_string());
            }
            out.push_str(&mono);
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![Integer::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| Integer::from(-c)).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}
