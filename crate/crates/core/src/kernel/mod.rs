//! Exact arithmetic layer.
//!
//! Integers and rationals are GMP-backed `rug` values; rationals are always
//! kept in lowest terms with a positive denominator. High-precision floats are
//! MPFR `Float`s whose precision travels with every value.

mod poly;

pub use poly::IntPoly;
pub use rug::{Float, Integer, Rational};

use rug::float::{Constant, Round};
use rug::ops::Pow;

use crate::error::{Error, Result};

/// Working precision (bits) used when a caller does not pick one.
pub const DEFAULT_PRECISION: u32 = 256;

/// Environment variable that overrides [`DEFAULT_PRECISION`] for the CLI.
pub const PRECISION_ENV: &str = "LOGBEHAVE_PRECISION";

/// Binomial coefficient `C(m, k)` for any signed `m`, defined by the falling
/// factorial `m (m-1) ... (m-k+1) / k!`.
///
/// For `m >= 0` and `k > m` this is zero, and `C(m, 0) = 1` for every `m`.
pub fn binomial(m: &Integer, k: i64) -> Result<Integer> {
    if k < 0 {
        return Err(Error::Domain(format!("binomial lower index must be >= 0, got {k}")));
    }
    let mut acc = Integer::from(1);
    let mut factor = m.clone();
    for j in 1..=k {
        // acc = C(m, j-1) here; C(m, j) = C(m, j-1) * (m - j + 1) / j exactly.
        acc *= &factor;
        acc.div_exact_u_mut(j as u32);
        if acc.is_zero() {
            break;
        }
        factor -= 1;
    }
    Ok(acc)
}

/// `C(m, k)` for machine-sized arguments.
pub fn binomial_i64(m: i64, k: i64) -> Result<Integer> {
    binomial(&Integer::from(m), k)
}

/// Correctly rounded conversion of an exact rational at `prec` bits.
pub fn to_float(r: &Rational, prec: u32) -> Float {
    Float::with_val(prec, r)
}

/// Conversion with a directed rounding mode, used for certified intervals.
pub fn to_float_round(r: &Rational, prec: u32, round: Round) -> Float {
    Float::with_val_round(prec, r, round).0
}

pub fn sqrt2(prec: u32) -> Float {
    Float::with_val(prec, 2).sqrt()
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `(1 + sqrt 2)^4 = 17 + 12 sqrt 2`, the growth rate shared by the Apéry-type
/// sequences in this crate.
pub fn silver_fourth_power(prec: u32) -> Float {
    let mut s = sqrt2(prec);
    s *= 12;
    s += 17;
    s
}

/// Natural log of a positive rational at `prec` bits.
pub fn ln_rational(r: &Rational, prec: u32) -> Result<Float> {
    if r.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::Domain(format!("logarithm of nonpositive value {r}")));
    }
    // Numerator and denominator separately so huge values keep full relative accuracy.
    let (num, den) = r.clone().into_numer_denom();
    let mut l = Float::with_val(prec + 16, &num).ln();
    l -= Float::with_val(prec + 16, &den).ln();
    Ok(Float::with_val(prec, &l))
}

/// Integer power of an exact rational.
pub fn rational_pow(r: &Rational, e: u32) -> Rational {
    Rational::from(r.pow(e))
}

/// Renders an exact rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        None => Integer::from_str_radix(s, 10).map(Rational::from).map_err(|_| bad()),
        Some((p, q)) => {
            let p = Integer::from_str_radix(p.trim(), 10).map_err(|_| bad())?;
            let q = Integer::from_str_radix(q.trim(), 10).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::from((p, q)))
        }
    }
}

/// Deterministic decimal rendering of a float with `digits` significant digits.
pub fn fmt_float(f: &Float, digits: usize) -> String {
    f.to_string_radix(10, Some(digits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial_i64(5, 2).unwrap(), 10);
        assert_eq!(binomial_i64(0, 0).unwrap(), 1);
        assert_eq!(binomial_i64(3, 5).unwrap(), 0);
        for m in [-7, -1, 0, 4, 1000] {
            assert_eq!(binomial_i64(m, 0).unwrap(), 1);
        }
    }

    #[test]
    fn negative_upper_index() {
        // (-3)(-4)/2 = 6 = C(4, 2)
        assert_eq!(binomial_i64(-3, 2).unwrap(), 6);
        assert_eq!(binomial_i64(-3, 2).unwrap(), binomial_i64(4, 2).unwrap());
        assert_eq!(binomial_i64(-1, 3).unwrap(), -1);
    }

    #[test]
    fn negative_lower_index_is_domain_error() {
        assert!(matches!(binomial_i64(5, -1), Err(Error::Domain(_))));
    }

    #[test]
    fn matches_gmp_binomial() {
        for m in 0u32..40 {
            for k in 0u32..45 {
                let ours = binomial_i64(m as i64, k as i64).unwrap();
                let gmp = Integer::from(Integer::binomial_u(m, k));
                assert_eq!(ours, gmp, "C({m},{k})");
            }
        }
    }

    #[test]
    fn rational_text_round_trip() {
        let r = Rational::from((-6, 4));
        assert_eq!(fmt_rational(&r), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), r);
        assert_eq!(parse_rational(" 61 ").unwrap(), 61);
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn silver_power_value() {
        let v = silver_fourth_power(256);
        let s = fmt_float(&v, 12);
        assert!(s.starts_with("33.970562748"), "{s}");
    }

    #[test]
    fn ln_of_huge_rational() {
        let big = Rational::from(Integer::from(10).pow(5000u32));
        let l = ln_rational(&big, 128).unwrap();
        let expect = Float::with_val(128, 10).ln() * 5000u32;
        let diff = Float::with_val(128, &l - &expect).abs();
        assert!(diff < 1e-30);
        assert!(ln_rational(&Rational::from(-1), 64).is_err());
    }
}
