//! Ordinary least-squares lines at a fixed binary precision.

use rug::Float;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct LineFit {
    pub slope: Float,
    pub intercept: Float,
    /// Largest `|y_i - (slope x_i + intercept)|`.
    pub max_abs_residual: Float,
    pub points: usize,
}

/// Fits `y = slope * x + intercept`. Deterministic: the summation order is the
/// input order and every operation is correctly rounded at `prec` bits.
pub fn least_squares(xs: &[Float], ys: &[Float], prec: u32) -> Result<LineFit> {
    if xs.len() != ys.len() {
        return Err(Error::Domain("x and y lengths differ".into()));
    }
    let m = xs.len();
    if m < 2 {
        return Err(Error::Coverage("a line fit needs at least two points".into()));
    }
    let mut mx = Float::with_val(prec, 0);
    let mut my = Float::with_val(prec, 0);
    for (x, y) in xs.iter().zip(ys) {
        mx += x;
        my += y;
    }
    mx /= m as u32;
    my /= m as u32;
    let mut sxx = Float::with_val(prec, 0);
    let mut sxy = Float::with_val(prec, 0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = Float::with_val(prec, x - &mx);
        let dy = Float::with_val(prec, y - &my);
        sxy += Float::with_val(prec, &dx * &dy);
        sxx += dx.square();
    }
    if sxx.is_zero() {
        return Err(Error::Precondition("all x values coincide".into()));
    }
    let slope = sxy / &sxx;
    let intercept = my - Float::with_val(prec, &slope * &mx);
    let mut worst = Float::with_val(prec, 0);
    for (x, y) in xs.iter().zip(ys) {
        let fitted = Float::with_val(prec, &slope * x) + &intercept;
        let r = Float::with_val(prec, y - &fitted).abs();
        if r > worst {
            worst = r;
        }
    }
    Ok(LineFit { slope, intercept, max_abs_residual: worst, points: m })
}
