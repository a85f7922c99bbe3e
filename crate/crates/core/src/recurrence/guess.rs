//! Recovering a P-recurrence from terms by exact linear algebra.

use rug::{Integer, Rational};

use super::linalg::{bareiss_echelon, make_primitive, nullspace};
use super::PRecurrence;
use crate::error::{Error, Result};
use crate::kernel::IntPoly;
use crate::sequences::SequenceValues;

/// Equations held back from the solve and used only to check the candidate.
pub const GUESS_MARGIN: usize = 10;

/// Unknown layout: block `i` holds `p_i`'s coefficients from `n^D` down to `n^0`.
fn column(i: usize, j: usize, degree: usize) -> usize {
    i * (degree + 1) + (degree - j)
}

fn equation_row(vals: &SequenceValues, n: i64, order: usize, degree: usize) -> Vec<Integer> {
    let terms: Vec<&Rational> = (0..=order).map(|i| vals.get(n + i as i64).unwrap()).collect();
    let den = terms.iter().fold(Integer::from(1), |l, t| l.lcm(t.denom()));
    let mut row = vec![Integer::new(); (order + 1) * (degree + 1)];
    let nn = Integer::from(n);
    for (i, t) in terms.iter().enumerate() {
        let mut v = t.numer() * Integer::from(&den / t.denom());
        for j in 0..=degree {
            row[column(i, j, degree)] = v.clone();
            v *= &nn;
        }
    }
    row
}

fn to_recurrence(v: &[Integer], order: usize, degree: usize, offset: i64) -> Option<PRecurrence> {
    let coeffs: Vec<IntPoly> =
        (0..=order).map(|i| IntPoly::new((0..=degree).map(|j| v[column(i, j, degree)].clone()).collect())).collect();
    if coeffs[0].is_zero() || coeffs[order].is_zero() {
        return None;
    }
    PRecurrence::new(coeffs, offset).ok()
}

/// Smallest recurrence (order first, then coefficient degree) annihilating
/// every term of `vals`, or `None` if there is none within the bounds.
///
/// Within one nullspace of dimension > 1 the basis is brought to echelon form
/// in the unknown layout above and the lowest row with nonzero `p_0` and `p_d`
/// is taken, which favors the smallest degree of `p_0`, then of `p_1`, and so
/// on.
pub fn guess_recurrence(vals: &SequenceValues, max_order: usize, max_degree: usize) -> Result<Option<PRecurrence>> {
    if max_order == 0 {
        return Err(Error::Domain("max_order must be >= 1".into()));
    }
    let need = (max_order + 1) * (max_degree + 1) + max_order + GUESS_MARGIN;
    if vals.len() < need {
        return Err(Error::Coverage(format!(
            "guessing up to order {max_order}, degree {max_degree} needs {need} terms, got {}",
            vals.len()
        )));
    }
    for order in 1..=max_order {
        let equations = vals.len() - order;
        let solve_rows = equations - GUESS_MARGIN;
        for degree in 0..=max_degree {
            let cols = (order + 1) * (degree + 1);
            let m: Vec<Vec<Integer>> =
                (0..solve_rows).map(|r| equation_row(vals, vals.offset + r as i64, order, degree)).collect();
            let mut basis = nullspace(m, cols);
            if basis.is_empty() {
                continue;
            }
            bareiss_echelon(&mut basis);
            basis.retain(|v| v.iter().any(|x| !x.is_zero()));
            let mut candidates: Vec<Vec<Integer>> = basis.iter().rev().cloned().collect();
            // When no single row has both p_0 and p_d nonzero (eventually zero
            // terms), a row with p_0 != 0 plus one with p_d != 0 does.
            let p0 = |v: &Vec<Integer>| (0..=degree).any(|j| !v[column(0, j, degree)].is_zero());
            let pd = |v: &Vec<Integer>| (0..=degree).any(|j| !v[column(order, j, degree)].is_zero());
            if let (Some(x), Some(y)) = (basis.iter().rev().find(|v| p0(v)), basis.iter().rev().find(|v| pd(v))) {
                candidates.push(x.iter().zip(y).map(|(a, b)| Integer::from(a + b)).collect());
            }
            for mut v in candidates {
                make_primitive(&mut v);
                let Some(rec) = to_recurrence(&v, order, degree, vals.offset) else {
                    continue;
                };
                let last = vals.end() - order as i64;
                let all_zero = (vals.offset..=last).all(|n| rec.residue(vals, n).is_ok_and(|r| r.is_zero()));
                if all_zero {
                    return Ok(Some(rec));
                }
            }
        }
    }
    Ok(None)
}
