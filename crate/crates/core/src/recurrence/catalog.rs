//! Known recurrences, built from their factored coefficient forms.

use super::PRecurrence;
use crate::kernel::IntPoly;

fn n() -> IntPoly {
    IntPoly::x()
}

fn lin(a: i64, b: i64) -> IntPoly {
    IntPoly::linear(a, b)
}

fn poly(ascending: &[i64]) -> IntPoly {
    IntPoly::from_i64s(ascending)
}

fn product(factors: &[IntPoly]) -> IntPoly {
    factors.iter().fold(IntPoly::constant(1), |acc, f| &acc * f)
}

/// Four-term recurrence of `a_n`, valid from `n = 1`:
///
/// ```text
/// n^3 (n+1)(2n+5) a_n - (n+1)(2n+5)(35n^3+152n^2+191n+62) a_{n+1}
///   + (n+2)(2n+1)(35n^3+163n^2+224n+88) a_{n+2} - (n+2)(n+3)^3 (2n+1) a_{n+3} = 0
/// ```
pub fn a_recurrence() -> PRecurrence {
    let p0 = product(&[n().pow(3), lin(1, 1), lin(5, 2)]);
    let p1 = -product(&[lin(1, 1), lin(5, 2), poly(&[62, 191, 152, 35])]);
    let p2 = product(&[lin(2, 1), lin(1, 2), poly(&[88, 224, 163, 35])]);
    let p3 = -product(&[lin(2, 1), lin(3, 1).pow(3), lin(1, 2)]);
    PRecurrence::new(vec![p0, p1, p2, p3], 1).expect("valid recurrence")
}

/// Four-term recurrence of `b_n`, valid from `n = 1`.
pub fn b_recurrence() -> PRecurrence {
    let p0 = product(&[lin(1, 1), lin(5, 2), poly(&[11, 12, 3]), poly(&[25, 24, 6]), n().pow(3)]);
    let p1 = -product(&[lin(1, 1), lin(5, 2), poly(&[3076, 21646, 59512, 82777, 64134, 28137, 6552, 630])]);
    let p2 = product(&[poly(&[5072, 30640, 73445, 93469, 68751, 29271, 6678, 630]), lin(1, 2), lin(2, 1)]);
    let p3 = -product(&[lin(2, 1), lin(1, 2), poly(&[2, 6, 3]), poly(&[7, 12, 6]), lin(3, 1).pow(3)]);
    PRecurrence::new(vec![p0, p1, p2, p3], 1).expect("valid recurrence")
}

/// Apéry's three-term recurrence
/// `(n+1)^3 A_n - (2n+3)(17n^2+51n+39) A_{n+1} + (n+2)^3 A_{n+2} = 0`, from `n = 0`.
pub fn apery_recurrence() -> PRecurrence {
    let p0 = lin(1, 1).pow(3);
    let p1 = -product(&[lin(3, 2), poly(&[39, 51, 17])]);
    let p2 = lin(2, 1).pow(3);
    PRecurrence::new(vec![p0, p1, p2], 0).expect("valid recurrence")
}

/// `u_{n+2} = u_{n+1} + u_n`.
pub fn fibonacci() -> PRecurrence {
    PRecurrence::new(vec![IntPoly::constant(-1), IntPoly::constant(-1), IntPoly::constant(1)], 0)
        .expect("valid recurrence")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{table, SequenceName};

    #[test]
    fn hand_check_at_one() {
        // 14 a_1 - 6160 a_2 + 4590 a_3 - 576 a_4 = 0 in printed sign convention
        let rec = a_recurrence();
        let at1: Vec<_> = rec.coeffs().iter().map(|p| p.eval_i64(1)).collect();
        assert_eq!(at1, [-14, 6160, -4590, 576]);
    }

    #[test]
    fn apery_recurrence_holds() {
        let v = table(SequenceName::Apery, 0, 60).unwrap();
        assert!(super::super::verify_recurrence(&apery_recurrence(), &v, 0, 58).unwrap().holds());
    }
}
