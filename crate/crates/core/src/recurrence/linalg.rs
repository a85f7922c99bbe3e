//! Fraction-free (Bareiss) elimination over the integers.

use rug::{Integer, Rational};

/// Row echelon form by one-step fraction-free elimination.
///
/// Works in place on a rectangular matrix and returns the pivot columns.
/// Every division in the update is exact: each entry below the current pivot
/// row is a minor of the input matrix.
pub fn bareiss_echelon(m: &mut [Vec<Integer>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = Integer::from(1);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let mut v = Integer::from(&pivot_row[c] * &row[j]);
                v -= Integer::from(&factor * &pivot_row[j]);
                v.div_exact_mut(&prev);
                row[j] = v;
            }
            row[c] = Integer::new();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Makes an integer vector primitive with its first nonzero entry positive.
pub(crate) fn make_primitive(v: &mut [Integer]) {
    let g = v.iter().fold(Integer::new(), |g, x| g.gcd(x));
    if g.is_zero() {
        return;
    }
    let neg = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        x.div_exact_mut(&g);
        if neg {
            *x = Integer::from(-&*x);
        }
    }
}

/// Integer basis of the right nullspace, one primitive vector per free column.
pub fn nullspace(mut m: Vec<Vec<Integer>>, cols: usize) -> Vec<Vec<Integer>> {
    let pivots = bareiss_echelon(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![Rational::new(); cols];
        x[f] = Rational::from(1);
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut s = Rational::new();
            for j in pc + 1..cols {
                if !m[r][j].is_zero() && !x[j].is_zero() {
                    s += Rational::from(&x[j] * &m[r][j]);
                }
            }
            x[pc] = -s / &m[r][pc];
        }
        let lcm = x.iter().fold(Integer::from(1), |l, q| l.lcm(q.denom()));
        let mut v: Vec<Integer> = x.into_iter().map(|q| (q * &lcm).into_numer_denom().0).collect();
        make_primitive(&mut v);
        basis.push(v);
    }
    basis
}
