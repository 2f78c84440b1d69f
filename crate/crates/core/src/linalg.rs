//! Exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::graded::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Inverse of a square matrix by Gauss–Jordan elimination, `None` if singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m.clone();
    let mut inv: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] = &a[r][j] - &t;
                    let t = &f * &inv[col][j];
                    inv[r][j] = &inv[r][j] - &t;
                }
            }
        }
    }
    Some(inv)
}

/// Solves `Σ_j c_j cols[j] = v`, returning the coefficients when `v` lies in
/// the span. Columns need not be independent.
pub fn solve_in_span(cols: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let rows = v.len();
    let k = cols.len();
    // augmented matrix, rows x (k + 1)
    let mut a: Matrix = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let pv = a[row][col].clone();
        for j in 0..=k {
            a[row][j] = &a[row][j] / &pv;
        }
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..=k {
                    let t = &f * &a[row][j];
                    a[r][j] = &a[r][j] - &t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if a[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][k].clone();
    }
    Some(x)
}

pub fn mat_vec(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}
