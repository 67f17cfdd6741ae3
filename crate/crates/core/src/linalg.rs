//! Dense linear solves for the small systems that arise in the kernel and
//! connection constructions.
//!
//! The rational backend uses fraction-free (Bareiss) elimination so that the
//! intermediate entries stay single divisions of determinants; the float
//! backend uses partial-pivoted Gaussian elimination.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative pivot threshold below which the float backend declares a matrix
/// singular.
const FLOAT_PIVOT_TOL: f64 = 1e-12;

fn matrix_scale<S: Scalar>(matrix: &[Vec<S>]) -> f64 {
    matrix
        .iter()
        .flat_map(|row| row.iter())
        .map(|entry| entry.to_f64_lossy().abs())
        .fold(0.0, f64::max)
        .max(1.0)
}

fn pivot_is_zero<S: Scalar>(pivot: &S, scale: f64) -> bool {
    if S::EXACT {
        pivot.is_zero()
    } else {
        pivot.to_f64_lossy().abs() <= FLOAT_PIVOT_TOL * scale
    }
}

/// Picks the pivot row for column `col` among rows `col..n`: the first
/// nonzero entry on the exact backend, the largest magnitude on the float
/// backend. Returns `None` when every candidate is (effectively) zero.
fn choose_pivot<S: Scalar>(work: &[Vec<S>], col: usize, scale: f64) -> Option<usize> {
    let n = work.len();
    if S::EXACT {
        (col..n).find(|&r| !work[r][col].is_zero())
    } else {
        let best = (col..n).max_by(|&a, &b| {
            let ma = work[a][col].to_f64_lossy().abs();
            let mb = work[b][col].to_f64_lossy().abs();
            ma.partial_cmp(&mb).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        (!pivot_is_zero(&work[best][col], scale)).then_some(best)
    }
}

/// Forward elimination shared by the solver and the determinant.
///
/// Runs on an augmented matrix with `n` pivot columns and any number of extra
/// columns. Returns the sign of the row permutation, or `None` when a pivot
/// column is zero (singular matrix). On the exact backend this is Bareiss
/// elimination: every division is exact and the final pivot is the
/// determinant times the permutation sign.
fn eliminate<S: Scalar>(work: &mut [Vec<S>], pivot_cols: usize, scale: f64) -> Option<i8> {
    let mut sign = 1i8;
    let mut previous_pivot = S::one();
    for col in 0..pivot_cols {
        let pivot_row = choose_pivot(work, col, scale)?;
        if pivot_row != col {
            work.swap(pivot_row, col);
            sign = -sign;
        }
        let pivot = work[col][col].clone();
        for row in col + 1..work.len() {
            let factor = work[row][col].clone();
            for j in col + 1..work[row].len() {
                let mut entry =
                    pivot.clone() * work[row][j].clone() - factor.clone() * work[col][j].clone();
                if S::EXACT {
                    entry = entry / previous_pivot.clone();
                }
                work[row][j] = entry;
            }
            work[row][col] = S::zero();
        }
        if !S::EXACT {
            for row in work.iter_mut().skip(col + 1) {
                for entry in row.iter_mut().skip(col + 1) {
                    let scaled = entry.clone() / pivot.clone();
                    *entry = scaled;
                }
            }
        }
        previous_pivot = pivot;
    }
    Some(sign)
}

/// Determinant of a square matrix.
pub fn determinant<S: Scalar>(matrix: &[Vec<S>]) -> S {
    let n = matrix.len();
    debug_assert!(matrix.iter().all(|row| row.len() == n));
    if n == 0 {
        return S::one();
    }
    let scale = matrix_scale(matrix);
    let mut work: Vec<Vec<S>> = matrix.to_vec();
    let Some(sign) = eliminate(&mut work, n - 1, scale) else {
        return S::zero();
    };
    let mut det = work[n - 1][n - 1].clone();
    if !S::EXACT {
        for (col, row) in work.iter().enumerate().take(n - 1) {
            det = det * row[col].clone();
        }
    }
    if sign < 0 {
        det = -det;
    }
    det
}

/// Solves `matrix * x = rhs` for square `matrix`.
pub fn solve<S: Scalar>(matrix: &[Vec<S>], rhs: &[S], context: &'static str) -> Result<Vec<S>> {
    let n = matrix.len();
    debug_assert_eq!(rhs.len(), n);
    debug_assert!(matrix.iter().all(|row| row.len() == n));
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = matrix_scale(matrix);
    let mut work: Vec<Vec<S>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut augmented = row.clone();
            augmented.push(b.clone());
            augmented
        })
        .collect();
    if eliminate(&mut work, n - 1, scale).is_none() {
        return Err(Error::SingularSystem { context });
    }
    let last_pivot = work[n - 1][n - 1].clone();
    if pivot_is_zero(&last_pivot, scale) {
        return Err(Error::SingularSystem { context });
    }
    let mut solution = vec![S::zero(); n];
    for row in (0..n).rev() {
        let mut value = work[row][n].clone();
        for col in row + 1..n {
            value = value - work[row][col].clone() * solution[col].clone();
        }
        solution[row] = value / work[row][row].clone();
    }
    Ok(solution)
}

/// Inverse of a square matrix, column by column.
pub fn invert<S: Scalar>(matrix: &[Vec<S>], context: &'static str) -> Result<Vec<Vec<S>>> {
    let n = matrix.len();
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let mut unit = vec![S::zero(); n];
        unit[j] = S::one();
        columns.push(solve(matrix, &unit, context)?);
    }
    let mut inverse = vec![vec![S::zero(); n]; n];
    for (j, column) in columns.iter().enumerate() {
        for (i, value) in column.iter().enumerate() {
            inverse[i][j] = value.clone();
        }
    }
    Ok(inverse)
}

/// Identity matrix of the given size.
pub fn identity<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    let mut matrix = vec![vec![S::zero(); n]; n];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[i] = S::one();
    }
    matrix
}

/// Matrix-vector product.
pub fn mat_vec<S: Scalar>(matrix: &[Vec<S>], vector: &[S]) -> Vec<S> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(vector)
                .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}
