//! Exact elimination kernels: Bareiss determinants and integer kernels.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::Fp;

/// Determinant of a square integer matrix by Bareiss fraction-free elimination.
pub fn det_i128(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Bareiss determinant over arbitrary-precision integers.
pub fn det_bigint(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant over the prime field by Gaussian elimination.
pub fn det_fp(mut a: Vec<Vec<Fp>>) -> Fp {
    let n = a.len();
    let mut det = Fp::ONE;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Fp::ZERO;
        };
        if p != k {
            a.swap(k, p);
            det = -det;
        }
        let pivot = a[k][k];
        det = det * pivot;
        let inv = pivot.inverse();
        for i in k + 1..n {
            let factor = a[i][k] * inv;
            if factor.is_zero() {
                continue;
            }
            for j in k..n {
                let t = a[k][j] * factor;
                a[i][j] = a[i][j] - t;
            }
        }
    }
    det
}

/// Kernel of a rational matrix, computed fraction-free.
///
/// Each row is first scaled to integers, then reduced to row echelon form
/// with Bareiss steps (pivot = first nonzero entry at or below the
/// diagonal, scanning columns left to right). Returns a basis of the
/// kernel with one vector per free column.
pub fn rational_kernel(rows: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    let n = a.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r >= n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..n {
            for j in c + 1..cols {
                let v = (&a[i][j] * &a[r][c] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate().rev() {
                let mut acc = BigRational::zero();
                for j in pc + 1..cols {
                    if !a[row][j].is_zero() && !x[j].is_zero() {
                        acc += BigRational::from_integer(a[row][j].clone()) * &x[j];
                    }
                }
                x[pc] = -acc / BigRational::from_integer(a[row][pc].clone());
            }
            x
        })
        .collect()
}

fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}
