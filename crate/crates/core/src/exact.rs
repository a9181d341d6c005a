//! Exact rational Gauss-Jordan elimination for small integer matrices.

use nalgebra::DMatrix;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(a: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn to_rational(m: &DMatrix<i64>) -> Vec<Vec<BigRational>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| BigRational::from_integer(BigInt::from(m[(i, j)]))).collect())
        .collect()
}

/// Rank over the rationals.
pub fn rank(m: &DMatrix<i64>) -> usize {
    let mut a = to_rational(m);
    rref(&mut a, m.ncols()).len()
}

/// Integer basis of `{w : w^T M = 0}`. Each vector is primitive (gcd 1) with
/// its first nonzero entry positive.
pub fn left_null_space(m: &DMatrix<i64>) -> Vec<Vec<i64>> {
    let t = m.transpose();
    let n = t.ncols();
    let mut a = to_rational(&t);
    let pivots = rref(&mut a, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            primitive_integer_vector(&v)
        })
        .collect()
}

fn primitive_integer_vector(v: &[BigRational]) -> Vec<i64> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.iter()
        .map(|x| (x / &g * &sign).to_i64().expect("null-space entry fits in i64"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&DMatrix::from_row_slice(2, 2, &[1, 2, 2, 4])), 1);
        assert_eq!(rank(&DMatrix::<i64>::identity(3, 3)), 3);
        assert_eq!(rank(&DMatrix::<i64>::zeros(2, 3)), 0);
    }

    #[test]
    fn left_null_space_examples() {
        assert!(left_null_space(&DMatrix::<i64>::identity(2, 2)).is_empty());
        assert_eq!(left_null_space(&DMatrix::from_row_slice(2, 1, &[1, 1])), vec![vec![1, -1]]);
        let z = DMatrix::from_row_slice(4, 2, &[1, 0, 3, 0, 0, 1, 0, 3]);
        assert_eq!(left_null_space(&z), vec![vec![3, -1, 0, 0], vec![0, 0, 3, -1]]);
    }
}
