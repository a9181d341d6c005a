//! Dense kernels for the Schur complement of a column-conservative Laplacian.

use nalgebra::{DMatrix, DVector, LU};

/// Symmetric permutation putting `kept` first, then `removed`.
pub fn permute(l: &DMatrix<f64>, kept: &[usize], removed: &[usize]) -> DMatrix<f64> {
    let order: Vec<usize> = kept.iter().chain(removed).copied().collect();
    let n = order.len();
    DMatrix::from_fn(n, n, |i, j| l[(order[i], order[j])])
}

/// Schur complement of the trailing `n - k` block of `w` by eliminating one
/// vertex at a time. Each pivot is the outflow of the eliminated vertex into
/// the vertices still present, and diagonals are rebuilt from their columns,
/// so off-diagonals never change sign and column sums stay zero.
///
/// Returns `None` when some pivot is not positive (a removed vertex with no
/// path to a kept vertex).
pub fn kron_reduce_gth(mut w: DMatrix<f64>, k: usize) -> Option<DMatrix<f64>> {
    let n = w.nrows();
    for p in (k..n).rev() {
        let mut s = 0.0;
        for i in 0..p {
            s -= w[(i, p)];
        }
        if !(s > 0.0) {
            return None;
        }
        for j in 0..p {
            let lpj = w[(p, j)];
            if lpj == 0.0 {
                continue;
            }
            for i in 0..p {
                if i != j {
                    w[(i, j)] -= w[(i, p)] * lpj / s;
                }
            }
        }
        for j in 0..p {
            let mut d = 0.0;
            for i in 0..p {
                if i != j {
                    d -= w[(i, j)];
                }
            }
            w[(j, j)] = d;
        }
    }
    Some(w.view((0, 0), (k, k)).into_owned())
}

/// Partitioned blocks of a permuted Laplacian.
pub struct Blocks {
    pub l11: DMatrix<f64>,
    pub l12: DMatrix<f64>,
    pub l21: DMatrix<f64>,
    pub l22: DMatrix<f64>,
}

pub fn split(w: &DMatrix<f64>, k: usize) -> Blocks {
    let n = w.nrows();
    let r = n - k;
    Blocks {
        l11: w.view((0, 0), (k, k)).into_owned(),
        l12: w.view((0, k), (k, r)).into_owned(),
        l21: w.view((k, 0), (r, k)).into_owned(),
        l22: w.view((k, k), (r, r)).into_owned(),
    }
}

/// LU of `L22` with a 1-norm condition number from the explicit inverse.
pub struct Factored {
    pub lu: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    pub condition: f64,
}

fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn factor(l22: &DMatrix<f64>) -> Factored {
    let lu = l22.clone().lu();
    let condition = if l22.nrows() == 0 {
        1.0
    } else {
        match lu.try_inverse() {
            Some(inv) => {
                let c = norm1(l22) * norm1(&inv);
                if c.is_finite() { c } else { f64::INFINITY }
            }
            None => f64::INFINITY,
        }
    };
    Factored { lu, condition }
}

impl Factored {
    pub fn solve_vec(&self, b: &DVector<f64>) -> DVector<f64> {
        if b.is_empty() {
            return b.clone();
        }
        self.lu.solve(b).expect("factor checked nonsingular")
    }

    pub fn solve_mat(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        if b.nrows() == 0 {
            return b.clone();
        }
        self.lu.solve(b).expect("factor checked nonsingular")
    }
}

/// `L11 - L12 L22^{-1} L21` through the LU factor.
pub fn kron_reduce_lu(blocks: &Blocks, f: &Factored) -> DMatrix<f64> {
    &blocks.l11 - &blocks.l12 * f.solve_mat(&blocks.l21)
}

/// `P y = y1 - L12 L22^{-1} y2`.
pub fn apply_p(blocks: &Blocks, f: &Factored, y1: &DVector<f64>, y2: &DVector<f64>) -> DVector<f64> {
    y1 - &blocks.l12 * f.solve_vec(y2)
}
