//! The matrix abstraction consumed by the suitability search and the solver.
//!
//! Besides plain sparse matrices the solver must handle `A = B + u d^T`, the
//! transposed PageRank matrix with a dangling-node correction, without ever
//! forming the (dense) rank-one part.

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// A nonnegative square matrix that supports products and row relaxation.
pub trait Operator: Sync {
    fn dim(&self) -> usize;

    /// The diagonal entry `a_ii`.
    fn diagonal(&self, i: usize) -> f64;

    /// `y = A x`. Both slices have length [`Operator::dim`].
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// A per-sweep scalar computed once from the previous iterate.
    fn sweep_context(&self, _x_old: &[f64]) -> f64 {
        0.0
    }

    /// Adds `sum_{j != i} a_ij x_j` to `acc`, in ascending column order.
    ///
    /// `read(j, k)` returns the value of `x_j` to use, where `k` is the CSR
    /// position of the stored entry. Parts of the row that are not stored
    /// explicitly always use the previous iterate, which every schedule allows.
    fn accumulate_offdiag<F>(&self, i: usize, acc: f64, ctx: f64, x_old: &[f64], read: F) -> f64
    where
        F: FnMut(usize, usize) -> f64;

    /// The explicitly stored part of the matrix.
    fn stored(&self) -> &SparseMatrix;

    /// Largest number of floating-point terms summed when relaxing one row.
    fn max_row_terms(&self) -> usize {
        let s = self.stored();
        (0..s.dim()).map(|i| s.row_range(i).len()).max().unwrap_or(0)
    }
}

impl Operator for SparseMatrix {
    fn dim(&self) -> usize {
        SparseMatrix::dim(self)
    }

    fn diagonal(&self, i: usize) -> f64 {
        self.diag()[i]
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec_into(x, y);
    }

    #[inline]
    fn accumulate_offdiag<F>(&self, i: usize, mut acc: f64, _ctx: f64, _x_old: &[f64], mut read: F) -> f64
    where
        F: FnMut(usize, usize) -> f64,
    {
        let cols = self.col_indices();
        let vals = self.values();
        for k in self.row_range(i) {
            let j = cols[k];
            if j != i {
                acc += vals[k] * read(j, k);
            }
        }
        acc
    }

    fn stored(&self) -> &SparseMatrix {
        self
    }
}

/// `base + u d^T` with nonnegative `u` and `d`.
#[derive(Debug, Clone, Copy)]
pub struct RankOneUpdate<'a> {
    base: &'a SparseMatrix,
    u: &'a [f64],
    d: &'a [f64],
}

impl<'a> RankOneUpdate<'a> {
    pub fn new(base: &'a SparseMatrix, u: &'a [f64], d: &'a [f64]) -> Result<Self> {
        let n = base.dim();
        for v in [u, d] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
        }
        for (i, (&ui, &di)) in u.iter().zip(d).enumerate() {
            if !(ui.is_finite() && ui >= 0.0) {
                return Err(Error::InvalidEntry { row: i, col: 0, value: ui });
            }
            if !(di.is_finite() && di >= 0.0) {
                return Err(Error::InvalidEntry { row: 0, col: i, value: di });
            }
        }
        Ok(RankOneUpdate { base, u, d })
    }

    pub fn base(&self) -> &SparseMatrix {
        self.base
    }

    fn dot_d(&self, x: &[f64]) -> f64 {
        self.d.iter().zip(x).map(|(d, x)| d * x).sum()
    }
}

impl Operator for RankOneUpdate<'_> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn diagonal(&self, i: usize) -> f64 {
        self.base.diag()[i] + self.u[i] * self.d[i]
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.base.matvec_into(x, y);
        let dx = self.dot_d(x);
        for (yi, &ui) in y.iter_mut().zip(self.u) {
            *yi += ui * dx;
        }
    }

    fn sweep_context(&self, x_old: &[f64]) -> f64 {
        self.dot_d(x_old)
    }

    #[inline]
    fn accumulate_offdiag<F>(&self, i: usize, acc: f64, ctx: f64, x_old: &[f64], read: F) -> f64
    where
        F: FnMut(usize, usize) -> f64,
    {
        let acc = self.base.accumulate_offdiag(i, acc, 0.0, x_old, read);
        if self.u[i] == 0.0 {
            return acc;
        }
        // sum_{j != i} d_j x_j, taken entirely from the previous iterate.
        let rest = ctx - self.d[i] * x_old[i];
        acc + self.u[i] * rest
    }

    fn stored(&self) -> &SparseMatrix {
        self.base
    }

    fn max_row_terms(&self) -> usize {
        self.base.max_row_terms() + self.base.dim() + 3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_apply_matches_dense() {
        let base = SparseMatrix::from_dense(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0]).unwrap();
        let u = [0.2, 0.3, 0.5];
        let d = [0.0, 1.0, 0.0];
        let op = RankOneUpdate::new(&base, &u, &d).unwrap();
        let x = [1.0, 2.0, 4.0];
        let mut y = [0.0; 3];
        op.apply(&x, &mut y);
        // dense: base + u d^T
        let dense = [0.0, 1.0 + 0.2, 0.0, 0.0, 0.3, 0.0, 0.5, 0.5, 0.0];
        for i in 0..3 {
            let expect: f64 = (0..3).map(|j| dense[i * 3 + j] * x[j]).sum();
            assert!((y[i] - expect).abs() < 1e-15);
        }
        assert_eq!(op.diagonal(1), 0.3);
        assert_eq!(op.diagonal(0), 0.0);
    }

    #[test]
    fn rank_one_rejects_bad_vectors() {
        let base = SparseMatrix::zeros(2);
        assert!(RankOneUpdate::new(&base, &[1.0], &[1.0, 1.0]).is_err());
        assert!(RankOneUpdate::new(&base, &[1.0, -1.0], &[1.0, 1.0]).is_err());
    }
}
