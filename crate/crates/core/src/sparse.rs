//! Row-compressed storage for nonnegative square matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A nonnegative square matrix in compressed sparse row form.
///
/// Column indices are strictly increasing within each row, so every product
/// sums in ascending column order and results are reproducible bit for bit.
/// Off-diagonal zeros are never stored. The diagonal is additionally kept in
/// a dense array because every relaxation divides by `s - a_ii`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
    diag: Vec<f64>,
}

fn check_entry(row: usize, col: usize, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidEntry { row, col, value })
    }
}

impl SparseMatrix {
    /// The `n x n` zero matrix.
    pub fn zeros(n: usize) -> Self {
        SparseMatrix { n, row_offsets: vec![0; n + 1], col_indices: Vec::new(), values: Vec::new(), diag: vec![0.0; n] }
    }

    /// The `n x n` identity matrix.
    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, (0..n).map(|i| (i, i, 1.0))).expect("identity is valid")
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are summed.
    pub fn from_triplets<I>(n: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (row, col, value) in triplets {
            if row >= n {
                return Err(Error::IndexOutOfBounds { index: row, dim: n });
            }
            if col >= n {
                return Err(Error::IndexOutOfBounds { index: col, dim: n });
            }
            check_entry(row, col, value)?;
            entries.push((row, col, value));
        }
        // Stable sort keeps duplicate summation in input order.
        entries.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_offsets = vec![0usize; n + 1];
        let mut col_indices = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        let mut diag = vec![0.0; n];

        let mut k = 0;
        while k < entries.len() {
            let (row, col, mut value) = entries[k];
            k += 1;
            while k < entries.len() && entries[k].0 == row && entries[k].1 == col {
                value += entries[k].2;
                k += 1;
            }
            check_entry(row, col, value)?;
            if row == col {
                diag[row] = value;
            }
            if value != 0.0 {
                col_indices.push(col);
                values.push(value);
                row_offsets[row + 1] += 1;
            }
        }
        for i in 0..n {
            row_offsets[i + 1] += row_offsets[i];
        }
        Ok(SparseMatrix { n, row_offsets, col_indices, values, diag })
    }

    /// Builds a matrix from a row-major dense array. Used mostly in tests.
    pub fn from_dense(n: usize, dense: &[f64]) -> Result<Self> {
        if dense.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: dense.len() });
        }
        Self::from_triplets(n, dense.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(k, &v)| (k / n, k % n, v)))
    }

    /// Assembles a matrix from raw CSR arrays, validating every invariant.
    pub fn from_csr(n: usize, row_offsets: Vec<usize>, col_indices: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if row_offsets.len() != n + 1 {
            return Err(Error::DimensionMismatch { expected: n + 1, found: row_offsets.len() });
        }
        if col_indices.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: col_indices.len(), found: values.len() });
        }
        if row_offsets[0] != 0 || row_offsets[n] != values.len() {
            return Err(Error::MalformedStructure("row offsets do not span the entry arrays"));
        }
        let mut diag = vec![0.0; n];
        for i in 0..n {
            let (start, end) = (row_offsets[i], row_offsets[i + 1]);
            if start > end {
                return Err(Error::MalformedStructure("row offsets decrease"));
            }
            let mut prev = None;
            for k in start..end {
                let (col, value) = (col_indices[k], values[k]);
                if col >= n {
                    return Err(Error::IndexOutOfBounds { index: col, dim: n });
                }
                if prev.is_some_and(|p| p >= col) {
                    return Err(Error::MalformedStructure("column indices not strictly increasing"));
                }
                prev = Some(col);
                check_entry(i, col, value)?;
                if value == 0.0 {
                    return Err(Error::MalformedStructure("explicit zero stored"));
                }
                if col == i {
                    diag[i] = value;
                }
            }
        }
        Ok(SparseMatrix { n, row_offsets, col_indices, values, diag })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of stored entries, diagonal included.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Dense diagonal, zero where the entry is structurally absent.
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Range of CSR positions belonging to row `i`.
    pub fn row_range(&self, i: usize) -> core::ops::Range<usize> {
        self.row_offsets[i]..self.row_offsets[i + 1]
    }

    /// Stored entries of row `i` as `(column, value)` in ascending column order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_range(i);
        self.col_indices[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    /// Value at `(i, j)`, zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_range(i);
        match self.col_indices[range.clone()].binary_search(&j) {
            Ok(pos) => self.values[range.start + pos],
            Err(_) => 0.0,
        }
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// `y = A x` into a caller buffer. Panics on length mismatch.
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for (i, out) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_range(i) {
                acc += self.values[k] * x[self.col_indices[k]];
            }
            *out = acc;
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.values[self.row_range(i)].iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n];
        for (k, &col) in self.col_indices.iter().enumerate() {
            sums[col] += self.values[k];
        }
        sums
    }

    /// Indices of rows without stored entries.
    pub fn null_rows(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&i| self.row_offsets[i] == self.row_offsets[i + 1])
    }

    /// Normalizes every nonnull row to unit l1 norm.
    ///
    /// Returns the normalized matrix together with the dangling indicator
    /// `d`, which is 1 exactly on the null rows.
    pub fn row_normalize(&self) -> (SparseMatrix, Vec<f64>) {
        let mut values = self.values.clone();
        let mut dangling = vec![0.0; self.n];
        let mut diag = vec![0.0; self.n];
        for i in 0..self.n {
            let range = self.row_range(i);
            if range.is_empty() {
                dangling[i] = 1.0;
                continue;
            }
            let sum: f64 = self.values[range.clone()].iter().sum();
            for k in range {
                values[k] /= sum;
                if self.col_indices[k] == i {
                    diag[i] = values[k];
                }
            }
        }
        let normalized = SparseMatrix {
            n: self.n,
            row_offsets: self.row_offsets.clone(),
            col_indices: self.col_indices.clone(),
            values,
            diag,
        };
        (normalized, dangling)
    }

    /// Structural transpose. Output rows are again sorted by column.
    pub fn transpose(&self) -> SparseMatrix {
        let n = self.n;
        let mut row_offsets = vec![0usize; n + 1];
        for &col in &self.col_indices {
            row_offsets[col + 1] += 1;
        }
        for i in 0..n {
            row_offsets[i + 1] += row_offsets[i];
        }
        let mut cursor = row_offsets.clone();
        let mut col_indices = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for i in 0..n {
            for k in self.row_range(i) {
                let col = self.col_indices[k];
                let dst = cursor[col];
                cursor[col] += 1;
                col_indices[dst] = i;
                values[dst] = self.values[k];
            }
        }
        SparseMatrix { n, row_offsets, col_indices, values, diag: self.diag.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, dense: &[f64]) -> SparseMatrix {
        SparseMatrix::from_dense(n, dense).unwrap()
    }

    #[test]
    fn matvec_examples() {
        let perm = m(2, &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(perm.matvec(&[3.0, 1.0]).unwrap(), vec![1.0, 3.0]);
        let zero = SparseMatrix::zeros(3);
        assert_eq!(zero.matvec(&[1.0, -2.0, 5.0]).unwrap(), vec![0.0; 3]);
        let shift = m(2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(shift.matvec(&[3.0, 1.0]).unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let a = SparseMatrix::zeros(2);
        assert_eq!(a.matvec(&[1.0]), Err(Error::DimensionMismatch { expected: 2, found: 1 }));
    }

    #[test]
    fn duplicates_sum_and_zeros_are_dropped() {
        let a = SparseMatrix::from_triplets(2, [(0, 1, 3.0), (0, 1, 4.0), (1, 0, 0.0)]).unwrap();
        assert_eq!(a.get(0, 1), 7.0);
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.diag(), &[0.0, 0.0]);
    }

    #[test]
    fn diagonal_is_tracked() {
        let a = SparseMatrix::from_triplets(1, [(0, 0, 2.5)]).unwrap();
        assert_eq!(a.diag(), &[2.5]);
        let b = SparseMatrix::from_triplets(3, [(1, 1, 1.5), (1, 2, 1.0)]).unwrap();
        assert_eq!(b.diag(), &[0.0, 1.5, 0.0]);
    }

    #[test]
    fn rejects_negative_and_out_of_range() {
        assert!(matches!(
            SparseMatrix::from_triplets(2, [(0, 1, -1.0)]),
            Err(Error::InvalidEntry { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            SparseMatrix::from_triplets(2, [(0, 2, 1.0)]),
            Err(Error::IndexOutOfBounds { index: 2, dim: 2 })
        ));
        assert!(SparseMatrix::from_triplets(2, [(0, 1, f64::NAN)]).is_err());
    }

    #[test]
    fn row_normalize_examples() {
        let (g, d) = m(2, &[1.0, 1.0, 0.0, 0.0]).row_normalize();
        assert_eq!(g, m(2, &[0.5, 0.5, 0.0, 0.0]));
        assert_eq!(d, vec![0.0, 1.0]);

        let (g, d) = SparseMatrix::identity(3).row_normalize();
        assert_eq!(g, SparseMatrix::identity(3));
        assert_eq!(d, vec![0.0; 3]);

        let (g, d) = m(2, &[2.0, 6.0, 4.0, 0.0]).row_normalize();
        assert_eq!(g, m(2, &[0.25, 0.75, 1.0, 0.0]));
        assert_eq!(g.diag(), &[0.25, 0.0]);
        assert_eq!(d, vec![0.0, 0.0]);
    }

    #[test]
    fn transpose_examples() {
        let a = m(2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(a.transpose(), m(2, &[0.0, 0.0, 1.0, 0.0]));
        let sym = m(3, &[0.0, 2.0, 1.0, 2.0, 3.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(sym.transpose(), sym);
    }

    #[test]
    fn from_csr_validates() {
        assert!(SparseMatrix::from_csr(2, vec![0, 1, 2], vec![1, 0], vec![1.0, 2.0]).is_ok());
        assert!(SparseMatrix::from_csr(2, vec![0, 2, 2], vec![1, 0], vec![1.0, 2.0]).is_err());
        assert!(SparseMatrix::from_csr(2, vec![0, 1, 2], vec![1, 0], vec![0.0, 2.0]).is_err());
        assert!(SparseMatrix::from_csr(2, vec![0, 1, 1], vec![1, 0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn null_rows_are_found() {
        let a = m(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(a.null_rows().collect::<Vec<_>>(), vec![1]);
    }
}
