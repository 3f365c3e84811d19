//! Compressed sparse row matrices over any [`Scalar`].

use nalgebra::DMatrix;

use crate::scalar::{Accumulator, Real, Scalar};

/// CSR matrix. Column indices within a row are sorted and unique, and no
/// explicit zeros are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(vec![T::one(); n])
    }

    pub fn from_diagonal(diag: Vec<T>) -> Self {
        let n = diag.len();
        Self::from_triplets(n, n, diag.into_iter().enumerate().map(|(i, v)| (i, i, v)))
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    ///
    /// Panics if an index is out of bounds.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); nrows];
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i}, {j}) outside {nrows}x{ncols}");
            rows[i].push((j, v));
        }
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut row in rows {
            row.sort_by_key(|(j, _)| *j);
            let mut iter = row.into_iter().peekable();
            while let Some((j, mut v)) = iter.next() {
                while let Some((_, w)) = iter.next_if(|(jj, _)| *jj == j) {
                    v = v + w;
                }
                if !v.is_zero() {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzeros of row `i` as `(column, value)` pairs.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, &T)> {
        let range = self.indptr[i]..self.indptr[i + 1];
        self.indices[range.clone()].iter().copied().zip(&self.values[range])
    }

    /// All nonzeros in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        (0..self.nrows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let range = self.indptr[i]..self.indptr[i + 1];
        match self.indices[range.clone()].binary_search(&j) {
            Ok(pos) => self.values[range.start + pos].clone(),
            Err(_) => T::zero(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.triplets().map(|(i, j, v)| (j, i, v.clone())))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CsrMatrix<U> {
        CsrMatrix::from_triplets(self.nrows, self.ncols, self.triplets().map(|(i, j, v)| (i, j, f(v))))
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        Self::from_triplets(
            self.nrows,
            self.ncols,
            self.triplets().chain(other.triplets()).map(|(i, j, v)| (i, j, v.clone())),
        )
    }

    /// Exact product in the scalar's own arithmetic.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "inner dimension mismatch in matmul");
        let mut triplets = Vec::new();
        for i in 0..self.nrows {
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    triplets.push((i, j, a.clone() * b.clone()));
                }
            }
        }
        Self::from_triplets(self.nrows, other.ncols, triplets)
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.ncols, "vector length mismatch in matvec");
        (0..self.nrows)
            .map(|i| self.row(i).fold(T::zero(), |acc, (j, v)| acc + v.clone() * x[j].clone()))
            .collect()
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&Self]) -> Self {
        let ncols = blocks.first().map_or(0, |b| b.ncols);
        let mut offset = 0;
        let mut triplets = Vec::new();
        for b in blocks {
            assert_eq!(b.ncols, ncols, "column mismatch in vstack");
            triplets.extend(b.triplets().map(|(i, j, v)| (i + offset, j, v.clone())));
            offset += b.nrows;
        }
        Self::from_triplets(offset, ncols, triplets)
    }

    /// Block-diagonal direct sum.
    pub fn block_diag(blocks: &[&Self]) -> Self {
        let (mut r, mut c) = (0, 0);
        let mut triplets = Vec::new();
        for b in blocks {
            triplets.extend(b.triplets().map(|(i, j, v)| (i + r, j + c, v.clone())));
            r += b.nrows;
            c += b.ncols;
        }
        Self::from_triplets(r, c, triplets)
    }
}

impl<T: Real> CsrMatrix<T> {
    pub fn to_dense(&self) -> DMatrix<T> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = *v;
        }
        m
    }

    /// Sparse copy of a dense matrix, dropping entries with `|x| <= drop_tol`.
    pub fn from_dense(m: &DMatrix<T>, drop_tol: T) -> Self {
        let (r, c) = m.shape();
        let triplets = (0..r)
            .flat_map(|i| (0..c).map(move |j| (i, j)))
            .filter(|&(i, j)| m[(i, j)].abs() > drop_tol)
            .map(|(i, j)| (i, j, m[(i, j)]));
        Self::from_triplets(r, c, triplets)
    }

    /// Product whose entries are accumulated with error-free transformations,
    /// so products of integer stencils times a common scale cancel exactly.
    pub fn matmul_compensated(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "inner dimension mismatch in matmul");
        let mut acc = vec![Accumulator::new(); other.ncols];
        let mut mass = vec![T::zero(); other.ncols];
        let mut terms = vec![0usize; other.ncols];
        let mut touched = vec![false; other.ncols];
        let mut cols = Vec::new();
        let mut triplets = Vec::new();
        for i in 0..self.nrows {
            for (k, &a) in self.row(i) {
                for (j, &b) in other.row(k) {
                    if !touched[j] {
                        touched[j] = true;
                        cols.push(j);
                    }
                    acc[j].add_product(a, b);
                    mass[j] += (a * b).abs();
                    terms[j] += 1;
                }
            }
            for &j in &cols {
                // below the error bound of the double-length sum: exact zero
                let eps = T::default_epsilon();
                let floor = T::of(2.0 * terms[j] as f64) * eps * eps * mass[j];
                let v = acc[j].value();
                if v.abs() > floor {
                    triplets.push((i, j, v));
                }
                acc[j] = Accumulator::new();
                mass[j] = T::zero();
                terms[j] = 0;
                touched[j] = false;
            }
            cols.clear();
        }
        Self::from_triplets(self.nrows, other.ncols, triplets)
    }

    /// Matrix-vector product with compensated row sums.
    pub fn matvec_compensated(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.ncols, "vector length mismatch in matvec");
        (0..self.nrows)
            .map(|i| {
                let mut acc = Accumulator::new();
                for (j, &v) in self.row(i) {
                    acc.add_product(v, x[j]);
                }
                acc.value()
            })
            .collect()
    }

    /// Sparse times dense.
    pub fn mul_dense(&self, m: &DMatrix<T>) -> DMatrix<T> {
        assert_eq!(self.ncols, m.nrows(), "inner dimension mismatch in mul_dense");
        let mut out = DMatrix::zeros(self.nrows, m.ncols());
        for i in 0..self.nrows {
            for (k, &v) in self.row(i) {
                for c in 0..m.ncols() {
                    out[(i, c)] += v * m[(k, c)];
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed_and_zeros_dropped() {
        let m = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1i64), (0, 0, 2), (1, 1, 3), (1, 1, -3)]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 0), 3);
        assert_eq!(m.get(1, 1), 0);
    }

    #[test]
    fn matmul_and_transpose() {
        let a = CsrMatrix::from_triplets(2, 3, vec![(0, 0, 1i64), (0, 2, 2), (1, 1, -1)]);
        let at = a.transpose();
        assert_eq!(at.shape(), (3, 2));
        let g = a.matmul(&at);
        assert_eq!(g.get(0, 0), 5);
        assert_eq!(g.get(1, 1), 1);
        assert_eq!(g.get(0, 1), 0);
    }

    #[test]
    fn compensated_product_cancels_scaled_stencils() {
        let s = 1.0 / (2.0 * std::f64::consts::PI / 16.0);
        let q = s * s;
        // rows sum 3q - q - 2q which a naive accumulation may leave nonzero
        let a = CsrMatrix::from_triplets(1, 4, vec![(0, 0, q), (0, 1, 2.0 * q), (0, 2, -q), (0, 3, -2.0 * q)]);
        let b = CsrMatrix::from_triplets(4, 1, vec![(0, 0, s), (1, 0, s), (2, 0, s), (3, 0, s)]);
        assert_eq!(a.matmul_compensated(&b).nnz(), 0);
    }

    #[test]
    fn stacking() {
        let a = CsrMatrix::<i64>::identity(2);
        let b = CsrMatrix::from_triplets(1, 2, vec![(0, 1, 7)]);
        let s = CsrMatrix::vstack(&[&a, &b]);
        assert_eq!(s.shape(), (3, 2));
        assert_eq!(s.get(2, 1), 7);
        let d = CsrMatrix::block_diag(&[&a, &b]);
        assert_eq!(d.shape(), (3, 4));
        assert_eq!(d.get(2, 3), 7);
    }
}
