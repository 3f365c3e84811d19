use nalgebra::{Cholesky, DMatrix};

use crate::error::{Error, Result};
use crate::scalar::{dot, Real};
use crate::sparse::CsrMatrix;

/// One independent diagonal block of a gram matrix together with its
/// lower Cholesky factor.
#[derive(Debug, Clone)]
struct Block<T: Real> {
    idx: Vec<usize>,
    g: DMatrix<T>,
    l: DMatrix<T>,
}

impl<T: Real> Block<T> {
    /// `G_b⁻¹ M`; `1x1` blocks divide directly so diagonal weights invert exactly.
    fn solve(&self, m: &DMatrix<T>) -> DMatrix<T> {
        if self.idx.len() == 1 {
            return m / self.g[(0, 0)];
        }
        let y = self.l.solve_lower_triangular(m).expect("cholesky factor is nonsingular");
        self.l.transpose().solve_upper_triangular(&y).expect("cholesky factor is nonsingular")
    }
}

/// Symmetric positive-definite weights with block-diagonal structure.
///
/// Blocks are the connected components of the sparsity pattern, so a
/// diagonal gram has only `1x1` blocks and the dense fallback is a single
/// block. All solves go through per-block Cholesky factors.
#[derive(Debug, Clone)]
pub struct Gram<T: Real> {
    matrix: CsrMatrix<T>,
    blocks: Vec<Block<T>>,
}

impl<T: Real> Gram<T> {
    pub fn new(matrix: CsrMatrix<T>) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c {
            return Err(Error::InvalidGram(format!("gram must be square, got {r}x{c}")));
        }
        let scale = matrix.max_abs();
        let tol = T::sequence_rtol() * scale;
        for (i, j, v) in matrix.triplets() {
            if (*v - matrix.get(j, i)).abs() > tol {
                return Err(Error::InvalidGram(format!("not symmetric at ({i}, {j})")));
            }
        }

        // connected components of the pattern
        let mut parent: Vec<usize> = (0..r).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, j, _) in matrix.triplets() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); r];
        for i in 0..r {
            let root = find(&mut parent, i);
            members[root].push(i);
        }

        let mut blocks = Vec::new();
        for idx in members.into_iter().filter(|m| !m.is_empty()) {
            let b = idx.len();
            let sub = DMatrix::from_fn(b, b, |p, q| {
                let half = T::of(0.5);
                (matrix.get(idx[p], idx[q]) + matrix.get(idx[q], idx[p])) * half
            });
            let l = if b == 1 {
                if sub[(0, 0)] <= T::zero() {
                    return Err(Error::InvalidGram(format!("nonpositive weight at {}", idx[0])));
                }
                DMatrix::from_element(1, 1, sub[(0, 0)].sqrt())
            } else {
                Cholesky::new(sub.clone())
                    .ok_or_else(|| Error::InvalidGram(format!("block at {} is not positive definite", idx[0])))?
                    .l()
            };
            blocks.push(Block { idx, g: sub, l });
        }
        Ok(Self { matrix, blocks })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![T::one(); n]).expect("identity is SPD")
    }

    pub fn diagonal(weights: Vec<T>) -> Result<Self> {
        Self::new(CsrMatrix::from_diagonal(weights))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CsrMatrix<T> {
        &self.matrix
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        self.matrix.to_dense()
    }

    pub fn is_diagonal(&self) -> bool {
        self.blocks.iter().all(|b| b.idx.len() == 1)
    }

    /// `G x`
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        self.matrix.matvec_compensated(x)
    }

    /// `xᵀ G y`
    pub fn inner(&self, x: &[T], y: &[T]) -> T {
        dot(x, &self.apply(y))
    }

    /// `G⁻¹ b`
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let m = DMatrix::from_column_slice(b.len(), 1, b);
        self.map_rows(&m, |b, sub| b.solve(&sub)).as_slice().to_vec()
    }

    fn map_rows(&self, m: &DMatrix<T>, f: impl Fn(&Block<T>, DMatrix<T>) -> DMatrix<T>) -> DMatrix<T> {
        assert_eq!(m.nrows(), self.dim(), "row count must equal gram dimension");
        let mut out = DMatrix::zeros(m.nrows(), m.ncols());
        for b in &self.blocks {
            let sub = DMatrix::from_fn(b.idx.len(), m.ncols(), |p, c| m[(b.idx[p], c)]);
            let res = f(b, sub);
            for (p, &i) in b.idx.iter().enumerate() {
                for c in 0..m.ncols() {
                    out[(i, c)] = res[(p, c)];
                }
            }
        }
        out
    }

    /// `Lᵀ M` where `G = L Lᵀ`.
    pub fn lt_mul_dense(&self, m: &DMatrix<T>) -> DMatrix<T> {
        self.map_rows(m, |b, sub| b.l.transpose() * sub)
    }

    /// `L⁻ᵀ M` where `G = L Lᵀ`.
    pub fn lt_solve_dense(&self, m: &DMatrix<T>) -> DMatrix<T> {
        self.map_rows(m, |b, sub| {
            b.l.transpose()
                .solve_upper_triangular(&sub)
                .expect("cholesky factor is nonsingular")
        })
    }

    /// `L⁻¹ M` where `G = L Lᵀ`.
    pub fn l_solve_dense(&self, m: &DMatrix<T>) -> DMatrix<T> {
        self.map_rows(m, |b, sub| b.l.solve_lower_triangular(&sub).expect("cholesky factor is nonsingular"))
    }

    /// `G M`
    pub fn mul_dense(&self, m: &DMatrix<T>) -> DMatrix<T> {
        self.matrix.mul_dense(m)
    }

    /// `G⁻¹ M` for a sparse `M`, solved block by block so the result keeps
    /// the sparsity of `M` up to block fill-in.
    pub fn solve_sparse(&self, m: &CsrMatrix<T>) -> CsrMatrix<T> {
        assert_eq!(m.nrows(), self.dim(), "row count must equal gram dimension");
        let mut triplets = Vec::new();
        for b in &self.blocks {
            let mut cols: Vec<usize> = b.idx.iter().flat_map(|&i| m.row(i).map(|(j, _)| j)).collect();
            cols.sort_unstable();
            cols.dedup();
            if cols.is_empty() {
                continue;
            }
            let sub = DMatrix::from_fn(b.idx.len(), cols.len(), |p, c| m.get(b.idx[p], cols[c]));
            let x = b.solve(&sub);
            for (p, &i) in b.idx.iter().enumerate() {
                for (c, &j) in cols.iter().enumerate() {
                    triplets.push((i, j, x[(p, c)]));
                }
            }
        }
        CsrMatrix::from_triplets(m.nrows(), m.ncols(), triplets)
    }

    /// Block-diagonal direct sum of several grams.
    pub fn direct_sum(parts: &[&Gram<T>]) -> Gram<T> {
        let mats: Vec<&CsrMatrix<T>> = parts.iter().map(|g| &g.matrix).collect();
        let matrix = CsrMatrix::block_diag(&mats);
        let mut blocks = Vec::new();
        let mut offset = 0;
        for g in parts {
            blocks.extend(g.blocks.iter().map(|b| Block {
                idx: b.idx.iter().map(|i| i + offset).collect(),
                g: b.g.clone(),
                l: b.l.clone(),
            }));
            offset += g.dim();
        }
        Gram { matrix, blocks }
    }
}

impl<T: Real> PartialEq for Gram<T> {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

/// Finite-dimensional real Hilbert space `(ℝⁿ, ⟨x, y⟩ = xᵀ G y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProductSpace<T: Real> {
    gram: Gram<T>,
}

impl<T: Real> InnerProductSpace<T> {
    pub fn new(gram: Gram<T>) -> Self {
        Self { gram }
    }

    /// Euclidean space of dimension `n`.
    pub fn euclidean(n: usize) -> Self {
        Self::new(Gram::identity(n))
    }

    pub fn weighted(weights: Vec<T>) -> Result<Self> {
        Ok(Self::new(Gram::diagonal(weights)?))
    }

    pub fn from_dense_gram(g: &DMatrix<T>) -> Result<Self> {
        if g.nrows() != g.ncols() {
            return Err(Error::InvalidGram(format!("gram must be square, got {}x{}", g.nrows(), g.ncols())));
        }
        Ok(Self::new(Gram::new(CsrMatrix::from_dense(g, T::zero()))?))
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn gram(&self) -> &Gram<T> {
        &self.gram
    }

    pub fn inner(&self, x: &[T], y: &[T]) -> T {
        self.gram.inner(x, y)
    }

    pub fn norm(&self, x: &[T]) -> T {
        self.inner(x, x).max(T::zero()).sqrt()
    }

    pub fn direct_sum(parts: &[&InnerProductSpace<T>]) -> Self {
        let grams: Vec<&Gram<T>> = parts.iter().map(|s| &s.gram).collect();
        Self::new(Gram::direct_sum(&grams))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonsymmetric_and_indefinite() {
        let ns = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (0, 1, 0.5), (1, 1, 1.0)]);
        assert!(matches!(Gram::new(ns), Err(Error::InvalidGram(_))));
        let indef = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 1.0)]);
        assert!(matches!(Gram::new(indef), Err(Error::InvalidGram(_))));
        assert!(Gram::diagonal(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn block_solve_matches_dense_inverse() {
        let m = CsrMatrix::from_triplets(
            3,
            3,
            vec![(0, 0, 2.0), (0, 2, 1.0), (2, 0, 1.0), (2, 2, 2.0), (1, 1, 4.0)],
        );
        let g = Gram::new(m).unwrap();
        assert!(!g.is_diagonal());
        let x: Vec<f64> = g.solve(&[1.0, 2.0, 3.0]);
        let dense = g.to_dense().try_inverse().unwrap() * nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0]);
        for i in 0..3 {
            assert!((x[i] - dense[i]).abs() < 1e-14);
        }
        let id = DMatrix::<f64>::identity(3, 3);
        let l_t = g.lt_mul_dense(&id);
        let back = g.lt_solve_dense(&l_t);
        assert!((back - id).norm() < 1e-14);
    }

    #[test]
    fn weighted_inner_product() {
        let s = InnerProductSpace::weighted(vec![2.0, 1.0]).unwrap();
        assert_eq!(s.inner(&[1.0, 1.0], &[3.0, 4.0]), 10.0);
    }
}
