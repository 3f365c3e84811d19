use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linops::space::InnerProductSpace;
use crate::scalar::Real;
use crate::sparse::CsrMatrix;

/// Linear map between two finite-dimensional inner-product spaces.
///
/// In finite dimensions every map is everywhere defined, closed and has
/// closed range, so the domain/closedness qualifiers of unbounded operators
/// carry no information here.
#[derive(Debug, Clone)]
pub struct LinearMap<T: Real> {
    domain: Arc<InnerProductSpace<T>>,
    codomain: Arc<InnerProductSpace<T>>,
    entries: CsrMatrix<T>,
}

impl<T: Real> LinearMap<T> {
    pub fn new(
        domain: Arc<InnerProductSpace<T>>,
        codomain: Arc<InnerProductSpace<T>>,
        entries: CsrMatrix<T>,
    ) -> Result<Self> {
        if entries.nrows() != codomain.dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim(),
                found: entries.nrows(),
            });
        }
        if entries.ncols() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: entries.ncols(),
            });
        }
        Ok(Self {
            domain,
            codomain,
            entries,
        })
    }

    /// Map between Euclidean spaces given by a dense matrix.
    pub fn from_dense(m: &DMatrix<T>) -> Self {
        let (r, c) = m.shape();
        Self::new(
            Arc::new(InnerProductSpace::euclidean(c)),
            Arc::new(InnerProductSpace::euclidean(r)),
            CsrMatrix::from_dense(m, T::zero()),
        )
        .expect("shapes agree by construction")
    }

    pub fn zero(domain: Arc<InnerProductSpace<T>>, codomain: Arc<InnerProductSpace<T>>) -> Self {
        let entries = CsrMatrix::zeros(codomain.dim(), domain.dim());
        Self {
            domain,
            codomain,
            entries,
        }
    }

    pub fn identity(space: Arc<InnerProductSpace<T>>) -> Self {
        let entries = CsrMatrix::identity(space.dim());
        Self {
            domain: space.clone(),
            codomain: space,
            entries,
        }
    }

    pub fn domain(&self) -> &Arc<InnerProductSpace<T>> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<InnerProductSpace<T>> {
        &self.codomain
    }

    pub fn entries(&self) -> &CsrMatrix<T> {
        &self.entries
    }

    pub fn shape(&self) -> (usize, usize) {
        self.entries.shape()
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        self.entries.matvec_compensated(x)
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            entries: self.entries.scale(s),
        }
    }

    /// Weighted adjoint `G_dom⁻¹ Aᵀ G_cod`, characterised by
    /// `⟨A x, y⟩_cod = ⟨x, A* y⟩_dom`.
    pub fn adjoint(&self) -> Self {
        let at_g = self.entries.transpose().matmul(self.codomain.gram().matrix());
        let entries = self.domain.gram().solve_sparse(&at_g);
        Self {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            entries,
        }
    }

    /// Dense reference for [`adjoint`](Self::adjoint) using an explicit gram inverse.
    pub fn adjoint_dense(&self) -> DMatrix<T> {
        let inv = self
            .domain
            .gram()
            .to_dense()
            .try_inverse()
            .expect("gram matrices are invertible");
        inv * self.entries.to_dense().transpose() * self.codomain.gram().to_dense()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap<T>) -> Result<Self> {
        if !Arc::ptr_eq(&inner.codomain, &self.domain) && *inner.codomain != *self.domain {
            return Err(Error::SpaceMismatch("codomain of the inner map differs from the domain of the outer map".into()));
        }
        Ok(Self {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            entries: self.entries.matmul_compensated(&inner.entries),
        })
    }

    /// Stacks maps with a common domain into one map into the direct sum of
    /// their codomains.
    pub fn stack(maps: &[&LinearMap<T>]) -> Result<Self> {
        let first = maps
            .first()
            .ok_or_else(|| Error::Precondition("stack needs at least one map".into()))?;
        for m in maps {
            if *m.domain != *first.domain {
                return Err(Error::SpaceMismatch("stacked maps must share their domain".into()));
            }
        }
        let cods: Vec<&InnerProductSpace<T>> = maps.iter().map(|m| m.codomain.as_ref()).collect();
        let ents: Vec<&CsrMatrix<T>> = maps.iter().map(|m| &m.entries).collect();
        Ok(Self {
            domain: first.domain.clone(),
            codomain: Arc::new(InnerProductSpace::direct_sum(&cods)),
            entries: CsrMatrix::vstack(&ents),
        })
    }

    /// Dense matrix of the map in gram-orthonormal coordinates,
    /// `Lᵀ_cod A L⁻ᵀ_dom`, whose Euclidean singular values are the weighted
    /// singular values of the map.
    pub fn weighted_dense(&self) -> DMatrix<T> {
        let a = self.entries.to_dense();
        let left = self.codomain.gram().lt_mul_dense(&a);
        // (Lᵀ_cod A) L⁻ᵀ_dom = (L⁻¹_dom (Lᵀ_cod A)ᵀ)ᵀ
        self.domain.gram().l_solve_dense(&left.transpose()).transpose()
    }

    /// Gram-weighted operator norm, by power iteration on `A* A`.
    pub fn operator_norm(&self) -> T {
        if self.entries.nnz() == 0 {
            return T::zero();
        }
        let adj = self.adjoint();
        let n = self.domain.dim();
        let mut x: Vec<T> = (0..n)
            .map(|i| {
                let h = (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
                T::of(1.0 + (h % 1000) as f64 / 1000.0)
            })
            .collect();
        let mut lambda = T::zero();
        for _ in 0..1000 {
            let nx = self.domain.norm(&x);
            if nx == T::zero() {
                return T::zero();
            }
            x.iter_mut().for_each(|v| *v /= nx);
            let z = adj.apply(&self.apply(&x));
            let next = self.domain.inner(&x, &z);
            let done = (next - lambda).abs() <= T::of(1e-15) * next.abs();
            lambda = next;
            x = z;
            if done {
                break;
            }
        }
        lambda.max(T::zero()).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(w: &[f64]) -> Arc<InnerProductSpace<f64>> {
        Arc::new(InnerProductSpace::weighted(w.to_vec()).unwrap())
    }

    #[test]
    fn adjoint_under_identity_weights_is_transpose() {
        let a = LinearMap::from_dense(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]));
        let at = a.adjoint().entries().to_dense();
        assert_eq!(at, DMatrix::from_row_slice(2, 2, &[1.0, 3.0, 2.0, 4.0]));
    }

    #[test]
    fn adjoint_with_weights() {
        // 2 a* = 4 from (4x) y = 2 x (a* y)
        let a = LinearMap::new(space(&[2.0]), space(&[1.0]), CsrMatrix::from_triplets(1, 1, vec![(0, 0, 4.0)])).unwrap();
        assert_eq!(a.adjoint().entries().get(0, 0), 2.0);
    }

    #[test]
    fn shape_is_checked() {
        let e = CsrMatrix::<f64>::zeros(2, 3);
        assert!(LinearMap::new(space(&[1.0, 1.0]), space(&[1.0, 1.0]), e).is_err());
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let a = LinearMap::<f64>::from_dense(&DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, -5.0]));
        assert!((a.operator_norm() - 5.0).abs() < 1e-12);
        let z = LinearMap::<f64>::zero(space(&[1.0]), space(&[1.0]));
        assert_eq!(z.operator_norm(), 0.0);
    }

    #[test]
    fn compose_rejects_mismatched_spaces() {
        let a = LinearMap::<f64>::identity(space(&[1.0, 1.0]));
        let b = LinearMap::<f64>::identity(space(&[2.0, 1.0]));
        assert!(a.compose(&b).is_err());
    }
}
