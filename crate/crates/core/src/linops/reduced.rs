use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linops::basis::{OrthonormalBasis, RankTolerance, WeightedSvd};
use crate::linops::map::LinearMap;
use crate::scalar::Real;

/// Restriction of `A` to an isomorphism `rge(A*) → rge(A)`, written in
/// orthonormal bases of both ranges.
#[derive(Debug, Clone)]
pub struct ReducedOperator<T: Real> {
    source_basis: OrthonormalBasis<T>,
    target_basis: OrthonormalBasis<T>,
    matrix: DMatrix<T>,
    sigma_min: T,
}

impl<T: Real> ReducedOperator<T> {
    /// Orthonormal basis of `rge(A*) = ker(A)^⊥` in the domain.
    pub fn source_basis(&self) -> &OrthonormalBasis<T> {
        &self.source_basis
    }

    /// Orthonormal basis of `rge(A)` in the codomain.
    pub fn target_basis(&self) -> &OrthonormalBasis<T> {
        &self.target_basis
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }

    /// Smallest singular value; `+∞` when the rank is zero.
    pub fn sigma_min(&self) -> T {
        self.sigma_min
    }

    /// Unit vector of `ker(A)^⊥` attaining `‖φ‖ = c ‖Aφ‖`.
    pub fn extremal_vector(&self) -> Option<Vec<T>> {
        let r = self.rank();
        if r == 0 {
            return None;
        }
        let svd = self.matrix.clone().svd(false, true);
        let vt = svd.v_t.expect("v_t requested");
        let (imin, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
            .expect("nonempty");
        let coords: Vec<T> = (0..r).map(|c| vt[(imin, c)]).collect();
        Some(self.source_basis.combine(&coords))
    }
}

/// Builds `B = ι*_rge(A) A ι_rge(A*)`.
pub fn reduced_operator<T: Real>(a: &LinearMap<T>, tol: RankTolerance<T>) -> ReducedOperator<T> {
    let svd = WeightedSvd::new(a);
    let r = svd.rank(tol);
    let n = a.domain().dim();
    let source = OrthonormalBasis::from_columns(a.domain().clone(), svd.right.columns(0, r).into_owned());
    let target = OrthonormalBasis::from_columns(a.codomain().clone(), svd.left.columns(0, r).into_owned());
    debug_assert!(r <= n);

    // targetᵀ G_cod A source, evaluated explicitly rather than read off Σ
    let a_src = a.entries().mul_dense(source.columns());
    let g_a_src = a.codomain().gram().mul_dense(&a_src);
    let matrix = target.columns().transpose() * g_a_src;
    let sigma_min = if r == 0 {
        T::infinity()
    } else {
        matrix
            .singular_values()
            .iter()
            .copied()
            .fold(T::infinity(), |m, s| m.min(s))
    };
    ReducedOperator {
        source_basis: source,
        target_basis: target,
        matrix,
        sigma_min,
    }
}

/// The unique `x ∈ rge(A*)` with `A x = π_rge(A) y`.
pub fn reduced_solve<T: Real>(b: &ReducedOperator<T>, y: &[T]) -> Result<Vec<T>> {
    let m = b.target_basis.space().dim();
    if y.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: y.len(),
        });
    }
    if b.rank() == 0 {
        return Ok(vec![T::zero(); b.source_basis.space().dim()]);
    }
    let coords = DVector::from_vec(b.target_basis.coordinates(y));
    let z = b
        .matrix
        .clone()
        .lu()
        .solve(&coords)
        .expect("reduced operator is invertible");
    Ok(b.source_basis.combine(z.as_slice()))
}

/// Smallest `c` with `‖φ‖ ≤ c ‖Aφ‖` on `ker(A)^⊥`, i.e. `1 / σ_min(B)`.
pub fn poincare_constant<T: Real>(a: &LinearMap<T>) -> Result<T> {
    poincare_constant_with(a, RankTolerance::default())
}

pub fn poincare_constant_with<T: Real>(a: &LinearMap<T>, tol: RankTolerance<T>) -> Result<T> {
    let b = reduced_operator(a, tol);
    if b.rank() == 0 {
        return Err(Error::TrivialRange);
    }
    Ok(T::one() / b.sigma_min())
}
