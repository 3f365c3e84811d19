use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linops::{InnerProductSpace, LinearMap};
use crate::scalar::Real;

/// A pair `A0: H0 → H1`, `A1: H1 → H2` with `rge(A0) ⊆ ker(A1)`.
///
/// The inclusion is checked as `‖A1 A0‖ ≤ tol · (1 + ‖A0‖ ‖A1‖)` with the
/// composition accumulated in compensated arithmetic, so complexes built from
/// integer stencils times a mesh scale report an exactly zero residual.
#[derive(Debug, Clone)]
pub struct ShortSequence<T: Real> {
    a0: LinearMap<T>,
    a1: LinearMap<T>,
    residual: T,
}

impl<T: Real> ShortSequence<T> {
    pub fn a0(&self) -> &LinearMap<T> {
        &self.a0
    }

    pub fn a1(&self) -> &LinearMap<T> {
        &self.a1
    }

    /// Gram-weighted operator norm of `A1 ∘ A0`.
    pub fn residual(&self) -> T {
        self.residual
    }

    pub fn h0(&self) -> &Arc<InnerProductSpace<T>> {
        self.a0.domain()
    }

    /// The middle space.
    pub fn h1(&self) -> &Arc<InnerProductSpace<T>> {
        self.a0.codomain()
    }

    pub fn h2(&self) -> &Arc<InnerProductSpace<T>> {
        self.a1.codomain()
    }
}

pub fn validate_sequence<T: Real>(a0: LinearMap<T>, a1: LinearMap<T>) -> Result<ShortSequence<T>> {
    validate_sequence_with(a0, a1, T::sequence_rtol())
}

pub fn validate_sequence_with<T: Real>(a0: LinearMap<T>, a1: LinearMap<T>, rtol: T) -> Result<ShortSequence<T>> {
    if a0.codomain().dim() != a1.domain().dim() {
        return Err(Error::SpaceMismatch(format!(
            "A0 maps into a {}-dimensional space but A1 acts on a {}-dimensional one",
            a0.codomain().dim(),
            a1.domain().dim()
        )));
    }
    if !Arc::ptr_eq(a0.codomain(), a1.domain()) && **a0.codomain() != **a1.domain() {
        return Err(Error::SpaceMismatch("codomain of A0 and domain of A1 carry different gram weights".into()));
    }
    let residual = a1.compose(&a0)?.operator_norm();
    if residual > T::zero() {
        let bound = rtol * (T::one() + a0.operator_norm() * a1.operator_norm());
        if residual > bound {
            return Err(Error::NotASequence {
                residual: residual.to_f64(),
                bound: bound.to_f64(),
            });
        }
    }
    Ok(ShortSequence { a0, a1, residual })
}

/// The dual sequence `(A1*, A0*)`.
pub fn dual_sequence<T: Real>(s: &ShortSequence<T>) -> Result<ShortSequence<T>> {
    validate_sequence(s.a1.adjoint(), s.a0.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn identity_pair_is_rejected() {
        let i = LinearMap::from_dense(&DMatrix::<f64>::identity(2, 2));
        assert!(matches!(validate_sequence(i.clone(), i), Err(Error::NotASequence { .. })));
    }

    #[test]
    fn zero_first_map_always_validates() {
        let s = Arc::new(InnerProductSpace::<f64>::euclidean(3));
        let a0 = LinearMap::zero(s.clone(), s.clone());
        let a1 = LinearMap::from_dense(&DMatrix::from_row_slice(1, 3, &[1.0, 2.0, 3.0]));
        let seq = validate_sequence(a0, a1).unwrap();
        assert_eq!(seq.residual(), 0.0);
        let dual = dual_sequence(&seq).unwrap();
        assert_eq!(dual.h1().dim(), 3);
    }

    #[test]
    fn mismatched_dimensions() {
        let a0 = LinearMap::from_dense(&DMatrix::<f64>::zeros(2, 2));
        let a1 = LinearMap::from_dense(&DMatrix::<f64>::zeros(2, 3));
        assert!(matches!(validate_sequence(a0, a1), Err(Error::SpaceMismatch(_))));
    }
}
