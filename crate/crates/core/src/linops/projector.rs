use std::sync::Arc;

use nalgebra::DMatrix;

use crate::linops::basis::OrthonormalBasis;
use crate::linops::space::InnerProductSpace;
use crate::scalar::Real;

/// Gram-orthogonal projector `P = Q Qᵀ G` onto the span of an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Projector<T: Real> {
    space: Arc<InnerProductSpace<T>>,
    matrix: DMatrix<T>,
}

impl<T: Real> Projector<T> {
    pub fn space(&self) -> &Arc<InnerProductSpace<T>> {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        let x = nalgebra::DVector::from_column_slice(v);
        (&self.matrix * x).as_slice().to_vec()
    }

    /// `‖P² − P‖_max / (1 + ‖P‖_max)`
    pub fn idempotence_defect(&self) -> T {
        let d = &self.matrix * &self.matrix - &self.matrix;
        d.amax() / (T::one() + self.matrix.amax())
    }

    /// `‖G P − Pᵀ G‖_max / ‖G‖_max`
    pub fn self_adjointness_defect(&self) -> T {
        let gram = self.space.gram();
        let gp = gram.mul_dense(&self.matrix);
        let d = &gp - gp.transpose();
        d.amax() / gram.matrix().max_abs()
    }

    /// Rank as the (rounded) trace, since `tr P = rank P` for a projector.
    pub fn trace_rank(&self) -> usize {
        self.matrix.trace().to_f64().round().max(0.0) as usize
    }
}

pub fn projector_onto<T: Real>(basis: &OrthonormalBasis<T>) -> Projector<T> {
    let q = basis.columns();
    let gq = basis.space().gram().mul_dense(q);
    Projector {
        space: basis.space().clone(),
        matrix: q * gq.transpose(),
    }
}
