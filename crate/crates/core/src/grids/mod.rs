//! Concrete discrete complexes on box grids.
//!
//! Periodic grids use colocated forward differences; Dirichlet grids use the
//! cubical cochain complex of the active cells relative to their boundary.
//! Fields are stored component-major, points with axis 0 fastest.

mod cubical;
mod gradgrad;
mod layout;
mod periodic;
mod pointwise;
mod spec;

use std::sync::Arc;

pub use gradgrad::{build_gradgrad, gradgrad_incidence, GradGradIncidence};
pub use layout::{FieldKind, FieldLayout};
pub use periodic::{forward_difference, periodic_incidence, PeriodicCalculus};
pub use pointwise::{pointwise_algebra, PointwiseParts};
pub use spec::{puncture, Boundary, CellBox, GridSpec};

use crate::complex::{validate_sequence, ShortSequence};
use crate::error::Result;
use crate::linops::{InnerProductSpace, LinearMap};
use crate::scalar::{Real, Scalar};
use crate::sparse::CsrMatrix;

/// Unscaled de Rham incidences `(grad, curl)` of a grid, with entries in
/// `{−1, 0, 1}`. Row and column counts are the DOF counts of scalars,
/// vectors and antisym2 fields.
pub fn derham_incidence<T: Scalar>(spec: &GridSpec) -> Result<(CsrMatrix<T>, CsrMatrix<T>)> {
    spec.validate()?;
    Ok(match spec.bc {
        Boundary::Periodic => periodic_incidence(spec.d, spec.n),
        Boundary::Dirichlet => {
            let cx = cubical::CubicalComplex::new(spec);
            (cx.grad(), cx.curl())
        }
    })
}

/// Gram weights `h^d` for scalars and vectors, `2 h^d` for antisym2 fields.
pub fn derham_spaces<T: Real>(spec: &GridSpec, dims: [usize; 3]) -> [Arc<InnerProductSpace<T>>; 3] {
    let h = T::of(spec.l) / T::of(spec.n as f64);
    let w = (0..spec.d).fold(T::one(), |acc, _| acc * h);
    let weights = [w, w, w + w];
    std::array::from_fn(|k| Arc::new(InnerProductSpace::weighted(vec![weights[k]; dims[k]]).expect("positive weights")))
}

/// The de Rham sequence `(grad, Curl)` of a grid, scaled by `1/h`.
pub fn build_derham<T: Real>(spec: &GridSpec) -> Result<ShortSequence<T>> {
    let (g, c) = derham_incidence::<T>(spec)?;
    let [h0, h1, h2] = derham_spaces::<T>(spec, [g.ncols(), g.nrows(), c.nrows()]);
    let inv_h = T::of(spec.n as f64) / T::of(spec.l);
    let a0 = LinearMap::new(h0, h1.clone(), g.scale(inv_h))?;
    let a1 = LinearMap::new(h1, h2, c.scale(inv_h))?;
    validate_sequence(a0, a1)
}
