//! Weighted finite-dimensional linear algebra: spaces, maps, adjoints,
//! rank-revealing kernel and range bases, orthogonal projectors and the
//! reduced operator `rge(A*) → rge(A)`.
//!
//! Rank decisions come from the singular values of the map written in
//! gram-orthonormal coordinates (see [`LinearMap::weighted_dense`]), so all
//! bases are orthonormal for the gram weights rather than the Euclidean
//! product. Signs and ordering of basis columns are not meaningful; compare
//! projectors instead.

mod basis;
mod map;
mod projector;
mod reduced;
mod space;

pub use basis::{kernel_basis, range_basis, rank, singular_values, OrthonormalBasis, RankTolerance};
pub use map::LinearMap;
pub use projector::{projector_onto, Projector};
pub use reduced::{poincare_constant, poincare_constant_with, reduced_operator, reduced_solve, ReducedOperator};
pub use space::{Gram, InnerProductSpace};
