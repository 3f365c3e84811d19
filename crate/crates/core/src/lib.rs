//! Discrete Hilbert complexes and div-curl experiments.
//!
//! The crate is organised bottom-up:
//!
//! * [`linops`]: inner-product spaces, weighted adjoints, kernel/range bases,
//!   projectors and the reduced operator with its Poincaré constant.
//! * [`complex`]: validated short sequences `(A0, A1)`, their duals and the
//!   three-projector Hodge decomposition of the middle space.
//! * [`grids`]: de Rham complexes on periodic and Dirichlet grids (with
//!   optional holes) and the periodic grad-grad complex in 3D.
//! * [`divcurl`]: oscillatory field families and the experiments built on
//!   them (positive div-curl runs, the counterexample, Helmholtz projection
//!   convergence, the Friedrichs identity).
//! * [`mtx`]: Matrix Market import/export.
//!
//! Numerical code is generic over [`Real`] (`f32`, `f64`); incidence-level
//! builders are generic over [`Scalar`] so that exactness can be checked in
//! integer or rational arithmetic.

pub mod complex;
pub mod divcurl;
pub mod error;
pub mod grids;
pub mod linops;
pub mod mtx;
pub mod scalar;
pub mod sparse;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

pub type LinearMap64 = linops::LinearMap<f64>;
pub type InnerProductSpace64 = linops::InnerProductSpace<f64>;
pub type ShortSequence64 = complex::ShortSequence<f64>;
pub type HodgeDecomposition64 = complex::HodgeDecomposition<f64>;
pub type Projector64 = linops::Projector<f64>;
pub type ReducedOperator64 = linops::ReducedOperator<f64>;

pub type LinearMap32 = linops::LinearMap<f32>;
pub type ShortSequence32 = complex::ShortSequence<f32>;
