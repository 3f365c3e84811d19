//! Scalar abstractions.
//!
//! Two levels are used throughout the crate:
//!
//! * [`Scalar`] is any exact or inexact ring element supported by `num-traits`
//!   (`i64`, `Ratio<i64>`, `f32`, `f64`). Incidence-level operators are built
//!   generically over it, so exactness of compositions can be checked in
//!   integer or rational arithmetic.
//! * [`Real`] adds the dense linear algebra required for rank decisions,
//!   singular values and projectors. It is implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use nalgebra::RealField;
use num_traits::{FromPrimitive, Num};

/// Ring element usable as a sparse matrix entry.
pub trait Scalar: Num + FromPrimitive + Clone + Debug + Send + Sync + Neg<Output = Self> + 'static {
    /// Exact integer embedding.
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer embedding")
    }
}

impl<T> Scalar for T where T: Num + FromPrimitive + Clone + Debug + Send + Sync + Neg<Output = T> + 'static {}

/// Real floating-point field used for all numerical linear algebra.
pub trait Real: Scalar + RealField + Copy + Display + Default {
    /// Default relative rank threshold, as a multiple of the largest singular value.
    fn rank_rtol() -> Self;
    /// Relative tolerance for the sequence property `A1 A0 = 0`.
    fn sequence_rtol() -> Self;

    fn of(x: f64) -> Self;
    fn to_f64(self) -> f64;

    fn infinity() -> Self {
        Self::of(f64::INFINITY)
    }
}

impl Real for f64 {
    fn rank_rtol() -> Self {
        1e-10
    }
    fn sequence_rtol() -> Self {
        1e-12
    }
    fn of(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    fn rank_rtol() -> Self {
        1e-4
    }
    fn sequence_rtol() -> Self {
        1e-5
    }
    fn of(x: f64) -> Self {
        x as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

/// Error-free transformation `a + b = s + e`.
#[inline]
pub(crate) fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free transformation `a * b = p + e` (requires a fused multiply-add).
#[inline]
pub(crate) fn two_prod<T: Real>(a: T, b: T) -> (T, T) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Compensated accumulator (sum of values kept as a double-length pair).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulator<T> {
    hi: T,
    lo: T,
}

impl<T: Real> Accumulator<T> {
    pub(crate) fn new() -> Self {
        Self {
            hi: T::zero(),
            lo: T::zero(),
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, x: T) {
        let (s, e) = two_sum(self.hi, x);
        self.hi = s;
        self.lo += e;
    }

    #[inline]
    pub(crate) fn add_product(&mut self, a: T, b: T) {
        let (p, e) = two_prod(a, b);
        self.add(p);
        self.lo += e;
    }

    #[inline]
    pub(crate) fn value(&self) -> T {
        self.hi + self.lo
    }
}

/// Compensated dot product.
pub(crate) fn dot<T: Real>(x: &[T], y: &[T]) -> T {
    let mut acc = Accumulator::new();
    for (&a, &b) in x.iter().zip(y) {
        acc.add_product(a, b);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_dot_cancels() {
        let x = [1e16, 1.0, -1e16];
        let y = [1.0, 1.0, 1.0];
        assert_eq!(dot(&x, &y), 1.0);
    }

    #[test]
    fn integer_embedding() {
        assert_eq!(<i64 as Scalar>::int(-2), -2);
        assert_eq!(<f64 as Scalar>::int(3), 3.0);
    }
}
