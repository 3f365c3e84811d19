use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseParts<T: Real> {
    pub sym: DMatrix<T>,
    pub skew: DMatrix<T>,
    /// `M − ⅓ tr(M) I`, only for `d = 3`.
    pub dev: Option<DMatrix<T>>,
    pub trace: T,
}

/// Symmetric, antisymmetric and (in 3D) deviatoric parts of a square matrix.
pub fn pointwise_algebra<T: Real>(m: &DMatrix<T>) -> Result<PointwiseParts<T>> {
    let d = m.nrows();
    if m.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: m.ncols(),
        });
    }
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDim(d));
    }
    let half = T::of(0.5);
    let t = m.transpose();
    let trace = m.trace();
    let dev = (d == 3).then(|| m - DMatrix::identity(3, 3) * (trace / T::of(3.0)));
    Ok(PointwiseParts {
        sym: (m + &t) * half,
        skew: (m - &t) * half,
        dev,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let p = pointwise_algebra(&DMatrix::<f64>::identity(3, 3)).unwrap();
        assert!(p.dev.unwrap().amax() < 1e-15);
        let p = pointwise_algebra(&DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0]))).unwrap();
        let dev: DMatrix<f64> = p.dev.unwrap();
        assert!((dev[(0, 0)] + 1.0).abs() < 1e-15 && dev[(1, 1)].abs() < 1e-15 && (dev[(2, 2)] - 1.0).abs() < 1e-15);
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 5.0]);
        let p = pointwise_algebra(&s).unwrap();
        assert_eq!(p.skew.amax(), 0.0);
        assert!(p.dev.is_none());
        assert!(pointwise_algebra(&DMatrix::<f64>::zeros(1, 1)).is_err());
    }
}
