use std::sync::Arc;

use nalgebra::DMatrix;

use crate::linops::map::LinearMap;
use crate::linops::space::InnerProductSpace;
use crate::scalar::Real;

/// Threshold on weighted singular values deciding numerical rank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankTolerance<T> {
    /// Multiple of the largest singular value.
    Relative(T),
    Absolute(T),
}

impl<T: Real> Default for RankTolerance<T> {
    fn default() -> Self {
        RankTolerance::Relative(T::rank_rtol())
    }
}

impl<T: Real> RankTolerance<T> {
    pub fn threshold(&self, sigma_max: T) -> T {
        match *self {
            RankTolerance::Relative(r) => r * sigma_max,
            RankTolerance::Absolute(a) => a,
        }
    }
}

/// Gram-orthonormal basis of a subspace: `Qᵀ G Q = I`.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis<T: Real> {
    space: Arc<InnerProductSpace<T>>,
    columns: DMatrix<T>,
}

impl<T: Real> OrthonormalBasis<T> {
    /// Wraps columns that are already gram-orthonormal.
    pub fn from_columns(space: Arc<InnerProductSpace<T>>, columns: DMatrix<T>) -> Self {
        assert_eq!(columns.nrows(), space.dim(), "basis columns must live in the space");
        Self { space, columns }
    }

    pub fn empty(space: Arc<InnerProductSpace<T>>) -> Self {
        let n = space.dim();
        Self::from_columns(space, DMatrix::zeros(n, 0))
    }

    pub fn space(&self) -> &Arc<InnerProductSpace<T>> {
        &self.space
    }

    pub fn columns(&self) -> &DMatrix<T> {
        &self.columns
    }

    pub fn rank(&self) -> usize {
        self.columns.ncols()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        self.columns.column(j).iter().copied().collect()
    }

    /// `Qᵀ G v`, coordinates of the orthogonal projection of `v`.
    pub fn coordinates(&self, v: &[T]) -> Vec<T> {
        let gv = self.space.gram().apply(v);
        (0..self.rank())
            .map(|j| crate::scalar::dot(self.columns.column(j).as_slice(), &gv))
            .collect()
    }

    /// `Q c`
    pub fn combine(&self, coords: &[T]) -> Vec<T> {
        assert_eq!(coords.len(), self.rank(), "coordinate count must equal rank");
        let c = nalgebra::DVector::from_column_slice(coords);
        (&self.columns * c).as_slice().to_vec()
    }

    /// `‖Qᵀ G Q − I‖_max`
    pub fn orthonormality_defect(&self) -> T {
        let gq = self.space.gram().mul_dense(&self.columns);
        let m = self.columns.transpose() * gq - DMatrix::identity(self.rank(), self.rank());
        m.amax()
    }
}

/// Weighted singular value decomposition `A = U Σ Vᵀ G_dom` with
/// `Uᵀ G_cod U = I` and `Vᵀ G_dom V = I`.
#[derive(Debug, Clone)]
pub(crate) struct WeightedSvd<T: Real> {
    /// Descending, length `min(m, n)`.
    pub singular_values: Vec<T>,
    /// Codomain coordinates, one column per singular value.
    pub left: DMatrix<T>,
    /// Domain coordinates, full `n x n`.
    pub right: DMatrix<T>,
}

impl<T: Real> WeightedSvd<T> {
    pub fn new(a: &LinearMap<T>) -> Self {
        let (m, n) = a.shape();
        let dom = a.domain().gram();
        let cod = a.codomain().gram();
        if m == 0 || n == 0 {
            return Self {
                singular_values: Vec::new(),
                left: DMatrix::zeros(m, 0),
                right: dom.lt_solve_dense(&DMatrix::identity(n, n)),
            };
        }
        let w = a.weighted_dense();
        // pad with zero rows so V comes out square
        let rows = m.max(n);
        let padded = if rows > m { w.clone().resize_vertically(rows, T::zero()) } else { w };
        let svd = padded.svd(true, true);
        let u = svd.u.expect("u requested");
        let vt = svd.v_t.expect("v_t requested");
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| svd.singular_values[j].partial_cmp(&svd.singular_values[i]).expect("finite singular values"));

        let k = m.min(n);
        let singular_values: Vec<T> = order.iter().take(k).map(|&i| svd.singular_values[i]).collect();
        let u_sorted = DMatrix::from_fn(m, k, |r, c| u[(r, order[c])]);
        let v_sorted = DMatrix::from_fn(n, n, |r, c| vt[(order[c], r)]);
        Self {
            singular_values,
            left: cod.lt_solve_dense(&u_sorted),
            right: dom.lt_solve_dense(&v_sorted),
        }
    }

    pub fn sigma_max(&self) -> T {
        self.singular_values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn rank(&self, tol: RankTolerance<T>) -> usize {
        let t = tol.threshold(self.sigma_max());
        self.singular_values.iter().take_while(|&&s| s > t && s > T::zero()).count()
    }
}

/// Gram-orthonormal basis of `ker(A)`.
pub fn kernel_basis<T: Real>(a: &LinearMap<T>, tol: RankTolerance<T>) -> OrthonormalBasis<T> {
    let svd = WeightedSvd::new(a);
    let r = svd.rank(tol);
    let n = a.domain().dim();
    OrthonormalBasis::from_columns(a.domain().clone(), svd.right.columns(r, n - r).into_owned())
}

/// Gram-orthonormal basis of `rge(A)`.
pub fn range_basis<T: Real>(a: &LinearMap<T>, tol: RankTolerance<T>) -> OrthonormalBasis<T> {
    let svd = WeightedSvd::new(a);
    let r = svd.rank(tol);
    OrthonormalBasis::from_columns(a.codomain().clone(), svd.left.columns(0, r).into_owned())
}

/// Weighted singular values in descending order, without singular vectors.
pub fn singular_values<T: Real>(a: &LinearMap<T>) -> Vec<T> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Vec::new();
    }
    let mut s: Vec<T> = a.weighted_dense().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    s
}

/// Numerical rank of `A`.
pub fn rank<T: Real>(a: &LinearMap<T>, tol: RankTolerance<T>) -> usize {
    let s = singular_values(a);
    let t = tol.threshold(s.first().copied().unwrap_or_else(T::zero));
    s.iter().take_while(|&&x| x > t && x > T::zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::CsrMatrix;

    #[test]
    fn zero_map_kernel_is_everything() {
        let s = Arc::new(InnerProductSpace::<f64>::euclidean(3));
        let z = LinearMap::zero(s.clone(), s);
        assert_eq!(kernel_basis(&z, RankTolerance::default()).rank(), 3);
        assert_eq!(range_basis(&z, RankTolerance::default()).rank(), 0);
    }

    #[test]
    fn kernel_of_row_sum() {
        let a = LinearMap::from_dense(&DMatrix::from_row_slice(1, 2, &[1.0, 1.0]));
        let k = kernel_basis(&a, RankTolerance::default());
        assert_eq!(k.rank(), 1);
        let c: Vec<f64> = k.column(0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((c[0].abs() - s).abs() < 1e-14 && (c[0] + c[1]).abs() < 1e-14);
    }

    #[test]
    fn weighted_bases_are_gram_orthonormal() {
        let dom = Arc::new(InnerProductSpace::weighted(vec![2.0, 0.5, 3.0]).unwrap());
        let cod = Arc::new(InnerProductSpace::weighted(vec![1.5, 4.0]).unwrap());
        let e = CsrMatrix::from_triplets(2, 3, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 2, -1.0), (1, 0, 0.5)]);
        let a = LinearMap::new(dom, cod, e).unwrap();
        let k = kernel_basis(&a, RankTolerance::default());
        let r = range_basis(&a, RankTolerance::default());
        assert_eq!((k.rank(), r.rank()), (1, 2));
        assert!(k.orthonormality_defect() < 1e-12);
        assert!(r.orthonormality_defect() < 1e-12);
        let ax: Vec<f64> = a.apply(&k.column(0));
        assert!(ax.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn empty_shapes() {
        let s0 = Arc::new(InnerProductSpace::<f64>::euclidean(0));
        let s2 = Arc::new(InnerProductSpace::<f64>::euclidean(2));
        let a = LinearMap::zero(s2.clone(), s0.clone());
        assert_eq!(kernel_basis(&a, RankTolerance::default()).rank(), 2);
        let b = LinearMap::zero(s0, s2);
        assert_eq!(range_basis(&b, RankTolerance::default()).rank(), 0);
        assert_eq!(kernel_basis(&b, RankTolerance::default()).rank(), 0);
    }
}
