use std::sync::Arc;

use crate::error::Result;
use crate::grids::layout::antisym_index;
use crate::grids::spec::GridSpec;
use crate::linops::{InnerProductSpace, LinearMap};
use crate::scalar::{Real, Scalar};
use crate::sparse::CsrMatrix;

/// Forward difference `φ(p + e_axis) − φ(p)` on the `n^d` torus, unscaled.
pub fn forward_difference<T: Scalar>(d: usize, n: usize, axis: usize) -> CsrMatrix<T> {
    let m = n.pow(d as u32);
    let mut t = Vec::with_capacity(2 * m);
    for i in 0..m {
        let mut p = GridSpec::unravel(d, n, i);
        p[axis] = (p[axis] + 1) % n;
        t.push((i, GridSpec::ravel(d, n, &p), T::one()));
        t.push((i, i, -T::one()));
    }
    CsrMatrix::from_triplets(m, m, t)
}

/// Assembles a block matrix from `(block_row, block_col, coefficient, block)`
/// entries; blocks at the same position are summed.
pub(crate) fn assemble<T: Scalar>(
    block_rows: usize,
    block_cols: usize,
    m: usize,
    blocks: &[(usize, usize, T, &CsrMatrix<T>)],
) -> CsrMatrix<T> {
    let mut t = Vec::new();
    for (bi, bj, c, b) in blocks {
        for (i, j, v) in b.triplets() {
            t.push((bi * m + i, bj * m + j, c.clone() * v.clone()));
        }
    }
    CsrMatrix::from_triplets(block_rows * m, block_cols * m, t)
}

/// Unscaled periodic de Rham incidences: `grad` (scalar → vector) and `curl`
/// (vector → antisym2, `(curl v)_{jk} = D_k v_j − D_j v_k`).
pub fn periodic_incidence<T: Scalar>(d: usize, n: usize) -> (CsrMatrix<T>, CsrMatrix<T>) {
    let m = n.pow(d as u32);
    let diffs: Vec<CsrMatrix<T>> = (0..d).map(|a| forward_difference(d, n, a)).collect();
    let grad_blocks: Vec<_> = (0..d).map(|j| (j, 0, T::one(), &diffs[j])).collect();
    let grad = assemble(d, 1, m, &grad_blocks);
    let mut curl_blocks = Vec::new();
    for j in 0..d {
        for k in j + 1..d {
            let r = antisym_index(d, j, k);
            curl_blocks.push((r, j, T::one(), &diffs[k]));
            curl_blocks.push((r, k, -T::one(), &diffs[j]));
        }
    }
    let curl = assemble(d * (d - 1) / 2, d, m, &curl_blocks);
    (grad, curl)
}

fn weighted_space<T: Real>(dim: usize, w: T) -> Arc<InnerProductSpace<T>> {
    Arc::new(InnerProductSpace::weighted(vec![w; dim]).expect("positive weights"))
}

/// Periodic forward-difference calculus on scalar, vector and full-matrix
/// fields, all with gram weight `h^d` (antisym2 fields carry `2 h^d`).
#[derive(Debug, Clone)]
pub struct PeriodicCalculus<T: Real> {
    pub spec: GridSpec,
    pub scalars: Arc<InnerProductSpace<T>>,
    pub vectors: Arc<InnerProductSpace<T>>,
    pub antisym: Arc<InnerProductSpace<T>>,
    pub matrices: Arc<InnerProductSpace<T>>,
    /// Forward-difference gradient, scalar → vector.
    pub grad: LinearMap<T>,
    /// Backward-difference divergence, vector → scalar; equals `−grad*`.
    pub div: LinearMap<T>,
    /// Vector → antisym2.
    pub curl: LinearMap<T>,
    /// Vector → matrix, `(Curl u)_{jk} = D_k u_j − D_j u_k`.
    pub curl_full: LinearMap<T>,
    /// Vector → matrix, `(Grad u)_{jk} = D_k u_j`.
    pub grad_vec: LinearMap<T>,
    /// Row-wise backward divergence, matrix → vector.
    pub div_rows: LinearMap<T>,
    /// `½(Φ − Φᵀ)`, matrix → matrix.
    pub skew: LinearMap<T>,
}

impl<T: Real> PeriodicCalculus<T> {
    pub fn new(spec: &GridSpec) -> Result<Self> {
        spec.validate()?;
        if spec.bc != crate::grids::Boundary::Periodic {
            return Err(crate::Error::UnsupportedBc("the forward-difference calculus is periodic only".into()));
        }
        let (d, n) = (spec.d, spec.n);
        let m = spec.cell_count();
        let h = T::of(spec.l) / T::of(n as f64);
        let w = (0..d).fold(T::one(), |acc, _| acc * h);
        let inv_h = T::one() / h;
        let two = T::one() + T::one();
        let scalars = weighted_space(m, w);
        let vectors = weighted_space(d * m, w);
        let antisym = weighted_space(d * (d - 1) / 2 * m, two * w);
        let matrices = weighted_space(d * d * m, w);

        let diffs: Vec<CsrMatrix<T>> = (0..d).map(|a| forward_difference(d, n, a).scale(inv_h)).collect();
        let back: Vec<CsrMatrix<T>> = diffs.iter().map(|m| m.transpose().neg()).collect();
        let (g, c) = periodic_incidence::<T>(d, n);
        let op = |dom: &Arc<InnerProductSpace<T>>, cod: &Arc<InnerProductSpace<T>>, e: CsrMatrix<T>| {
            LinearMap::new(dom.clone(), cod.clone(), e).expect("shapes follow the layout")
        };

        let grad = op(&scalars, &vectors, g.scale(inv_h));
        let div_blocks: Vec<_> = (0..d).map(|j| (0, j, T::one(), &back[j])).collect();
        let div = op(&vectors, &scalars, assemble(1, d, m, &div_blocks));
        let curl = op(&vectors, &antisym, c.scale(inv_h));

        let mut full = Vec::new();
        let mut gv = Vec::new();
        let mut dr = Vec::new();
        for j in 0..d {
            for k in 0..d {
                let r = j * d + k;
                gv.push((r, j, T::one(), &diffs[k]));
                dr.push((j, r, T::one(), &back[k]));
                if j != k {
                    full.push((r, j, T::one(), &diffs[k]));
                    full.push((r, k, -T::one(), &diffs[j]));
                }
            }
        }
        let curl_full = op(&vectors, &matrices, assemble(d * d, d, m, &full));
        let grad_vec = op(&vectors, &matrices, assemble(d * d, d, m, &gv));
        let div_rows = op(&matrices, &vectors, assemble(d, d * d, m, &dr));

        let half = T::one() / two;
        let id = CsrMatrix::<T>::identity(m);
        let mut sk = Vec::new();
        for j in 0..d {
            for k in 0..d {
                if j != k {
                    sk.push((j * d + k, j * d + k, half, &id));
                    sk.push((j * d + k, k * d + j, -half, &id));
                }
            }
        }
        let skew = op(&matrices, &matrices, assemble(d * d, d * d, m, &sk));

        Ok(Self {
            spec: spec.clone(),
            scalars,
            vectors,
            antisym,
            matrices,
            grad,
            div,
            curl,
            curl_full,
            grad_vec,
            div_rows,
            skew,
        })
    }
}
