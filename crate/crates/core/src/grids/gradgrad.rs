use std::sync::Arc;

use crate::complex::{validate_sequence, ShortSequence};
use crate::error::{Error, Result};
use crate::grids::layout::FieldKind;
use crate::grids::periodic::{assemble, forward_difference};
use crate::grids::spec::{Boundary, GridSpec};
use crate::linops::{Gram, InnerProductSpace, LinearMap};
use crate::scalar::{Real, Scalar};
use crate::sparse::CsrMatrix;

const D: usize = 3;

fn sym_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        _ => 5,
    }
}

fn dev_index(i: usize, j: usize) -> usize {
    debug_assert!((i, j) != (2, 2));
    i * D + j
}

fn levi_civita(j: usize, k: usize, l: usize) -> i64 {
    match (j, k, l) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// Unscaled incidence-level operators of the periodic grad-grad complex on
/// the `n³` torus.
#[derive(Debug, Clone)]
pub struct GradGradIncidence<T> {
    /// scalar → sym, `S_ij = D_i D_j φ`.
    pub gradgrad: CsrMatrix<T>,
    /// sym → full matrix, `(curl_r S)_ij = Σ ε_jkl D_k S_il`.
    pub curl_full: CsrMatrix<T>,
    /// sym → dev, the rows of `curl_full` other than `(2,2)`.
    pub curl_sym: CsrMatrix<T>,
    /// dev → vector, `(div_r T)_i = Σ_j D_j T_ij` with `T_22 = −T_00 − T_11`.
    pub div_dev: CsrMatrix<T>,
}

#[allow(clippy::needless_range_loop)]
pub fn gradgrad_incidence<T: Scalar>(n: usize) -> GradGradIncidence<T> {
    let m = n.pow(D as u32);
    let diffs: Vec<CsrMatrix<T>> = (0..D).map(|a| forward_difference(D, n, a)).collect();

    let second: Vec<(usize, CsrMatrix<T>)> = FieldKind::SymMatrix
        .components(D)
        .expect("d = 3")
        .into_iter()
        .map(|(i, j)| (sym_index(i, j), diffs[i].matmul(&diffs[j])))
        .collect();
    let blocks: Vec<_> = second.iter().map(|(r, b)| (*r, 0, T::one(), b)).collect();
    let gradgrad = assemble(6, 1, m, &blocks);

    let mut curl_blocks = Vec::new();
    for i in 0..D {
        for j in 0..D {
            for k in 0..D {
                for l in 0..D {
                    let e = levi_civita(j, k, l);
                    if e != 0 {
                        curl_blocks.push((i * D + j, sym_index(i, l), T::int(e), &diffs[k]));
                    }
                }
            }
        }
    }
    let curl_full = assemble(D * D, 6, m, &curl_blocks);
    let keep: Vec<(usize, usize, T, &CsrMatrix<T>)> = curl_blocks
        .iter()
        .filter(|(r, ..)| *r != 8)
        .map(|(r, c, s, b)| (*r, *c, s.clone(), *b))
        .collect();
    let curl_sym = assemble(8, 6, m, &keep);

    let mut div_blocks = Vec::new();
    for i in 0..D {
        for (j, dj) in diffs.iter().enumerate() {
            if (i, j) == (2, 2) {
                div_blocks.push((2, dev_index(0, 0), -T::one(), dj));
                div_blocks.push((2, dev_index(1, 1), -T::one(), dj));
            } else {
                div_blocks.push((i, dev_index(i, j), T::one(), dj));
            }
        }
    }
    let div_dev = assemble(D, 8, m, &div_blocks);

    GradGradIncidence {
        gradgrad,
        curl_full,
        curl_sym,
        div_dev,
    }
}

/// Gram of dev storage: the Frobenius norm of the full trace-free matrix,
/// so `(T00, T11)` carry the block `[[2, 1], [1, 2]] h³`.
fn dev_gram<T: Real>(m: usize, w: T) -> Result<Gram<T>> {
    let two = w + w;
    let mut t = Vec::new();
    for c in 0..8 {
        let diag = if c == dev_index(0, 0) || c == dev_index(1, 1) { two } else { w };
        for p in 0..m {
            t.push((c * m + p, c * m + p, diag));
        }
    }
    let (a, b) = (dev_index(0, 0), dev_index(1, 1));
    for p in 0..m {
        t.push((a * m + p, b * m + p, w));
        t.push((b * m + p, a * m + p, w));
    }
    Gram::new(CsrMatrix::from_triplets(8 * m, 8 * m, t))
}

/// Both short sequences of the periodic grad-grad complex in 3D:
/// `(gradgrad, curl_sym)` and `(curl_sym, div_dev)`.
pub fn build_gradgrad<T: Real>(spec: &GridSpec) -> Result<(ShortSequence<T>, ShortSequence<T>)> {
    spec.validate()?;
    if spec.bc != Boundary::Periodic {
        return Err(Error::UnsupportedBc("the grad-grad complex is built on periodic grids only".into()));
    }
    if spec.d != D {
        return Err(Error::UnsupportedDim(spec.d));
    }
    let m = spec.cell_count();
    let h = T::of(spec.l) / T::of(spec.n as f64);
    let w = h * h * h;
    let inv_h = T::one() / h;
    let inc = gradgrad_incidence::<T>(spec.n);

    let scalars = Arc::new(InnerProductSpace::weighted(vec![w; m])?);
    let sym_weights = (0..6)
        .flat_map(|c| {
            let off = !matches!(c, 0 | 3 | 5);
            std::iter::repeat_n(if off { w + w } else { w }, m)
        })
        .collect();
    let sym = Arc::new(InnerProductSpace::weighted(sym_weights)?);
    let dev = Arc::new(InnerProductSpace::new(dev_gram(m, w)?));
    let vectors = Arc::new(InnerProductSpace::weighted(vec![w; D * m])?);

    let gg = LinearMap::new(scalars, sym.clone(), inc.gradgrad.scale(inv_h * inv_h))?;
    let curl = LinearMap::new(sym, dev.clone(), inc.curl_sym.scale(inv_h))?;
    let div = LinearMap::new(dev, vectors, inc.div_dev.scale(inv_h))?;
    let first = validate_sequence(gg, curl.clone())?;
    let second = validate_sequence(curl, div)?;
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incidence_compositions_vanish() {
        let inc = gradgrad_incidence::<i64>(3);
        assert_eq!(inc.curl_sym.matmul(&inc.gradgrad).nnz(), 0);
        assert_eq!(inc.div_dev.matmul(&inc.curl_sym).nnz(), 0);
        assert_eq!(inc.gradgrad.shape(), (6 * 27, 27));
        assert_eq!(inc.div_dev.shape(), (3 * 27, 8 * 27));
    }

    #[test]
    fn rejects_other_settings() {
        assert!(matches!(build_gradgrad::<f64>(&GridSpec::dirichlet(3, 4)), Err(Error::UnsupportedBc(_))));
        assert!(matches!(build_gradgrad::<f64>(&GridSpec::periodic(2, 4)), Err(Error::UnsupportedDim(2))));
    }
}
