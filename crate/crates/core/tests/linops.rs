use std::f64::consts::PI;
use std::sync::Arc;

use approx::assert_abs_diff_eq;
use hilbert_complex::grids::{build_derham, GridSpec};
use hilbert_complex::linops::{
    kernel_basis, poincare_constant, projector_onto, range_basis, rank, reduced_operator, reduced_solve,
    singular_values, Gram, InnerProductSpace, LinearMap, RankTolerance,
};
use hilbert_complex::sparse::CsrMatrix;
use hilbert_complex::Error;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn periodic_grad_1d(n: usize) -> LinearMap<f64> {
    build_derham::<f64>(&GridSpec::periodic(1, n)).unwrap().a0().clone()
}

/// Eigenvalues of the periodic forward difference: `|e^{iθ} − 1| / h = 2 sin(θ/2) / h`.
fn grad_symbol_oracle(n: usize) -> Vec<f64> {
    let h = 2.0 * PI / n as f64;
    let mut s: Vec<f64> = (0..n).map(|m| 2.0 * (PI * m as f64 / n as f64).sin().abs() / h).collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

#[test]
fn periodic_grad_singular_values_match_symbol() {
    for n in [5, 8, 16] {
        let got = singular_values(&periodic_grad_1d(n));
        let want = grad_symbol_oracle(n);
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert_abs_diff_eq!(g, w, epsilon = 1e-11);
        }
    }
}

#[test]
fn periodic_grad_poincare_closed_form_and_sharpness() {
    let mut previous = f64::INFINITY;
    for n in [8, 16, 32] {
        let a = periodic_grad_1d(n);
        let c = poincare_constant(&a).unwrap();
        let oracle = (PI / n as f64) / (PI / n as f64).sin();
        assert_abs_diff_eq!(c, oracle, epsilon = 1e-10);
        assert!(c < previous && c > 1.0);
        previous = c;

        // first Fourier mode attains the constant
        let phi: Vec<f64> = (0..n).map(|i| (2.0 * PI * i as f64 / n as f64).cos()).collect();
        let ratio = a.domain().norm(&phi) / a.codomain().norm(&a.apply(&phi));
        assert_abs_diff_eq!(ratio, c, epsilon = 1e-8);

        let b = reduced_operator(&a, RankTolerance::default());
        let x = b.extremal_vector().unwrap();
        let r = a.domain().norm(&x) / a.codomain().norm(&a.apply(&x));
        assert_abs_diff_eq!(r, c, epsilon = 1e-8);
    }
}

#[test]
fn poincare_of_zero_map_is_trivial() {
    let s = Arc::new(InnerProductSpace::<f64>::euclidean(3));
    let z = LinearMap::zero(s.clone(), s);
    assert!(matches!(poincare_constant(&z), Err(Error::TrivialRange)));
    let b = reduced_operator(&z, RankTolerance::default());
    assert_eq!(b.sigma_min(), f64::INFINITY);
    assert_eq!(reduced_solve(&b, &[1.0, 2.0, 3.0]).unwrap(), vec![0.0; 3]);
}

#[test]
fn reduced_solve_inverts_on_the_range() {
    let a = periodic_grad_1d(8);
    let b = reduced_operator(&a, RankTolerance::default());
    assert_eq!(b.rank(), 7);
    let phi: Vec<f64> = (0..8).map(|i| (i as f64 * 0.7).sin() + 0.1 * i as f64).collect();
    let y = a.apply(&phi);
    let x = reduced_solve(&b, &y).unwrap();
    let ax = a.apply(&x);
    for (p, q) in ax.iter().zip(&y) {
        assert_abs_diff_eq!(p, q, epsilon = 1e-12);
    }
    // the solution is mean-free (orthogonal to the kernel of constants)
    assert_abs_diff_eq!(x.iter().sum::<f64>(), 0.0, epsilon = 1e-12);
    assert!(matches!(reduced_solve(&b, &[0.0; 3]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn single_precision_core() {
    let a = build_derham::<f32>(&GridSpec::periodic(1, 8)).unwrap();
    let c = poincare_constant(a.a0()).unwrap();
    let oracle = (PI / 8.0) / (PI / 8.0).sin();
    assert!((c as f64 - oracle).abs() < 1e-4);
    assert_eq!(rank(a.a0(), RankTolerance::default()), 7);
}

#[test]
fn spd_checks() {
    let not_sym = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (0, 1, 0.5)]);
    assert!(matches!(Gram::new(not_sym), Err(Error::InvalidGram(_))));
    let indefinite = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 1.0)]);
    assert!(matches!(Gram::new(indefinite), Err(Error::InvalidGram(_))));
    assert!(InnerProductSpace::weighted(vec![1.0, 0.0]).is_err());
}

fn weighted_map(m: usize, n: usize, entries: &[f64], wd: &[f64], wc: &[f64]) -> LinearMap<f64> {
    let d = Arc::new(InnerProductSpace::weighted(wd.to_vec()).unwrap());
    let c = Arc::new(InnerProductSpace::weighted(wc.to_vec()).unwrap());
    let dense = DMatrix::from_row_slice(m, n, entries);
    LinearMap::new(d, c, CsrMatrix::from_dense(&dense, 0.0)).unwrap()
}

fn map_strategy() -> impl Strategy<Value = (usize, usize, Vec<f64>, Vec<f64>, Vec<f64>, usize)> {
    (1usize..6, 1usize..6).prop_flat_map(|(m, n)| {
        (
            Just(m),
            Just(n),
            prop::collection::vec(-3i32..=3, m * n).prop_map(|v| v.into_iter().map(f64::from).collect()),
            prop::collection::vec(0.25f64..4.0, n),
            prop::collection::vec(0.25f64..4.0, m),
            0usize..3,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_identity((m, n, e, wd, wc, _) in map_strategy(), seed in 0u64..1000) {
        let a = weighted_map(m, n, &e, &wd, &wc);
        let astar = a.adjoint();
        let x: Vec<f64> = (0..n).map(|i| ((seed + i as u64) as f64 * 0.37).sin()).collect();
        let y: Vec<f64> = (0..m).map(|i| ((seed + 7 * i as u64) as f64 * 0.91).cos()).collect();
        let lhs = a.codomain().inner(&a.apply(&x), &y);
        let rhs = a.domain().inner(&x, &astar.apply(&y));
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
        let dense = a.adjoint_dense();
        prop_assert!((astar.entries().to_dense() - dense).amax() < 1e-12);
    }

    #[test]
    fn rank_nullity_and_projectors((m, n, e, wd, wc, low_rank) in map_strategy()) {
        // low_rank duplicates the first row to force deficiency
        let mut e = e;
        if low_rank > 0 && m > 1 {
            let first: Vec<f64> = e[..n].to_vec();
            e[n..2 * n].copy_from_slice(&first);
        }
        let a = weighted_map(m, n, &e, &wd, &wc);
        let oracle = DMatrix::from_row_slice(m, n, &e).rank(1e-9);
        let tol = RankTolerance::default();
        let k = kernel_basis(&a, tol);
        let r = range_basis(&a, tol);
        prop_assert_eq!(r.rank(), oracle);
        prop_assert_eq!(k.rank() + r.rank(), n);
        prop_assert!(k.orthonormality_defect() < 1e-10);
        prop_assert!(r.orthonormality_defect() < 1e-10);
        for j in 0..k.rank() {
            let ax = a.apply(&k.column(j));
            prop_assert!(ax.iter().all(|v| v.abs() < 1e-9));
        }
        let p = projector_onto(&r);
        prop_assert!(p.idempotence_defect() < 1e-10);
        prop_assert!(p.self_adjointness_defect() < 1e-10);
        prop_assert_eq!(p.trace_rank(), oracle);
        if oracle > 0 {
            let b = reduced_operator(&a, tol);
            let c = poincare_constant(&a).unwrap();
            prop_assert!((c * b.sigma_min() - 1.0).abs() < 1e-12);
        }
    }
}
