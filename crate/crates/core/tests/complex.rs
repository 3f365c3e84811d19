use std::sync::Arc;

use approx::assert_abs_diff_eq;
use hilbert_complex::complex::{
    dual_sequence, harmonic_dimension, hodge_decompose, refinement_diagnostics, split_field, validate_sequence,
    validate_sequence_with,
};
use hilbert_complex::grids::{build_derham, GridSpec};
use hilbert_complex::linops::{InnerProductSpace, LinearMap};
use hilbert_complex::sparse::CsrMatrix;
use hilbert_complex::Error;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// `A0 = B`, `A1 = C (I − B B⁺)` in Euclidean coordinates, then re-weighted by
/// diagonal grams so the pair is still a complex: `A1 A0 = 0` by construction.
fn synthetic_complex(seed: u64) -> hilbert_complex::ShortSequence64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n0, n1, n2, r0) = (3, 7, 4, 2);
    let left = DMatrix::from_fn(n1, r0, |_, _| rng.random_range(-1.0..1.0));
    let right = DMatrix::from_fn(r0, n0, |_, _| rng.random_range(-1.0..1.0));
    let b = &left * &right;
    let pinv = b.clone().pseudo_inverse(1e-12).unwrap();
    let proj = DMatrix::identity(n1, n1) - &b * pinv;
    let c = DMatrix::from_fn(n2, n1, |_, _| rng.random_range(-1.0..1.0));
    let a1 = c * proj;
    let w0: Vec<f64> = (0..n0).map(|_| rng.random_range(0.5..2.0)).collect();
    let w1: Vec<f64> = (0..n1).map(|_| rng.random_range(0.5..2.0)).collect();
    let w2: Vec<f64> = (0..n2).map(|_| rng.random_range(0.5..2.0)).collect();
    let h0 = Arc::new(InnerProductSpace::weighted(w0).unwrap());
    let h1 = Arc::new(InnerProductSpace::weighted(w1).unwrap());
    let h2 = Arc::new(InnerProductSpace::weighted(w2).unwrap());
    let a0 = LinearMap::new(h0, h1.clone(), CsrMatrix::from_dense(&b, 0.0)).unwrap();
    let a1 = LinearMap::new(h1, h2, CsrMatrix::from_dense(&a1, 0.0)).unwrap();
    validate_sequence_with(a0, a1, 1e-10).unwrap()
}

#[test]
fn synthetic_hodge_dimensions() {
    for seed in 0..5 {
        let s = synthetic_complex(seed);
        // rank A0 = 2, rank A1 = min(4, 7 − 2) = 4
        assert_eq!(harmonic_dimension(&s), 1);
        let h = hodge_decompose(&s);
        assert_eq!(h.harmonic_dim(), 1);
        assert_eq!(h.p_exact().trace_rank(), 2);
        assert_eq!(h.p_coexact().trace_rank(), 4);
        assert!(h.orthogonality_defect() < 1e-10);
        assert!(h.resolution_defect() < 1e-10);
        assert!(h.projector_defect() < 1e-10);
    }
}

#[test]
fn pythagoras_and_pairing_identity() {
    let s = build_derham::<f64>(&GridSpec::periodic(2, 4)).unwrap();
    let h = hodge_decompose(&s);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let space = s.h1();
    for _ in 0..20 {
        let u = random_vec(&mut rng, space.dim());
        let v = random_vec(&mut rng, space.dim());
        let parts = split_field(&s, &u).unwrap();
        let total = space.inner(&u, &u);
        let sum = space.inner(&parts.exact, &parts.exact)
            + space.inner(&parts.harmonic, &parts.harmonic)
            + space.inner(&parts.coexact, &parts.coexact);
        assert_abs_diff_eq!(total, sum, epsilon = 1e-9 * total);
        assert!(h.pairing_identity_residual(&u, &v) < 1e-9);
    }
}

#[test]
fn components_lie_in_their_subspaces() {
    let s = build_derham::<f64>(&GridSpec::periodic(2, 4)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = random_vec(&mut rng, s.h1().dim());
    let parts = split_field(&s, &u).unwrap();
    let a0s = s.a0().adjoint();
    // exact part is curl-free, coexact part divergence-free, harmonic part both
    assert!(s.a1().apply(&parts.exact).iter().all(|x| x.abs() < 1e-10));
    assert!(a0s.apply(&parts.coexact).iter().all(|x| x.abs() < 1e-10));
    assert!(s.a1().apply(&parts.harmonic).iter().all(|x| x.abs() < 1e-10));
    assert!(a0s.apply(&parts.harmonic).iter().all(|x| x.abs() < 1e-10));
}

#[test]
fn dual_sequence_has_same_harmonics() {
    let s = build_derham::<f64>(&GridSpec::periodic(2, 4)).unwrap();
    let d = dual_sequence(&s).unwrap();
    assert_eq!(harmonic_dimension(&d), harmonic_dimension(&s));
    assert_eq!(d.residual(), 0.0);
}

#[test]
fn non_sequences_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = DMatrix::from_fn(4, 3, |_, _| rng.random_range(-1.0..1.0));
    let b = DMatrix::from_fn(2, 4, |_, _| rng.random_range(-1.0..1.0));
    let err = validate_sequence(LinearMap::from_dense(&a), LinearMap::from_dense(&b)).unwrap_err();
    match err {
        Error::NotASequence { residual, bound } => assert!(residual > bound),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn weighted_middle_spaces_must_agree() {
    let h0 = Arc::new(InnerProductSpace::<f64>::euclidean(1));
    let h1a = Arc::new(InnerProductSpace::weighted(vec![1.0, 2.0]).unwrap());
    let h1b = Arc::new(InnerProductSpace::weighted(vec![1.0, 3.0]).unwrap());
    let a0 = LinearMap::zero(h0.clone(), h1a);
    let a1 = LinearMap::zero(h1b, h0);
    assert!(matches!(validate_sequence(a0, a1), Err(Error::SpaceMismatch(_))));
}

#[test]
fn refinement_report_on_periodic_lines() {
    let report = refinement_diagnostics(|n| build_derham::<f64>(&GridSpec::periodic(1, n)), &[8, 16, 32]).unwrap();
    assert!(report.harmonic_dim_stable());
    assert_eq!(report.levels.len(), 3);
    assert!(report.levels.iter().all(|l| l.harmonic_dim == 1 && l.poincare_a1star.is_none()));
    assert!(report.max_constant() < 1.03);
    let mut buf = Vec::new();
    report.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("N,poincare_A0,poincare_A1star,harmonic_dim\n8,"));
    assert!(matches!(
        refinement_diagnostics(|n| build_derham::<f64>(&GridSpec::periodic(1, n)), &[8, 8]),
        Err(Error::Precondition(_))
    ));
}
