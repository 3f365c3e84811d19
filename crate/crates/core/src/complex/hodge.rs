use nalgebra::DMatrix;

use crate::complex::sequence::ShortSequence;
use crate::error::{Error, Result};
use crate::linops::{kernel_basis, projector_onto, range_basis, rank, LinearMap, OrthonormalBasis, Projector, RankTolerance};
use crate::scalar::Real;

/// Orthogonal splitting `H1 = rge(A0) ⊕ (ker A0* ∩ ker A1) ⊕ rge(A1*)`.
#[derive(Debug, Clone)]
pub struct HodgeDecomposition<T: Real> {
    p_exact: Projector<T>,
    p_harmonic: Projector<T>,
    p_coexact: Projector<T>,
    harmonic_basis: OrthonormalBasis<T>,
}

/// Components of a field under the Hodge decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSplit<T> {
    pub exact: Vec<T>,
    pub harmonic: Vec<T>,
    pub coexact: Vec<T>,
}

impl<T: Real> HodgeDecomposition<T> {
    pub fn p_exact(&self) -> &Projector<T> {
        &self.p_exact
    }

    pub fn p_harmonic(&self) -> &Projector<T> {
        &self.p_harmonic
    }

    pub fn p_coexact(&self) -> &Projector<T> {
        &self.p_coexact
    }

    pub fn harmonic_basis(&self) -> &OrthonormalBasis<T> {
        &self.harmonic_basis
    }

    pub fn harmonic_dim(&self) -> usize {
        self.harmonic_basis.rank()
    }

    fn projectors(&self) -> [&Projector<T>; 3] {
        [&self.p_exact, &self.p_harmonic, &self.p_coexact]
    }

    /// `max_{i≠j} ‖P_i P_j‖_max`
    pub fn orthogonality_defect(&self) -> T {
        let ps = self.projectors();
        let mut worst = T::zero();
        for (i, p) in ps.iter().enumerate() {
            for (j, q) in ps.iter().enumerate() {
                if i != j {
                    worst = worst.max((p.matrix() * q.matrix()).amax());
                }
            }
        }
        worst
    }

    /// `‖P_exact + P_harmonic + P_coexact − I‖_max`
    pub fn resolution_defect(&self) -> T {
        let n = self.p_exact.matrix().nrows();
        let sum = self.p_exact.matrix() + self.p_harmonic.matrix() + self.p_coexact.matrix();
        (sum - DMatrix::identity(n, n)).amax()
    }

    /// Worst idempotence or self-adjointness defect among the three projectors.
    pub fn projector_defect(&self) -> T {
        self.projectors()
            .iter()
            .map(|p| p.idempotence_defect().max(p.self_adjointness_defect()))
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn split(&self, v: &[T]) -> Result<FieldSplit<T>> {
        let n = self.p_exact.matrix().nrows();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        Ok(FieldSplit {
            exact: self.p_exact.apply(v),
            harmonic: self.p_harmonic.apply(v),
            coexact: self.p_coexact.apply(v),
        })
    }

    /// `|⟨u,v⟩ − ⟨u, P_c v⟩ − ⟨P_e u, v⟩ − ⟨P_h u, P_h v⟩|`, the algebraic
    /// identity behind weak-times-weak convergence of pairings.
    pub fn pairing_identity_residual(&self, u: &[T], v: &[T]) -> T {
        let space = self.p_exact.space();
        let lhs = space.inner(u, v);
        let pc_v = self.p_coexact.apply(v);
        let pe_u = self.p_exact.apply(u);
        let ph_u = self.p_harmonic.apply(u);
        let ph_v = self.p_harmonic.apply(v);
        let rhs = space.inner(u, &pc_v) + space.inner(&pe_u, v) + space.inner(&ph_u, &ph_v);
        (lhs - rhs).abs()
    }
}

fn harmonic_map<T: Real>(s: &ShortSequence<T>) -> LinearMap<T> {
    let a0_star = s.a0().adjoint();
    LinearMap::stack(&[&a0_star, s.a1()]).expect("both maps act on the middle space")
}

pub fn hodge_decompose<T: Real>(s: &ShortSequence<T>) -> HodgeDecomposition<T> {
    hodge_decompose_with(s, RankTolerance::default())
}

pub fn hodge_decompose_with<T: Real>(s: &ShortSequence<T>, tol: RankTolerance<T>) -> HodgeDecomposition<T> {
    let exact = range_basis(s.a0(), tol);
    let coexact = range_basis(&s.a1().adjoint(), tol);
    let harmonic_basis = kernel_basis(&harmonic_map(s), tol);
    HodgeDecomposition {
        p_exact: projector_onto(&exact),
        p_harmonic: projector_onto(&harmonic_basis),
        p_coexact: projector_onto(&coexact),
        harmonic_basis,
    }
}

/// `dim(ker A0* ∩ ker A1)`, from singular values only.
pub fn harmonic_dimension<T: Real>(s: &ShortSequence<T>) -> usize {
    harmonic_dimension_with(s, RankTolerance::default())
}

pub fn harmonic_dimension_with<T: Real>(s: &ShortSequence<T>, tol: RankTolerance<T>) -> usize {
    s.h1().dim() - rank(&harmonic_map(s), tol)
}

/// Decomposes `v` into exact, harmonic and coexact parts.
pub fn split_field<T: Real>(s: &ShortSequence<T>, v: &[T]) -> Result<FieldSplit<T>> {
    if v.len() != s.h1().dim() {
        return Err(Error::DimensionMismatch {
            expected: s.h1().dim(),
            found: v.len(),
        });
    }
    hodge_decompose(s).split(v)
}
