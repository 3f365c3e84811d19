use crate::grids::layout::antisym_index;
use crate::grids::spec::GridSpec;
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;

/// Faces of one orientation: spanned by `axes`, enumerated with axis 0 fastest.
struct FaceFamily {
    axes: Vec<usize>,
    extents: [usize; 3],
    /// DOF number of each face, `None` when removed.
    dofs: Vec<Option<usize>>,
}

impl FaceFamily {
    fn index(&self, d: usize, p: &[usize; 3]) -> Option<usize> {
        let mut lin = 0;
        for a in (0..d).rev() {
            if p[a] >= self.extents[a] {
                return None;
            }
            lin = lin * self.extents[a] + p[a];
        }
        self.dofs[lin]
    }
}

/// Cubical complex of the active cells of a Dirichlet grid, with every face
/// on the boundary of the active region removed.
///
/// A `k`-face is kept when it touches an active cell and does not lie in a
/// `(d−1)`-face that has exactly one active neighbour. Removed faces form a
/// subcomplex, so the relative coboundaries compose to zero.
pub(crate) struct CubicalComplex {
    d: usize,
    n: usize,
    active: Vec<bool>,
    /// Families per degree: vertices, edges, 2-faces.
    families: [Vec<FaceFamily>; 3],
    counts: [usize; 3],
}

fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << d)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..d).filter(|a| m & (1 << a) != 0).collect())
        .collect()
}

impl CubicalComplex {
    pub(crate) fn new(spec: &GridSpec) -> Self {
        let (d, n) = (spec.d, spec.n);
        let masked = spec.is_masked();
        let active = (0..spec.cell_count())
            .map(|i| !masked(&GridSpec::unravel(d, n, i)))
            .collect();
        let mut cx = CubicalComplex {
            d,
            n,
            active,
            families: [Vec::new(), Vec::new(), Vec::new()],
            counts: [0; 3],
        };
        for k in 0..3 {
            let mut fams = Vec::new();
            let mut next = 0;
            if k <= d {
                let mut sets = subsets(d, k);
                sets.sort();
                for axes in sets {
                    let mut extents = [1; 3];
                    for (a, e) in extents.iter_mut().enumerate().take(d) {
                        *e = if axes.contains(&a) { n } else { n + 1 };
                    }
                    let total: usize = extents[..d].iter().product();
                    let mut dofs = Vec::with_capacity(total);
                    for lin in 0..total {
                        let p = unravel_extents(d, &extents, lin);
                        if cx.kept(&p, &axes) {
                            dofs.push(Some(next));
                            next += 1;
                        } else {
                            dofs.push(None);
                        }
                    }
                    fams.push(FaceFamily { axes, extents, dofs });
                }
            }
            cx.families[k] = fams;
            cx.counts[k] = next;
        }
        cx
    }

    #[cfg(test)]
    pub(crate) fn count(&self, k: usize) -> usize {
        self.counts[k]
    }

    /// Active cells adjacent to the face `(p, axes)`.
    fn active_neighbours(&self, p: &[usize; 3], axes: &[usize]) -> usize {
        let free: Vec<usize> = (0..self.d).filter(|a| !axes.contains(a)).collect();
        let mut count = 0;
        for choice in 0u32..1 << free.len() {
            let mut c = *p;
            let mut ok = true;
            for (bit, &a) in free.iter().enumerate() {
                if choice & (1 << bit) != 0 {
                    if c[a] == 0 {
                        ok = false;
                    } else {
                        c[a] -= 1;
                    }
                }
                if c[a] >= self.n {
                    ok = false;
                }
            }
            if ok && axes.iter().all(|&a| c[a] < self.n) && self.active[GridSpec::ravel(self.d, self.n, &c)] {
                count += 1;
            }
        }
        count
    }

    fn on_boundary(&self, p: &[usize; 3], axes: &[usize]) -> bool {
        let d = self.d;
        if axes.len() >= d {
            return false;
        }
        let free: Vec<usize> = (0..d).filter(|a| !axes.contains(a)).collect();
        // (d−1)-faces containing this face: add all free axes but one.
        for &left_out in &free {
            let added: Vec<usize> = free.iter().copied().filter(|&a| a != left_out).collect();
            let mut sup: Vec<usize> = axes.iter().copied().chain(added.iter().copied()).collect();
            sup.sort_unstable();
            for choice in 0u32..1 << added.len() {
                let mut q = *p;
                let mut ok = true;
                for (bit, &a) in added.iter().enumerate() {
                    if choice & (1 << bit) != 0 {
                        if q[a] == 0 {
                            ok = false;
                        } else {
                            q[a] -= 1;
                        }
                    }
                    if q[a] >= self.n {
                        ok = false;
                    }
                }
                if ok && self.active_neighbours(&q, &sup) == 1 {
                    return true;
                }
            }
        }
        false
    }

    fn kept(&self, p: &[usize; 3], axes: &[usize]) -> bool {
        self.active_neighbours(p, axes) > 0 && !self.on_boundary(p, axes)
    }

    fn dof(&self, k: usize, axes: &[usize], p: &[usize; 3]) -> Option<usize> {
        self.families[k].iter().find(|f| f.axes == axes)?.index(self.d, p)
    }

    /// Vertex → edge coboundary.
    pub(crate) fn grad<T: Scalar>(&self) -> CsrMatrix<T> {
        let mut t = Vec::new();
        for fam in &self.families[1] {
            let j = fam.axes[0];
            for (lin, dof) in fam.dofs.iter().enumerate() {
                let Some(row) = *dof else { continue };
                let p = unravel_extents(self.d, &fam.extents, lin);
                let mut q = p;
                q[j] += 1;
                if let Some(c) = self.dof(0, &[], &q) {
                    t.push((row, c, T::one()));
                }
                if let Some(c) = self.dof(0, &[], &p) {
                    t.push((row, c, -T::one()));
                }
            }
        }
        CsrMatrix::from_triplets(self.counts[1], self.counts[0], t)
    }

    /// Edge → 2-face coboundary, `D_k v_j − D_j v_k` on the face spanned by `j < k`.
    pub(crate) fn curl<T: Scalar>(&self) -> CsrMatrix<T> {
        let mut t = Vec::new();
        for fam in &self.families[2] {
            let (j, k) = (fam.axes[0], fam.axes[1]);
            debug_assert!(antisym_index(self.d, j, k) < 3);
            for (lin, dof) in fam.dofs.iter().enumerate() {
                let Some(row) = *dof else { continue };
                let p = unravel_extents(self.d, &fam.extents, lin);
                let mut pk = p;
                pk[k] += 1;
                let mut pj = p;
                pj[j] += 1;
                let terms = [(j, pk, T::one()), (j, p, -T::one()), (k, pj, -T::one()), (k, p, T::one())];
                for (axis, q, s) in terms {
                    if let Some(c) = self.dof(1, &[axis], &q) {
                        t.push((row, c, s));
                    }
                }
            }
        }
        CsrMatrix::from_triplets(self.counts[2], self.counts[1], t)
    }
}

fn unravel_extents(d: usize, extents: &[usize; 3], mut lin: usize) -> [usize; 3] {
    let mut p = [0; 3];
    for a in 0..d {
        p[a] = lin % extents[a];
        lin /= extents[a];
    }
    p
}
