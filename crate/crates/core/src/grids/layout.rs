use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Scalar,
    Vector,
    /// Independent components `(j, k)` with `j < k`, in the order
    /// `(0,1), (0,2), (1,2)`.
    Antisym2,
    /// Upper triangle `(i, j)`, `i <= j`, row by row.
    SymMatrix,
    /// All `(i, j)` except `(d-1, d-1)`, row by row; the last diagonal entry
    /// is minus the sum of the others.
    DevMatrix,
    /// All `d²` entries, row by row.
    Matrix,
}

/// Per-point component layout of a grid field. Components are stored
/// component-major: component `c` of point `p` sits at `c * points + p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldLayout {
    pub kind: FieldKind,
    pub d: usize,
    pub points: usize,
}

impl FieldKind {
    pub fn component_count(self, d: usize) -> Result<usize> {
        if !(1..=3).contains(&d) {
            return Err(Error::UnsupportedDim(d));
        }
        Ok(match self {
            FieldKind::Scalar => 1,
            FieldKind::Vector => d,
            FieldKind::Antisym2 => d * (d - 1) / 2,
            FieldKind::SymMatrix => d * (d + 1) / 2,
            FieldKind::DevMatrix if d == 3 => 8,
            FieldKind::DevMatrix => return Err(Error::UnsupportedDim(d)),
            FieldKind::Matrix => d * d,
        })
    }

    /// Index pairs of the stored components.
    pub fn components(self, d: usize) -> Result<Vec<(usize, usize)>> {
        let all = (0..d).flat_map(|i| (0..d).map(move |j| (i, j)));
        let v: Vec<_> = match self {
            FieldKind::Scalar => vec![(0, 0)],
            FieldKind::Vector => (0..d).map(|j| (j, 0)).collect(),
            FieldKind::Antisym2 => all.filter(|(i, j)| i < j).collect(),
            FieldKind::SymMatrix => all.filter(|(i, j)| i <= j).collect(),
            FieldKind::DevMatrix => all.filter(|&(i, j)| (i, j) != (d - 1, d - 1)).collect(),
            FieldKind::Matrix => all.collect(),
        };
        debug_assert_eq!(v.len(), self.component_count(d)?);
        Ok(v)
    }
}

impl FieldLayout {
    pub fn new(kind: FieldKind, d: usize, points: usize) -> Result<Self> {
        kind.component_count(d)?;
        Ok(Self { kind, d, points })
    }

    pub fn components(&self) -> usize {
        self.kind.component_count(self.d).unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.components() * self.points
    }

    pub fn index(&self, component: usize, point: usize) -> usize {
        component * self.points + point
    }
}

/// Position of `(j, k)`, `j < k`, among the antisymmetric components.
pub(crate) fn antisym_index(d: usize, j: usize, k: usize) -> usize {
    debug_assert!(j < k && k < d);
    match (d, j, k) {
        (_, 0, 1) => 0,
        (_, 0, 2) => 1,
        (_, 1, 2) => 2,
        _ => unreachable!("antisymmetric pair out of range"),
    }
}
