use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Dirichlet,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "dirichlet" => Ok(Boundary::Dirichlet),
            other => Err(Error::InvalidGrid(vec![format!("unknown boundary condition {other:?}")])),
        }
    }
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::Dirichlet => "dirichlet",
        })
    }
}

fn default_length() -> f64 {
    std::f64::consts::TAU
}

/// Uniform box grid `[0, L)^d` with `N` cells per axis.
///
/// Stands in for the unit ball of the continuum setting: the statements used
/// rely on connectedness and contractibility only, which the box shares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L", default = "default_length")]
    pub l: f64,
    pub bc: Boundary,
    /// Deactivated cells, as cell multi-indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<Vec<Vec<usize>>>,
}

/// Half-open box of cells `[lo, hi)` per axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellBox {
    pub lo: Vec<usize>,
    pub hi: Vec<usize>,
}

impl GridSpec {
    pub fn periodic(d: usize, n: usize) -> Self {
        Self {
            d,
            n,
            l: default_length(),
            bc: Boundary::Periodic,
            mask: None,
        }
    }

    pub fn dirichlet(d: usize, n: usize) -> Self {
        Self {
            bc: Boundary::Dirichlet,
            ..Self::periodic(d, n)
        }
    }

    pub fn h(&self) -> f64 {
        self.l / self.n as f64
    }

    /// Number of grid points (periodic) or cells (Dirichlet) in the box.
    pub fn cell_count(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    /// Every violated invariant, empty when the spec is valid.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(1..=3).contains(&self.d) {
            v.push(format!("d must be 1, 2 or 3 (got {})", self.d));
        }
        if self.n < 2 {
            v.push(format!("N must be at least 2 (got {})", self.n));
        }
        if self.bc == Boundary::Dirichlet && self.n < 3 {
            v.push(format!("dirichlet grids need N >= 3 (got {})", self.n));
        }
        if !(self.l.is_finite() && self.l > 0.0) {
            v.push(format!("L must be positive and finite (got {})", self.l));
        }
        if let Some(mask) = &self.mask {
            if self.bc != Boundary::Dirichlet {
                v.push("mask is only valid with dirichlet boundary conditions".into());
            }
            for cell in mask {
                if cell.len() != self.d || cell.iter().any(|&c| c >= self.n) {
                    v.push(format!("mask cell {cell:?} is not a cell of the grid"));
                }
            }
            if v.is_empty() {
                let distinct: BTreeSet<&Vec<usize>> = mask.iter().collect();
                if distinct.len() >= self.cell_count() {
                    v.push("mask deactivates every cell".into());
                }
            }
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidGrid(v))
        }
    }

    /// Multi-index of the linear index `i` (axis 0 fastest) on an `m`-per-axis lattice.
    pub(crate) fn unravel(d: usize, m: usize, mut i: usize) -> [usize; 3] {
        let mut p = [0; 3];
        for slot in p.iter_mut().take(d) {
            *slot = i % m;
            i /= m;
        }
        p
    }

    pub(crate) fn ravel(d: usize, m: usize, p: &[usize; 3]) -> usize {
        (0..d).rev().fold(0, |acc, a| acc * m + p[a])
    }

    /// Coordinates of the `i`-th grid point `p h` (axis 0 fastest).
    pub fn point(&self, i: usize) -> [f64; 3] {
        let p = Self::unravel(self.d, self.n, i);
        let h = self.h();
        [p[0] as f64 * h, p[1] as f64 * h, p[2] as f64 * h]
    }

    pub(crate) fn is_masked(&self) -> impl Fn(&[usize; 3]) -> bool + '_ {
        let set: BTreeSet<Vec<usize>> = self.mask.iter().flatten().cloned().collect();
        move |c: &[usize; 3]| set.contains(&c[..self.d])
    }
}

/// Removes the cells of `hole` from a Dirichlet grid; the hole boundary then
/// acts as an additional Dirichlet boundary.
pub fn puncture(spec: &GridSpec, hole: &CellBox) -> Result<GridSpec> {
    spec.validate()?;
    if spec.bc != Boundary::Dirichlet {
        return Err(Error::UnsupportedBc("holes require dirichlet boundary conditions".into()));
    }
    if hole.lo.len() != spec.d || hole.hi.len() != spec.d {
        return Err(Error::InvalidGrid(vec![format!("hole must have {} coordinates per corner", spec.d)]));
    }
    if hole.lo.iter().zip(&hole.hi).any(|(lo, hi)| lo >= hi) {
        return Err(Error::InvalidGrid(vec!["hole is empty".into()]));
    }
    if hole.lo.iter().all(|&lo| lo == 0) && hole.hi.iter().all(|&hi| hi >= spec.n) {
        return Err(Error::InvalidGrid(vec!["hole covers every cell".into()]));
    }
    if hole.lo.contains(&0) || hole.hi.iter().any(|&hi| hi >= spec.n) {
        return Err(Error::InvalidGrid(vec!["hole touches the outer boundary".into()]));
    }
    let mut mask: BTreeSet<Vec<usize>> = spec.mask.iter().flatten().cloned().collect();
    let count: usize = hole.lo.iter().zip(&hole.hi).map(|(lo, hi)| hi - lo).product();
    for i in 0..count {
        let mut rem = i;
        let cell: Vec<usize> = hole
            .lo
            .iter()
            .zip(&hole.hi)
            .map(|(lo, hi)| {
                let c = lo + rem % (hi - lo);
                rem /= hi - lo;
                c
            })
            .collect();
        mask.insert(cell);
    }
    let out = GridSpec {
        mask: Some(mask.into_iter().collect()),
        ..spec.clone()
    };
    out.validate()?;
    Ok(out)
}
