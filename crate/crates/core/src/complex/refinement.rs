use std::io::Write;

use serde::Serialize;

use crate::complex::hodge::harmonic_dimension;
use crate::complex::sequence::ShortSequence;
use crate::error::{Error, Result};
use crate::linops::poincare_constant;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementLevel {
    pub resolution: usize,
    /// `None` when `A0` is zero.
    pub poincare_a0: Option<f64>,
    /// `None` when `A1` is zero.
    pub poincare_a1star: Option<f64>,
    pub harmonic_dim: usize,
}

/// Per-resolution Poincaré constants and harmonic dimension of a family of
/// discrete complexes. Compactness has no finite-dimensional content; its
/// proxy is that the constants stay bounded and the harmonic dimension does
/// not change under refinement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementReport {
    pub levels: Vec<RefinementLevel>,
}

impl RefinementReport {
    pub fn harmonic_dim_stable(&self) -> bool {
        self.levels.windows(2).all(|w| w[0].harmonic_dim == w[1].harmonic_dim)
    }

    /// Largest Poincaré constant (either side) over all levels.
    pub fn max_constant(&self) -> f64 {
        self.levels
            .iter()
            .flat_map(|l| [l.poincare_a0, l.poincare_a1star])
            .flatten()
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["N", "poincare_A0", "poincare_A1star", "harmonic_dim"])?;
        let fmt = |x: Option<f64>| x.map_or_else(|| "inf".to_string(), |v| format!("{v:.16e}"));
        for l in &self.levels {
            w.write_record([
                l.resolution.to_string(),
                fmt(l.poincare_a0),
                fmt(l.poincare_a1star),
                l.harmonic_dim.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn optional_constant<T: Real>(a: &crate::linops::LinearMap<T>) -> Result<Option<f64>> {
    match poincare_constant(a) {
        Ok(c) => Ok(Some(c.to_f64())),
        Err(Error::TrivialRange) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn refinement_diagnostics<T, F>(builder: F, resolutions: &[usize]) -> Result<RefinementReport>
where
    T: Real,
    F: Fn(usize) -> Result<ShortSequence<T>>,
{
    let mut res = resolutions.to_vec();
    res.sort_unstable();
    res.dedup();
    if res.len() < 2 {
        return Err(Error::Precondition("refinement needs at least two distinct resolutions".into()));
    }
    let levels = res
        .into_iter()
        .map(|n| {
            let s = builder(n)?;
            Ok(RefinementLevel {
                resolution: n,
                poincare_a0: optional_constant(s.a0())?,
                poincare_a1star: optional_constant(&s.a1().adjoint())?,
                harmonic_dim: harmonic_dimension(&s),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RefinementReport { levels })
}
