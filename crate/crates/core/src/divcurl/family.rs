use std::f64::consts::TAU;

use crate::divcurl::expr::Expr;
use crate::error::{Error, Result};
use crate::grids::{Boundary, GridSpec};

/// `u_k(x) = macro(x) + micro(k x)`, one expression per component.
///
/// The micro profile is `2π`-periodic in each argument; on a box of side `L`
/// it is evaluated at `(2π/L) k x`, so every `k` oscillates an integer
/// number of times across the box.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatoryFamily {
    macro_part: Vec<Expr>,
    micro: Vec<Expr>,
    frequencies: Vec<u32>,
    /// Per-component, per-axis highest mode of the micro profile.
    bands: Vec<[u32; 3]>,
}

const MEAN_TOL: f64 = 1e-12;

/// Exact mean over `[0, 2π)^3` of a trig polynomial with the given bandwidth:
/// the uniform rule with `2b + 1` points per axis integrates it exactly.
fn trig_mean(e: &Expr, band: [u32; 3]) -> f64 {
    let m: Vec<usize> = band.iter().map(|&b| 2 * b as usize + 1).collect();
    let mut sum = 0.0;
    for i in 0..m[0] {
        for j in 0..m[1] {
            for k in 0..m[2] {
                let x = [
                    TAU * i as f64 / m[0] as f64,
                    TAU * j as f64 / m[1] as f64,
                    TAU * k as f64 / m[2] as f64,
                ];
                sum += e.eval(&x);
            }
        }
    }
    sum / (m[0] * m[1] * m[2]) as f64
}

impl OscillatoryFamily {
    pub fn new(macro_part: Vec<Expr>, micro: Vec<Expr>, frequencies: Vec<u32>) -> Result<Self> {
        if macro_part.is_empty() || macro_part.len() != micro.len() {
            return Err(Error::InvalidFamily(format!(
                "macro has {} components and micro has {}",
                macro_part.len(),
                micro.len()
            )));
        }
        if frequencies.is_empty() || frequencies[0] == 0 || frequencies.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFamily("frequencies must be positive and strictly increasing".into()));
        }
        let mut bands = Vec::with_capacity(micro.len());
        for (c, w) in micro.iter().enumerate() {
            let band = w.trig_bandwidth().ok_or_else(|| {
                Error::InvalidFamily(format!("micro component {c} is not a trigonometric polynomial"))
            })?;
            let mean = trig_mean(w, band);
            if mean.abs() > MEAN_TOL {
                return Err(Error::InvalidFamily(format!("micro component {c} has mean {mean:e}, not zero")));
            }
            bands.push(band);
        }
        Ok(Self {
            macro_part,
            micro,
            frequencies,
            bands,
        })
    }

    /// Parses component expressions.
    pub fn parse(macro_part: &[&str], micro: &[&str], frequencies: Vec<u32>) -> Result<Self> {
        let p = |v: &[&str]| v.iter().map(|s| Expr::parse(s)).collect::<Result<Vec<_>>>();
        Self::new(p(macro_part)?, p(micro)?, frequencies)
    }

    pub fn components(&self) -> usize {
        self.micro.len()
    }

    pub fn frequencies(&self) -> &[u32] {
        &self.frequencies
    }

    pub fn macro_part(&self) -> &[Expr] {
        &self.macro_part
    }

    pub fn micro(&self) -> &[Expr] {
        &self.micro
    }

    /// Same profiles with a different frequency list.
    pub fn with_frequencies(&self, frequencies: Vec<u32>) -> Result<Self> {
        Self::new(self.macro_part.clone(), self.micro.clone(), frequencies)
    }

    fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        grid.validate()?;
        if grid.bc != Boundary::Periodic {
            return Err(Error::UnsupportedBc("families are sampled on periodic grids".into()));
        }
        let arity = self.macro_part.iter().chain(&self.micro).map(Expr::arity).max().unwrap_or(0);
        if arity > grid.d {
            return Err(Error::InvalidFamily(format!("expression uses x{arity} on a {}-dimensional grid", grid.d)));
        }
        Ok(())
    }

    /// Rejects `k` when `k` times a micro mode reaches the Nyquist limit `N/2`.
    pub fn check_aliasing(&self, k: u32, grid: &GridSpec) -> Result<()> {
        let half = grid.n as f64 / 2.0;
        for band in &self.bands {
            let mode = band.iter().copied().max().unwrap_or(0);
            if (k as f64) * (mode as f64) >= half {
                return Err(Error::Aliasing { k, mode, half });
            }
        }
        Ok(())
    }

    /// Samples `u_k` at the grid points, component-major.
    pub fn sample(&self, k: u32, grid: &GridSpec) -> Result<Vec<f64>> {
        self.check_grid(grid)?;
        self.check_aliasing(k, grid)?;
        let s = TAU / grid.l * k as f64;
        Ok(self.sample_with(grid, |c, x| {
            let y = x.map(|v| v * s);
            self.macro_part[c].eval(x) + self.micro[c].eval(&y)
        }))
    }

    /// Samples the weak limit, i.e. the macro profile.
    pub fn sample_macro(&self, grid: &GridSpec) -> Result<Vec<f64>> {
        self.check_grid(grid)?;
        Ok(sample_exprs(&self.macro_part, grid))
    }

    fn sample_with(&self, grid: &GridSpec, f: impl Fn(usize, &[f64; 3]) -> f64) -> Vec<f64> {
        let m = grid.cell_count();
        let mut out = Vec::with_capacity(self.components() * m);
        for c in 0..self.components() {
            out.extend((0..m).map(|p| f(c, &grid.point(p))));
        }
        out
    }
}

/// Samples component expressions at the grid points, component-major.
pub fn sample_exprs(exprs: &[Expr], grid: &GridSpec) -> Vec<f64> {
    let m = grid.cell_count();
    exprs
        .iter()
        .flat_map(|e| (0..m).map(move |p| e.eval(&grid.point(p))))
        .collect()
}
