use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::divcurl::table::fmt;
use crate::error::Result;
use crate::grids::{GridSpec, PeriodicCalculus};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FriedrichsTrial {
    /// `‖Grad u‖²`
    pub grad_sq: f64,
    /// `½‖Curl u‖²`
    pub half_curl_sq: f64,
    /// `‖div u‖²`
    pub div_sq: f64,
    /// `|‖Grad u‖² − ½‖Curl u‖² − ‖div u‖²| / ‖Grad u‖²`, or the absolute
    /// residual when `Grad u = 0`.
    pub rel_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FriedrichsReport {
    pub trials: Vec<FriedrichsTrial>,
}

impl FriedrichsReport {
    pub fn max_rel_residual(&self) -> f64 {
        self.trials.iter().map(|t| t.rel_residual).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["trial", "grad_sq", "half_curl_sq", "div_sq", "rel_residual"])?;
        for (i, t) in self.trials.iter().enumerate() {
            w.write_record([i.to_string(), fmt(t.grad_sq), fmt(t.half_curl_sq), fmt(t.div_sq), fmt(t.rel_residual)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// The three terms of the Friedrichs identity for one vector field.
pub fn friedrichs_terms(calc: &PeriodicCalculus<f64>, u: &[f64]) -> FriedrichsTrial {
    let sq = |space: &crate::linops::InnerProductSpace<f64>, x: &[f64]| space.inner(x, x);
    let grad_sq = sq(&calc.matrices, &calc.grad_vec.apply(u));
    let half_curl_sq = 0.5 * sq(&calc.matrices, &calc.curl_full.apply(u));
    let div_sq = sq(&calc.scalars, &calc.div.apply(u));
    let r = (grad_sq - half_curl_sq - div_sq).abs();
    FriedrichsTrial {
        grad_sq,
        half_curl_sq,
        div_sq,
        rel_residual: if grad_sq > 0.0 { r / grad_sq } else { r },
    }
}

/// Checks `‖Grad u‖² = ½‖Curl u‖² + ‖div u‖²` on `trials` random fields with
/// entries uniform in `[−1, 1]`. Periodic grids only.
pub fn friedrichs_check(spec: &GridSpec, trials: usize, seed: u64) -> Result<FriedrichsReport> {
    let calc = PeriodicCalculus::<f64>::new(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = calc.vectors.dim();
    let trials = (0..trials)
        .map(|_| {
            let u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
            friedrichs_terms(&calc, &u)
        })
        .collect();
    Ok(FriedrichsReport { trials })
}
