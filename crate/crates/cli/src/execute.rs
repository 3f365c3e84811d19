use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use hilbert_complex::complex::{
    harmonic_dimension, harmonic_dimension_with, hodge_decompose_with, validate_sequence_with, ShortSequence,
};
use hilbert_complex::divcurl::{
    projection_convergence, run_counterexample, run_positive, sawtooth_pair, trig_pair, counterexample_family,
    friedrichs_check, gradient_family, OscillatoryFamily,
};
use hilbert_complex::grids::{build_derham, build_gradgrad, puncture, CellBox, GridSpec};
use hilbert_complex::linops::{poincare_constant_with, LinearMap, RankTolerance};
use hilbert_complex::{mtx, Error, Real};

use crate::config::{Command, Preset, Profile, RunConfig};
use crate::error::{CliError, CliResult};

/// Grid with every configured hole removed.
pub fn effective_grid(cfg: &RunConfig) -> CliResult<GridSpec> {
    let mut grid = cfg.grid.clone().ok_or_else(|| CliError::Invalid(vec!["grid is required".into()]))?;
    for h in &cfg.holes {
        let hole = CellBox {
            lo: vec![h[0], h[1]],
            hi: vec![h[2], h[3]],
        };
        grid = puncture(&grid, &hole)?;
    }
    Ok(grid)
}

fn rank_tol(cfg: &RunConfig) -> RankTolerance<f64> {
    cfg.tol.map_or_else(RankTolerance::default, RankTolerance::Relative)
}

/// The de Rham sequence of the grid, or the imported operator pair.
pub fn load_sequence(cfg: &RunConfig) -> CliResult<ShortSequence<f64>> {
    let rtol = cfg.tol.unwrap_or_else(f64::sequence_rtol);
    match &cfg.import {
        Some(dir) => {
            let (a0, a1) = mtx::import_operators::<f64>(dir)?;
            Ok(validate_sequence_with(a0, a1, rtol)?)
        }
        None => Ok(build_derham::<f64>(&effective_grid(cfg)?)?),
    }
}

fn optional_constant(a: &LinearMap<f64>, tol: RankTolerance<f64>) -> CliResult<String> {
    match poincare_constant_with(a, tol) {
        Ok(c) => Ok(c.to_string()),
        Err(Error::TrivialRange) => Ok("none".into()),
        Err(e) => Err(e.into()),
    }
}

fn optional(x: Option<f64>) -> String {
    x.map_or_else(|| "none".into(), |v| v.to_string())
}

fn family_from(p: &Profile, frequencies: &[u32]) -> CliResult<OscillatoryFamily> {
    let m: Vec<&str> = p.macro_part.iter().map(String::as_str).collect();
    let w: Vec<&str> = p.micro.iter().map(String::as_str).collect();
    Ok(OscillatoryFamily::parse(&m, &w, frequencies.to_vec())?)
}

fn csv_target(cfg: &RunConfig) -> CliResult<Option<PathBuf>> {
    let Some(dir) = &cfg.out else { return Ok(None) };
    std::fs::create_dir_all(dir).map_err(Error::from)?;
    Ok(Some(dir.join(format!("{}.csv", cfg.command.name()))))
}

fn write_csv(cfg: &RunConfig, write: impl FnOnce(&mut BufWriter<File>) -> hilbert_complex::Result<()>) -> CliResult<()> {
    if let Some(path) = csv_target(cfg)? {
        let mut w = BufWriter::new(File::create(&path).map_err(Error::from)?);
        write(&mut w)?;
        w.flush().map_err(Error::from)?;
    }
    Ok(())
}

fn export(cfg: &RunConfig, dir: &Path) -> CliResult<String> {
    let seq = build_derham::<f64>(&effective_grid(cfg)?)?;
    std::fs::create_dir_all(dir).map_err(Error::from)?;
    mtx::export_sequence(&seq, dir)?;
    Ok(format!("exported=5 dir={}", dir.display()))
}

/// Runs the configured command, writing artifacts under `out` and returning
/// the one-line summary.
pub fn execute(cfg: &RunConfig) -> CliResult<String> {
    let tol = rank_tol(cfg);
    match cfg.command {
        Command::CheckComplex => {
            let s = load_sequence(cfg)?;
            Ok(format!("residual={}", s.residual()))
        }
        Command::Hodge => {
            let s = load_sequence(cfg)?;
            let h = hodge_decompose_with(&s, tol);
            Ok(format!(
                "harmonic_dim={} orthogonality_defect={} resolution_defect={} projector_defect={}",
                h.harmonic_dim(),
                h.orthogonality_defect(),
                h.resolution_defect(),
                h.projector_defect()
            ))
        }
        Command::Betti => {
            let s = load_sequence(cfg)?;
            Ok(format!("harmonic_dim={}", harmonic_dimension_with(&s, tol)))
        }
        Command::Poincare => {
            let s = load_sequence(cfg)?;
            Ok(format!(
                "poincare_A0={} poincare_A1star={}",
                optional_constant(s.a0(), tol)?,
                optional_constant(&s.a1().adjoint(), tol)?
            ))
        }
        Command::Divcurl => {
            let grid = effective_grid(cfg)?;
            let (u, v) = match (&cfg.family, cfg.preset) {
                (Some(f), _) => {
                    let u = family_from(&f.u, &cfg.frequencies)?;
                    let v = match &f.v {
                        Some(p) => family_from(p, &cfg.frequencies)?,
                        None => u.clone(),
                    };
                    (u, v)
                }
                (None, Some(Preset::Sawtooth)) => sawtooth_pair(cfg.frequencies.clone())?,
                (None, _) => trig_pair(cfg.frequencies.clone())?,
            };
            let seq = build_derham::<f64>(&grid)?;
            let t = run_positive(&u, &v, &seq, &grid)?;
            write_csv(cfg, |w| t.write_csv(w))?;
            Ok(format!("rows={} max_error={} slope={}", t.rows.len(), t.max_error(), optional(t.slope())))
        }
        Command::Counterexample => {
            let grid = effective_grid(cfg)?;
            let t = run_counterexample(&grid, &cfg.frequencies)?;
            write_csv(cfg, |w| t.write_csv(w))?;
            let min = t.rows.iter().map(|r| r.error).fold(f64::INFINITY, f64::min);
            Ok(format!(
                "rows={} min_gap={} div_slope={}",
                t.rows.len(),
                min,
                optional(t.slope_of(|r| r.res_div))
            ))
        }
        Command::Projection => {
            let grid = effective_grid(cfg)?;
            let family = match (&cfg.family, cfg.preset) {
                (Some(f), _) => family_from(&f.u, &cfg.frequencies)?,
                (None, Some(Preset::Counterexample)) => counterexample_family(grid.d, cfg.frequencies.clone())?,
                (None, _) => gradient_family(cfg.frequencies.clone())?,
            };
            let seq = build_derham::<f64>(&grid)?;
            let t = projection_convergence(&seq, &family, &grid)?;
            write_csv(cfg, |w| t.write_csv(w))?;
            Ok(format!("rows={} max_error={} min_error={}", t.rows.len(), t.max_error(), t.min_error()))
        }
        Command::Friedrichs => {
            let grid = effective_grid(cfg)?;
            let r = friedrichs_check(&grid, cfg.trials, cfg.seed)?;
            write_csv(cfg, |w| r.write_csv(w))?;
            Ok(format!("trials={} max_rel_residual={}", r.trials.len(), r.max_rel_residual()))
        }
        Command::Gradgrad => {
            let (a, b) = build_gradgrad::<f64>(&effective_grid(cfg)?)?;
            Ok(format!(
                "harmonic_dim_sym={} harmonic_dim_dev={} residual_sym={} residual_dev={}",
                harmonic_dimension(&a),
                harmonic_dimension(&b),
                a.residual(),
                b.residual()
            ))
        }
        Command::Export => {
            let dir = cfg.out.clone().ok_or_else(|| CliError::Invalid(vec!["out is required by export".into()]))?;
            export(cfg, &dir)
        }
    }
}
