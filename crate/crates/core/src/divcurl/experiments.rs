use std::f64::consts::TAU;
use std::io::Write;

use serde::Serialize;

use crate::complex::ShortSequence;
use crate::divcurl::expr::Expr;
use crate::divcurl::family::OscillatoryFamily;
use crate::divcurl::table::{fmt, ConvergenceRow, ConvergenceTable};
use crate::error::{Error, Result};
use crate::grids::{build_derham, GridSpec};
use crate::linops::{projector_onto, range_basis, RankTolerance};

/// Fixed smooth periodic test functions, in coordinates rescaled to `[0, 2π)`.
pub const TEST_FUNCTIONS: [&str; 5] = [
    "exp(cos(x1 - 0.3) + cos(x2 + 0.7) + cos(x3 - 1.1))",
    "exp(0.8*cos(x1 + 1.3) - 0.6*sin(x2 - 0.4))",
    "sin(x1 + 2*x2) * exp(cos(x1 - x3))",
    "exp(-cos(x1 - 2.1)) * cos(x2 - 0.5)",
    "cos(x1) + 0.5*sin(2*x2 + 0.3)",
];

fn test_function_samples(grid: &GridSpec) -> Vec<Vec<f64>> {
    let s = TAU / grid.l;
    TEST_FUNCTIONS
        .iter()
        .map(|src| {
            let e = Expr::parse(src).expect("test functions parse");
            (0..grid.cell_count()).map(|p| e.eval(&grid.point(p).map(|v| v * s))).collect()
        })
        .collect()
}

/// Vector test field `i`: component `j` is test function `(i + j) mod 5`.
fn test_vector_fields(grid: &GridSpec) -> Vec<Vec<f64>> {
    let scalars = test_function_samples(grid);
    (0..scalars.len())
        .map(|i| (0..grid.d).flat_map(|j| scalars[(i + j) % scalars.len()].iter().copied()).collect())
        .collect()
}

fn cell_volume(grid: &GridSpec) -> f64 {
    grid.h().powi(grid.d as i32)
}

fn pointwise_dot(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
    let comps = a.len() / m;
    (0..m).map(|p| (0..comps).map(|c| a[c * m + p] * b[c * m + p]).sum()).collect()
}

fn check_layout(seq: &ShortSequence<f64>, family: &OscillatoryFamily, grid: &GridSpec) -> Result<()> {
    if family.components() != grid.d {
        return Err(Error::InvalidFamily(format!(
            "vector families need {} components, got {}",
            grid.d,
            family.components()
        )));
    }
    let want = grid.d * grid.cell_count();
    if seq.h1().dim() != want {
        return Err(Error::DimensionMismatch {
            expected: want,
            found: seq.h1().dim(),
        });
    }
    Ok(())
}

/// Positive div-curl experiment: `I_k = ⟨u_k, v_k⟩` against `I_∞ = ⟨U, V⟩`
/// with the hypothesis residuals `‖A0* u_k‖` and `‖A1 v_k‖`. The pairings
/// column holds `|∫ φ_i (u_k·v_k − U·V)|` for the fixed test functions.
pub fn run_positive(
    u: &OscillatoryFamily,
    v: &OscillatoryFamily,
    seq: &ShortSequence<f64>,
    grid: &GridSpec,
) -> Result<ConvergenceTable> {
    if u.frequencies() != v.frequencies() {
        return Err(Error::InvalidFamily("u and v must share their frequency list".into()));
    }
    check_layout(seq, u, grid)?;
    check_layout(seq, v, grid)?;
    let m = grid.cell_count();
    let w = cell_volume(grid);
    let phis = test_function_samples(grid);
    let a0_star = seq.a0().adjoint();
    let (um, vm) = (u.sample_macro(grid)?, v.sample_macro(grid)?);
    let reference = seq.h1().inner(&um, &vm);
    let limit_density = pointwise_dot(&um, &vm, m);

    let mut rows = Vec::new();
    for &k in u.frequencies() {
        let (uk, vk) = (u.sample(k, grid)?, v.sample(k, grid)?);
        let value = seq.h1().inner(&uk, &vk);
        let density = pointwise_dot(&uk, &vk, m);
        let pairings = phis
            .iter()
            .map(|phi| {
                let s: f64 = (0..m).map(|p| phi[p] * (density[p] - limit_density[p])).sum();
                (w * s).abs()
            })
            .collect();
        rows.push(ConvergenceRow {
            k,
            value,
            reference,
            error: (value - reference).abs(),
            res_div: seq.h0().norm(&a0_star.apply(&uk)),
            res_curl: seq.h2().norm(&seq.a1().apply(&vk)),
            pairings,
            res_div_discrete: None,
        });
    }
    Ok(ConvergenceTable::new(rows))
}

/// `‖div u_k‖` from the symbolic derivatives of the profiles, sampled on the grid.
pub fn closed_form_divergence(family: &OscillatoryFamily, k: u32, grid: &GridSpec) -> Result<f64> {
    let s = TAU / grid.l * k as f64;
    let mut terms = Vec::new();
    for j in 0..family.components().min(grid.d) {
        terms.push((family.macro_part()[j].derivative(j)?, family.micro()[j].derivative(j)?));
    }
    let m = grid.cell_count();
    let mut sum = 0.0;
    for p in 0..m {
        let x = grid.point(p);
        let y = x.map(|v| v * s);
        let div: f64 = terms.iter().map(|(dm, dw)| dm.eval(&x) + s * dw.eval(&y)).sum();
        sum += div * div;
    }
    Ok((cell_volume(grid) * sum).sqrt())
}

/// `u_k = sin(k x1) e1`, the standard weakly-null family.
pub fn counterexample_family(d: usize, frequencies: Vec<u32>) -> Result<OscillatoryFamily> {
    let zeros = vec!["0"; d];
    let mut micro = zeros.clone();
    micro[0] = "sin(x1)";
    OscillatoryFamily::parse(&zeros, &micro, frequencies)
}

/// `u_k = v_k = sin(k x1) e1`: the self-pairing `I_k` stays at `L^d / 2` while
/// the weak limit pairs to 0. `res_div` is the closed-form `‖k cos(k x1)‖`
/// (the discrete norm goes to `res_div_discrete`); the pairings column holds
/// `|⟨u_k, ψ_i⟩|` against the fixed vector test fields.
pub fn run_counterexample(grid: &GridSpec, frequencies: &[u32]) -> Result<ConvergenceTable> {
    let family = counterexample_family(grid.d, frequencies.to_vec())?;
    let seq = build_derham::<f64>(grid)?;
    let psis = test_vector_fields(grid);
    let a0_star = seq.a0().adjoint();
    let mut rows = Vec::new();
    for &k in family.frequencies() {
        let uk = family.sample(k, grid)?;
        let value = seq.h1().inner(&uk, &uk);
        rows.push(ConvergenceRow {
            k,
            value,
            reference: 0.0,
            error: value.abs(),
            res_div: closed_form_divergence(&family, k, grid)?,
            res_curl: seq.h2().norm(&seq.a1().apply(&uk)),
            pairings: psis.iter().map(|psi| seq.h1().inner(&uk, psi).abs()).collect(),
            res_div_discrete: Some(seq.h0().norm(&a0_star.apply(&uk))),
        });
    }
    Ok(ConvergenceTable::new(rows))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionRow {
    pub k: u32,
    /// `‖π u_k − π U‖` with `π` the orthogonal projector onto `rge(A0)`.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionTable {
    pub rows: Vec<ProjectionRow>,
}

impl ProjectionTable {
    pub fn max_error(&self) -> f64 {
        self.rows.iter().map(|r| r.error).fold(0.0, f64::max)
    }

    pub fn min_error(&self) -> f64 {
        self.rows.iter().map(|r| r.error).fold(f64::INFINITY, f64::min)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "error"])?;
        for r in &self.rows {
            w.write_record([r.k.to_string(), fmt(r.error)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Distance between the Helmholtz projections of `u_k` and of its weak limit.
/// Uses a dense projector, so intended for small grids.
pub fn projection_convergence(
    seq: &ShortSequence<f64>,
    family: &OscillatoryFamily,
    grid: &GridSpec,
) -> Result<ProjectionTable> {
    check_layout(seq, family, grid)?;
    let p = projector_onto(&range_basis(seq.a0(), RankTolerance::default()));
    let limit = p.apply(&family.sample_macro(grid)?);
    let mut rows = Vec::new();
    for &k in family.frequencies() {
        let pk = p.apply(&family.sample(k, grid)?);
        let diff: Vec<f64> = pk.iter().zip(&limit).map(|(a, b)| a - b).collect();
        rows.push(ProjectionRow {
            k,
            error: seq.h1().norm(&diff),
        });
    }
    Ok(ProjectionTable { rows })
}

/// `u_k = (1 + sin(k x2)) e1` (divergence-free) and `v_k = (1 + cos(k x1)) e1`
/// (curl-free), in two dimensions.
pub fn trig_pair(frequencies: Vec<u32>) -> Result<(OscillatoryFamily, OscillatoryFamily)> {
    Ok((
        OscillatoryFamily::parse(&["1", "0"], &["sin(x2)", "0"], frequencies.clone())?,
        OscillatoryFamily::parse(&["1", "0"], &["cos(x1)", "0"], frequencies)?,
    ))
}

/// Fejér-smoothed sawtooth `Σ_{m≤4} (1 − m/5) sin(m t)/m` with argument `t`.
fn smoothed_sawtooth(arg: &str) -> String {
    (1..=4)
        .map(|m| format!("{:.1}*sin({m}*({arg}))/{m}", 1.0 - m as f64 / 5.0))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Smoothed-sawtooth micros `S(k x2)`, `S(k x1 + 1)` on the non-periodic
/// macros `x1 e1`, `x2 e1`; the pairing error decays like `1/k`.
pub fn sawtooth_pair(frequencies: Vec<u32>) -> Result<(OscillatoryFamily, OscillatoryFamily)> {
    let su = smoothed_sawtooth("x2");
    let sv = smoothed_sawtooth("x1 + 1");
    Ok((
        OscillatoryFamily::parse(&["x1", "0"], &[&su, "0"], frequencies.clone())?,
        OscillatoryFamily::parse(&["x2", "0"], &[&sv, "0"], frequencies)?,
    ))
}

/// `grad(sin x1 sin x2)` plus the divergence-free micro `sin(k x2) e1`.
pub fn gradient_family(frequencies: Vec<u32>) -> Result<OscillatoryFamily> {
    OscillatoryFamily::parse(&["cos(x1)*sin(x2)", "sin(x1)*cos(x2)"], &["sin(x2)", "0"], frequencies)
}
