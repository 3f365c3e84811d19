use std::io::Write;

use serde::Serialize;

use crate::error::Result;

pub const CSV_HEADER: [&str; 6] = ["k", "I_k", "I_inf", "error", "res_div", "res_curl"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub k: u32,
    /// `I_k`
    pub value: f64,
    /// `I_∞`
    pub reference: f64,
    /// `|I_k − I_∞|`
    pub error: f64,
    pub res_div: f64,
    pub res_curl: f64,
    /// Local pairings against the fixed test fields (see the producing experiment).
    pub pairings: Vec<f64>,
    /// Discrete divergence norm where `res_div` is given in closed form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub res_div_discrete: Option<f64>,
}

/// Rows sorted by `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

/// Least-squares slope of `log y` against `log x` over points with `x, y > 0`;
/// `None` with fewer than two such points.
pub fn fit_slope(points: impl IntoIterator<Item = (f64, f64)>) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .into_iter()
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

pub(crate) fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

impl ConvergenceTable {
    pub fn new(mut rows: Vec<ConvergenceRow>) -> Self {
        rows.sort_by_key(|r| r.k);
        Self { rows }
    }

    /// Decay slope of `error` over `log k`.
    pub fn slope(&self) -> Option<f64> {
        self.slope_of(|r| r.error)
    }

    pub fn slope_of(&self, f: impl Fn(&ConvergenceRow) -> f64) -> Option<f64> {
        fit_slope(self.rows.iter().map(|r| (r.k as f64, f(r))))
    }

    pub fn max_error(&self) -> f64 {
        self.rows.iter().map(|r| r.error).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            w.write_record([
                r.k.to_string(),
                fmt(r.value),
                fmt(r.reference),
                fmt(r.error),
                fmt(r.res_div),
                fmt(r.res_curl),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
