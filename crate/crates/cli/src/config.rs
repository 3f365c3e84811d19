use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use hilbert_complex::grids::{Boundary, GridSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CheckComplex,
    Hodge,
    Betti,
    Poincare,
    #[serde(alias = "positive")]
    Divcurl,
    Counterexample,
    Projection,
    Friedrichs,
    Gradgrad,
    Export,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckComplex => "check-complex",
            Command::Hodge => "hodge",
            Command::Betti => "betti",
            Command::Poincare => "poincare",
            Command::Divcurl => "divcurl",
            Command::Counterexample => "counterexample",
            Command::Projection => "projection",
            Command::Friedrichs => "friedrichs",
            Command::Gradgrad => "gradgrad",
            Command::Export => "export",
        }
    }

    fn accepts_import(self) -> bool {
        matches!(self, Command::CheckComplex | Command::Hodge | Command::Betti | Command::Poincare)
    }

    fn needs_frequencies(self) -> bool {
        matches!(self, Command::Divcurl | Command::Counterexample | Command::Projection)
    }
}

/// Built-in oscillatory families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Trig,
    Sawtooth,
    Gradient,
    Counterexample,
}

/// Component expressions for `macro(x) + micro(k x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profile {
    #[serde(rename = "macro")]
    pub macro_part: Vec<String>,
    pub micro: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub u: Profile,
    /// Defaults to `u`.
    #[serde(default)]
    pub v: Option<Profile>,
}

/// Config file contents before validation.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(alias = "experiment")]
    command: Option<Command>,
    grid: Option<GridSpec>,
    #[serde(default)]
    holes: Vec<[usize; 4]>,
    frequencies: Option<Vec<u32>>,
    family: Option<FamilyConfig>,
    preset: Option<Preset>,
    tol: Option<f64>,
    trials: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    import: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Absent only when operators are imported.
    pub grid: Option<GridSpec>,
    /// Cell boxes `[x0, x1) × [y0, y1)` removed from a 2D Dirichlet grid.
    pub holes: Vec<[usize; 4]>,
    pub frequencies: Vec<u32>,
    pub family: Option<FamilyConfig>,
    pub preset: Option<Preset>,
    pub tol: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub import: Option<PathBuf>,
}

fn parse_hole(s: &str) -> Result<[usize; 4], String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| "expected x0,y0,x1,y1".to_string())
}

#[derive(Debug, Clone, Default, Parser)]
#[command(name = "divcurl", version, about = "Hilbert complex diagnostics and div-curl experiments on grids")]
pub struct Cli {
    /// JSON run config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub command: Option<Command>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(long)]
    pub bc: Option<Boundary>,
    /// Cell box x0,y0,x1,y1 to remove; repeatable. Replaces any holes in the config file.
    #[arg(long = "hole", value_parser = parse_hole)]
    pub holes: Vec<[usize; 4]>,
    #[arg(long, value_delimiter = ',')]
    pub frequencies: Option<Vec<u32>>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory holding A0.mtx, A1.mtx and optional gram files.
    #[arg(long)]
    pub import: Option<PathBuf>,
}

pub fn parse_config_str(text: &str) -> CliResult<RawConfig> {
    serde_json::from_str::<RawConfig>(text).map_err(|e| CliError::Parse {
        message: e.to_string(),
        line: e.line(),
        column: e.column(),
    })
}

/// Reads the optional config file, applies flag overrides and validates.
pub fn parse_config(cli: &Cli) -> CliResult<RunConfig> {
    let raw = match &cli.config {
        Some(path) => read_config(path)?,
        None => RawConfig::default(),
    };
    resolve(raw, cli)
}

fn read_config(path: &Path) -> CliResult<RawConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_config_str(&text)
}

fn merge_grid(file: Option<GridSpec>, cli: &Cli, violations: &mut Vec<String>) -> Option<GridSpec> {
    let any_flag = cli.d.is_some() || cli.n.is_some() || cli.l.is_some() || cli.bc.is_some();
    let mut grid = match file {
        Some(g) => g,
        None if any_flag => {
            if cli.d.is_none() {
                violations.push("grid.d is required".into());
            }
            if cli.n.is_none() {
                violations.push("grid.N is required".into());
            }
            GridSpec::periodic(cli.d.unwrap_or(1), cli.n.unwrap_or(1))
        }
        None => return None,
    };
    if let Some(d) = cli.d {
        grid.d = d;
    }
    if let Some(n) = cli.n {
        grid.n = n;
    }
    if let Some(l) = cli.l {
        grid.l = l;
    }
    if let Some(bc) = cli.bc {
        grid.bc = bc;
    }
    Some(grid)
}

/// Merges flags over file values and checks every invariant, reporting all
/// violations at once.
pub fn resolve(raw: RawConfig, cli: &Cli) -> CliResult<RunConfig> {
    let mut v = Vec::new();
    let command = cli.command.or(raw.command);
    let grid = merge_grid(raw.grid, cli, &mut v);
    let holes = if cli.holes.is_empty() { raw.holes } else { cli.holes.clone() };
    let frequencies = cli.frequencies.clone().or(raw.frequencies);
    let family = raw.family;
    let preset = cli.preset.or(raw.preset);
    let tol = cli.tol.or(raw.tol);
    let trials = cli.trials.or(raw.trials).unwrap_or(100);
    let seed = cli.seed.or(raw.seed).unwrap_or(0);
    let out = cli.out.clone().or(raw.out);
    let import = cli.import.clone().or(raw.import);

    let imported = import.is_some();
    match &grid {
        Some(g) => v.extend(g.violations().into_iter().map(|m| format!("grid: {m}"))),
        None if !imported => v.push("grid is required".into()),
        None => {}
    }
    let Some(command) = command else {
        v.push("command is required".into());
        return Err(CliError::Invalid(v));
    };
    if imported && !command.accepts_import() {
        v.push(format!("import is not supported by {}", command.name()));
    }
    if imported && grid.is_some() {
        v.push("grid and import are mutually exclusive".into());
    }
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            v.push(format!("tol must be positive, got {t}"));
        }
    }
    if trials == 0 {
        v.push("trials must be positive".into());
    }
    let frequencies = match frequencies {
        Some(f) => {
            if f.is_empty() {
                v.push("frequencies must not be empty".into());
            }
            if f.contains(&0) {
                v.push("frequencies must be positive".into());
            }
            f
        }
        None => {
            if command.needs_frequencies() {
                v.push(format!("frequencies are required by {}", command.name()));
            }
            Vec::new()
        }
    };
    if command == Command::Export && out.is_none() {
        v.push("out is required by export".into());
    }
    for h in &holes {
        if h[0] >= h[2] || h[1] >= h[3] {
            v.push(format!("hole {h:?} is empty"));
        }
    }
    if !holes.is_empty() {
        if let Some(g) = &grid {
            if g.d != 2 || g.bc != Boundary::Dirichlet {
                v.push("holes need a two-dimensional dirichlet grid".into());
            }
        }
    }
    if let Some(f) = &family {
        if !matches!(command, Command::Divcurl | Command::Projection) {
            v.push(format!("family is not used by {}", command.name()));
        }
        if let Some(g) = &grid {
            for (name, p) in std::iter::once(("u", &f.u)).chain(f.v.as_ref().map(|p| ("v", p))) {
                if p.macro_part.len() != g.d || p.micro.len() != g.d {
                    v.push(format!("family.{name} needs {} components per profile", g.d));
                }
            }
        }
        if f.v.is_some() && command == Command::Projection {
            v.push("family.v is not used by projection".into());
        }
    }
    if family.is_some() && preset.is_some() {
        v.push("family and preset are mutually exclusive".into());
    }
    if let Some(p) = preset {
        let ok = match command {
            Command::Divcurl => matches!(p, Preset::Trig | Preset::Sawtooth),
            Command::Projection => matches!(p, Preset::Gradient | Preset::Counterexample),
            _ => false,
        };
        if !ok {
            v.push(format!("preset {p:?} is not available for {}", command.name()));
        }
    }
    if !v.is_empty() {
        return Err(CliError::Invalid(v));
    }
    Ok(RunConfig {
        command,
        grid,
        holes,
        frequencies,
        family,
        preset,
        tol,
        trials,
        seed,
        out,
        import,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(text: &str) -> RawConfig {
        parse_config_str(text).unwrap()
    }

    #[test]
    fn minimal_betti() {
        let c = resolve(
            raw(r#"{"command":"betti","grid":{"d":2,"N":8,"L":6.2832,"bc":"periodic"}}"#),
            &Cli::default(),
        )
        .unwrap();
        assert_eq!(c.command, Command::Betti);
        assert_eq!(c.grid.unwrap().n, 8);
    }

    #[test]
    fn experiment_alias() {
        let c = resolve(
            raw(r#"{"experiment":"positive","grid":{"d":2,"N":8,"bc":"periodic"},"frequencies":[2]}"#),
            &Cli::default(),
        )
        .unwrap();
        assert_eq!(c.command, Command::Divcurl);
    }

    #[test]
    fn hole_flag_parses() {
        assert_eq!(parse_hole("1, 2,3,4").unwrap(), [1, 2, 3, 4]);
        assert!(parse_hole("1,2,3").is_err());
    }
}
