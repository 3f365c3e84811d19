//! Matrix Market coordinate format.
//!
//! Output is always `%%MatrixMarket matrix coordinate real general` with
//! 1-based indices and values printed with 17 significant digits, which
//! round-trips every `f64` exactly. Input additionally accepts `integer` and
//! `pattern` fields and `symmetric` / `skew-symmetric` storage.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use crate::complex::ShortSequence;
use crate::error::{Error, Result};
use crate::linops::{Gram, InnerProductSpace, LinearMap};
use crate::scalar::Real;
use crate::sparse::CsrMatrix;

pub const HEADER: &str = "%%MatrixMarket matrix coordinate real general";

pub fn write_matrix<T: Real, W: Write>(m: &CsrMatrix<T>, mut out: W) -> Result<()> {
    writeln!(out, "{HEADER}")?;
    writeln!(out, "{} {} {}", m.nrows(), m.ncols(), m.nnz())?;
    for (i, j, v) in m.triplets() {
        writeln!(out, "{} {} {:.16e}", i + 1, j + 1, v.to_f64())?;
    }
    out.flush()?;
    Ok(())
}

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::MatrixMarket(format!("line {line}: {msg}"))
}

pub fn read_matrix<T: Real, R: BufRead>(input: R) -> Result<CsrMatrix<T>> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty input"))?;
    let header = header?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(bad(1, format!("unsupported header {header:?}")));
    }
    let pattern = match tokens[3].as_str() {
        "real" | "integer" => false,
        "pattern" => true,
        other => return Err(bad(1, format!("unsupported field {other:?}"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => 0,
        "symmetric" => 1,
        "skew-symmetric" => -1,
        other => return Err(bad(1, format!("unsupported symmetry {other:?}"))),
    };

    let mut size = None;
    let mut triplets = Vec::new();
    let mut declared = 0;
    let mut entries = 0;
    for (no, line) in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some((nrows, ncols)) = size else {
            let parsed: Vec<usize> = fields
                .iter()
                .map(|f| f.parse().map_err(|_| bad(no, format!("bad size entry {f:?}"))))
                .collect::<Result<_>>()?;
            if parsed.len() != 3 {
                return Err(bad(no, "size line needs rows, columns and entry count"));
            }
            size = Some((parsed[0], parsed[1]));
            declared = parsed[2];
            continue;
        };
        let want = if pattern { 2 } else { 3 };
        if fields.len() != want {
            return Err(bad(no, format!("expected {want} fields")));
        }
        let idx = |f: &str| -> Result<usize> {
            f.parse::<usize>()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| bad(no, format!("bad index {f:?}")))
        };
        let (i, j) = (idx(fields[0])? - 1, idx(fields[1])? - 1);
        if i >= nrows || j >= ncols {
            return Err(bad(no, format!("entry ({}, {}) outside a {nrows}x{ncols} matrix", i + 1, j + 1)));
        }
        let v = if pattern {
            1.0
        } else {
            fields[2].parse::<f64>().map_err(|_| bad(no, format!("bad value {:?}", fields[2])))?
        };
        entries += 1;
        if entries > declared {
            return Err(bad(no, "more entries than declared"));
        }
        triplets.push((i, j, T::of(v)));
        if symmetry != 0 && i != j {
            triplets.push((j, i, T::of(symmetry as f64 * v)));
        }
    }
    let (nrows, ncols) = size.ok_or_else(|| Error::MatrixMarket("missing size line".into()))?;
    if entries != declared {
        return Err(Error::MatrixMarket(format!("declared {declared} entries, found {entries}")));
    }
    Ok(CsrMatrix::from_triplets(nrows, ncols, triplets))
}

pub fn write_file<T: Real>(m: &CsrMatrix<T>, path: &Path) -> Result<()> {
    write_matrix(m, BufWriter::new(File::create(path)?))
}

pub fn read_file<T: Real>(path: &Path) -> Result<CsrMatrix<T>> {
    read_matrix(BufReader::new(File::open(path)?))
}

/// Writes `A0.mtx`, `A1.mtx`, `gram0.mtx`, `gram1.mtx` and `gram2.mtx` into `dir`.
pub fn export_sequence<T: Real>(s: &ShortSequence<T>, dir: &Path) -> Result<()> {
    write_file(s.a0().entries(), &dir.join("A0.mtx"))?;
    write_file(s.a1().entries(), &dir.join("A1.mtx"))?;
    for (k, space) in [s.h0(), s.h1(), s.h2()].into_iter().enumerate() {
        write_file(space.gram().matrix(), &dir.join(format!("gram{k}.mtx")))?;
    }
    Ok(())
}

fn import_space<T: Real>(dir: &Path, k: usize, dim: usize) -> Result<Arc<InnerProductSpace<T>>> {
    let path = dir.join(format!("gram{k}.mtx"));
    if !path.exists() {
        return Ok(Arc::new(InnerProductSpace::euclidean(dim)));
    }
    let g = read_file::<T>(&path)?;
    if g.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: g.nrows(),
        });
    }
    Ok(Arc::new(InnerProductSpace::new(Gram::new(g)?)))
}

/// Reads `A0.mtx` and `A1.mtx` from `dir`, with gram matrices where present
/// (Euclidean otherwise). The pair is not validated.
pub fn import_operators<T: Real>(dir: &Path) -> Result<(LinearMap<T>, LinearMap<T>)> {
    let a0 = read_file::<T>(&dir.join("A0.mtx"))?;
    let a1 = read_file::<T>(&dir.join("A1.mtx"))?;
    if a0.nrows() != a1.ncols() {
        return Err(Error::SpaceMismatch(format!(
            "A0 has {} rows but A1 has {} columns",
            a0.nrows(),
            a1.ncols()
        )));
    }
    let h0 = import_space(dir, 0, a0.ncols())?;
    let h1 = import_space(dir, 1, a0.nrows())?;
    let h2 = import_space(dir, 2, a1.nrows())?;
    Ok((LinearMap::new(h0, h1.clone(), a0)?, LinearMap::new(h1, h2, a1)?))
}
