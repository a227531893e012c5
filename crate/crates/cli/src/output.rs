//! CSV matrix files and atomic writes.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use l2p_core::DenseMatrix;

/// Shortest text that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Writes `contents` to `dir/name` through a temporary file in `dir`, so a
/// reader never sees a partial file.
pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> anyhow::Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    let target = dir.join(name);
    tmp.persist(&target)
        .with_context(|| format!("writing {}", target.display()))?;
    Ok(())
}

pub fn ensure_dir(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

/// Headerless CSV of numbers, one matrix row per line.
pub fn read_matrix(path: &Path) -> anyhow::Result<DenseMatrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_matrix(&text).with_context(|| format!("in {}", path.display()))
}

pub fn parse_matrix(text: &str) -> anyhow::Result<DenseMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        match cols {
            None => cols = Some(rec.len()),
            Some(c) if c != rec.len() => bail!("line {} has {} values, expected {c}", i + 1, rec.len()),
            _ => {}
        }
        for (j, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .with_context(|| format!("line {}, column {}: `{field}` is not a number", i + 1, j + 1))?;
            data.push(v);
        }
        rows += 1;
    }
    let Some(cols) = cols else {
        bail!("matrix file is empty")
    };
    Ok(DenseMatrix::new(rows, cols, data)?)
}

pub fn matrix_csv(m: &DenseMatrix) -> String {
    let mut s = String::new();
    for row in m.row_iter() {
        let line: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

/// Label used in per-p file names, e.g. `p0.25`.
pub fn p_tag(p: f64) -> String {
    format!("p{p}")
}
